"""Reproducible test-instance generators.

Instances interpolate between fully random operands and a telescoping
family whose product collapses to two terms no matter how many input
terms participate, which is the interesting regime for output-sensitive
multiplication.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .seeding import GENERATION_STREAM, substream
from .vectors import MAX_DIMENSION, SparseVector, from_arrays, make_sparse_vector


@dataclass(frozen=True)
class InstanceSpec:
    """Parameters of one generated multiplication instance.

    terms is the sparsity of each operand; cancel_fraction in [0, 1]
    moves from uniform random (0) to the pure telescoping family (1),
    where u is an all-ones run and v = z - 1 so the product telescopes
    to exactly two nonzeros.
    """

    n: int
    terms: int
    coeff_bound: int
    cancel_fraction: float
    seed: int

    def __post_init__(self):
        if self.n < 1 or 2 * self.n > MAX_DIMENSION:
            raise ValueError(f"n must be in [1, {MAX_DIMENSION // 2}]")
        if not 1 <= self.terms <= self.n:
            raise ValueError("terms must be in [1, n]")
        if self.coeff_bound < 1:
            raise ValueError("coeff_bound must be positive")
        if not 0.0 <= self.cancel_fraction <= 1.0:
            raise ValueError("cancel_fraction must be in [0, 1]")


def _distinct_indices(rng: np.random.Generator, lo: int, hi: int,
                      count: int) -> np.ndarray:
    """count distinct values from [lo, hi) without materializing the range."""
    span = hi - lo
    if count > span:
        raise ValueError("range too small")
    if count == span:
        return np.arange(lo, hi, dtype=np.int64)
    picked = np.empty(0, dtype=np.int64)
    while picked.size < count:
        need = count - picked.size
        fresh = rng.integers(lo, hi, size=need + max(8, need // 4))
        picked = np.unique(np.concatenate([picked, fresh]))
    return rng.permutation(picked)[:count]


def _nonzero_coeffs(rng: np.random.Generator, count: int, bound: int) -> np.ndarray:
    mag = rng.integers(1, bound + 1, size=count)
    sign = rng.integers(0, 2, size=count) * 2 - 1
    return (mag * sign).astype(np.int64)


def gen_instance(spec: InstanceSpec) -> tuple[SparseVector, SparseVector]:
    """Deterministic (u, v) pair for spec, drawn from spec's own stream."""
    rng = substream(spec.seed, GENERATION_STREAM)
    n, terms, bound = spec.n, spec.terms, spec.coeff_bound
    run = round(spec.cancel_fraction * terms)

    # u: an all-ones run of length `run`, the rest random beyond the run.
    u_idx = [np.arange(run, dtype=np.int64)]
    u_val = [np.ones(run, dtype=np.int64)]
    rest = terms - run
    if rest:
        u_idx.append(_distinct_indices(rng, run, n, rest))
        u_val.append(_nonzero_coeffs(rng, rest, bound))
    u = from_arrays(n, np.concatenate(u_idx), np.concatenate(u_val))

    # v: the canceller z - 1 against the run, plus random filler terms.
    if run >= 1 and n >= 2:
        v_pairs = [(0, -1), (1, 1)]
        filler = round((1.0 - spec.cancel_fraction) * max(0, terms - 2))
    else:
        v_pairs = []
        filler = terms
    if filler:
        lo = 2 if v_pairs else 0
        filler = min(filler, n - lo)
        idx = _distinct_indices(rng, lo, n, filler)
        val = _nonzero_coeffs(rng, filler, bound)
        v_pairs.extend(zip(idx.tolist(), val.tolist()))
    v = make_sparse_vector(n, v_pairs)
    return u, v


def blocked_telescoping_instance(log2_terms: int, runs: int = 16):
    """High-cancellation instance with both operands carrying ~2^log2_terms
    terms in total while the product keeps exactly 2 * runs nonzeros.

    u is an all-ones run of length a. v places the canceller z^(a*i+1) -
    z^(a*i) at every slot i of [0, m) except runs - 1 interior holes, so
    u * v telescopes independently over each contiguous slot block, leaving
    one positive and one negative term per block. Index demand is a * m,
    quadratic in the term count: this is the regime where the quadratic
    baseline pays for every pair while the product stays tiny.

    Returns (u, v, product).
    """
    if log2_terms < 6:
        raise ValueError("need log2_terms >= 6")
    if runs < 1:
        raise ValueError("need at least one run")
    a = 1 << (log2_terms - 1)
    m = (1 << (log2_terms - 2)) - 1
    holes = set()
    for k in range(1, runs):
        holes.add(k * m // runs)
    slots = np.array([i for i in range(m) if i not in holes], dtype=np.int64)
    n = a * m + 1
    if 2 * n > MAX_DIMENSION:
        raise ValueError("instance would exceed the dimension envelope")

    u = from_arrays(n, np.arange(a, dtype=np.int64), np.ones(a, dtype=np.int64))
    v_idx = np.concatenate([a * slots, a * slots + 1])
    v_val = np.concatenate([np.full(slots.size, -1, dtype=np.int64),
                            np.ones(slots.size, dtype=np.int64)])
    v = from_arrays(n, v_idx, v_val)

    prod_pairs = []
    start = 0
    for k in range(1, slots.size + 1):
        if k == slots.size or slots[k] != slots[k - 1] + 1:
            lo, hi = int(slots[start]), int(slots[k - 1])
            prod_pairs.append((a * lo, -1))
            prod_pairs.append((a * (hi + 1), 1))
            start = k
    product = make_sparse_vector(2 * n, prod_pairs)
    return u, v, product
