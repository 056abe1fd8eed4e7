"""Recovery of heavy residual coordinates from phase-folded buckets.

One locate call repeats the same experiment t times: draw a random prime
modulus p, fold the residual (x * y) - w into p buckets, and read every
isolated heavy bucket as a (index, value) candidate. An index that lands
alone in its bucket reproduces value * w^index exactly, so the magnitude
rounds to the coefficient and the phase decodes to the index. Candidates
that persist across at least 3/4 of the repetitions are returned; buckets
hit by collisions decode to junk that fails re-encoding or the majority
filter.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from . import folding
from .primes import uniform_prime_below
from .vectors import SparseVector, _canonical, _empty_terms, zero_vector

logger = logging.getLogger(__name__)

ISOLATION_CONSTANT = 16          # prime range and bucket budget multiplier
HEAVY_THRESHOLD = 0.5
REENCODE_TOLERANCE = 0.1

# Cache the pair terms of x * y across repetitions up to this many pairs
# (int64 + complex128 per pair, about 100 MB at the cap).
_PAIR_TERMS_MAX = 1 << 22


@dataclass(frozen=True)
class LocateParams:
    """Derived knobs for one locate call."""

    bucket_budget: int
    delta: float
    reps: int
    prune_threshold: int
    heavy_threshold: float = HEAVY_THRESHOLD
    reencode_tolerance: float = REENCODE_TOLERANCE

    @classmethod
    def for_budget(cls, bucket_budget: int, delta: float) -> "LocateParams":
        if bucket_budget < 1:
            raise ValueError("bucket budget must be positive")
        if not (0 < delta < 1):
            raise ValueError("delta must be in (0, 1)")
        reps = max(1, 5 * math.ceil(math.log2(1.0 / delta)))
        return cls(bucket_budget=bucket_budget, delta=delta, reps=reps,
                   prune_threshold=math.ceil(0.75 * reps))


@dataclass(frozen=True)
class Candidate:
    """Decoded bucket reading: nonzero value at index, seen `hits` times."""

    index: int
    value: int
    hits: int


@dataclass
class LocateReport:
    """Diagnostics for one locate call (primarily for tests and tuning)."""

    params: LocateParams
    reps_run: int = 0
    aborted_rep: int | None = None   # repetition that tripped the budget cutoff
    saw_heavy: bool = False
    heavy_counts: list[int] = field(default_factory=list)
    primes: list[int] = field(default_factory=list)
    index_conflicts: int = 0
    survivors: list[Candidate] = field(default_factory=list)


def decode_index(u: complex, half_order: int) -> int:
    """Exponent j in [0, 2N) whose root w^j is nearest to the reading u.

    Sign tests on the real and imaginary parts confine j to one quarter of
    the circle; an integer ternary search over that arc (padded so a noisy
    reading near a boundary cannot hide the optimum in the neighbour
    quarter) then minimizes |u - w^j|, never scanning all 2N roots.
    """
    n = half_order
    two_n = 2 * n
    re = u.real
    im = u.imag
    if re >= 0 and im >= 0:
        lo, hi = 0, (n + 1) // 2
    elif re < 0 <= im:
        lo, hi = n // 2, n
    elif re <= 0 and im < 0:
        lo, hi = n, n + (n + 1) // 2
    else:
        lo, hi = n + n // 2, two_n
    margin = int(0.07 * n) + 2           # covers phase error of readings within 0.2
    lo -= margin
    hi += margin

    # Squared chord distance; same argmin, no sqrt. float64 angles suffice:
    # adjacent roots are pi/n apart in phase, orders of magnitude above the
    # few-ulp evaluation error for any representable n.
    def dist(j: int) -> float:
        theta = math.pi * ((j % two_n) / n)
        dre = re - math.cos(theta)
        dim = im - math.sin(theta)
        return dre * dre + dim * dim

    while hi - lo > 2:
        m1 = lo + (hi - lo) // 3
        m2 = hi - (hi - lo) // 3
        if dist(m1) < dist(m2):
            hi = m2 - 1
        else:
            lo = m1 + 1
    best = min(range(lo, hi + 1), key=dist)
    return best % two_n


def decode_indices(values: np.ndarray, half_order: int) -> np.ndarray:
    """Vectorized decode_index: nearest-root exponent per reading.

    The nearest root in chord distance is the nearest in phase, so this is
    a rounded phase measurement; agrees with decode_index everywhere except
    exact two-root ties.
    """
    n = half_order
    theta = np.arctan2(values.imag, values.real)
    theta = np.where(theta < 0, theta + 2 * np.pi, theta)
    j = np.floor(theta * (n / np.pi) + 0.5).astype(np.int64)
    j[j >= 2 * n] -= 2 * n
    return j


def sieve_limit_for(bucket_budget: int, dimension: int) -> int:
    """Prime range for isolating hashes: C * B * ceil(log2 N)**2."""
    lg = max(1, int(dimension - 1).bit_length())
    return max(2, ISOLATION_CONSTANT * bucket_budget * lg * lg)


def _decode_heavy(ids: np.ndarray, vals: np.ndarray, n: int,
                  params: LocateParams):
    """Turn heavy buckets into validated (index, value) candidates."""
    mag = np.abs(vals)
    rounded = np.rint(mag)
    keep = rounded >= 1.0
    if not keep.any():
        return _empty_terms()
    vals = vals[keep]
    rounded = rounded[keep]
    exponents = decode_indices(vals, n)
    # Re-encode check: an isolated bucket must reproduce value * w^exponent.
    expected = rounded * folding._unit_root_powers(exponents, n)
    ok = np.abs(vals - expected) <= params.reencode_tolerance
    if not ok.any():
        return _empty_terms()
    exponents = exponents[ok]
    signed = rounded[ok].astype(np.int64)
    negative = exponents >= n       # w^(j + N) = -w^j encodes a negative value
    index = np.where(negative, exponents - n, exponents)
    value = np.where(negative, -signed, signed)
    return index, value


def _group_candidates(idx_all: np.ndarray, val_all: np.ndarray):
    """Unique (index, value) pairs with occurrence counts.

    Fast path packs both into one int64 key so a plain value sort does the
    grouping; applicable whenever index < 2^27 (any embedded product inside
    the Envelope) and |value| < 2^35. Oversized values fall back to lexsort.
    """
    if (int(idx_all.max()) < (1 << 27)
            and int(np.abs(val_all).max()) < (1 << 35)):
        packed = np.sort((idx_all << 36) + (val_all + (1 << 35)))
        starts = np.empty(packed.size, dtype=bool)
        starts[0] = True
        np.not_equal(packed[1:], packed[:-1], out=starts[1:])
        start_pos = np.flatnonzero(starts)
        counts = np.diff(np.append(start_pos, packed.size))
        keys = packed[start_pos]
        return keys >> 36, (keys & ((1 << 36) - 1)) - (1 << 35), counts
    order = np.lexsort((val_all, idx_all))
    si = idx_all[order]
    sv = val_all[order]
    starts = np.empty(si.size, dtype=bool)
    starts[0] = True
    np.logical_or(si[1:] != si[:-1], sv[1:] != sv[:-1], out=starts[1:])
    start_pos = np.flatnonzero(starts)
    counts = np.diff(np.append(start_pos, si.size))
    return si[start_pos], sv[start_pos], counts


def _prune(idx_all: np.ndarray, val_all: np.ndarray, n: int,
           params: LocateParams, report: LocateReport) -> SparseVector:
    """Majority filter plus per-index conflict resolution."""
    si, sv, counts = _group_candidates(idx_all, val_all)
    keep = counts >= params.prune_threshold
    cand_i = si[keep]
    cand_v = sv[keep]
    cand_h = counts[keep]
    if cand_i.size == 0:
        return zero_vector(n)
    # Same index surviving with two values: keep the better-supported one,
    # breaking ties toward the smaller magnitude.
    pick = np.lexsort((np.abs(cand_v), -cand_h, cand_i))
    cand_i = cand_i[pick]
    cand_v = cand_v[pick]
    cand_h = cand_h[pick]
    first = np.empty(cand_i.size, dtype=bool)
    first[0] = True
    np.not_equal(cand_i[1:], cand_i[:-1], out=first[1:])
    dropped = int(cand_i.size - np.count_nonzero(first))
    if dropped:
        report.index_conflicts = dropped
        logger.warning("locate: %d conflicting index candidates dropped", dropped)
    cand_i = cand_i[first]
    cand_v = cand_v[first]
    cand_h = cand_h[first]
    report.survivors = [Candidate(int(i), int(v), int(h))
                        for i, v, h in zip(cand_i, cand_v, cand_h)]
    return _canonical(n, cand_i, cand_v)


def locate_with_report(x: SparseVector, y: SparseVector, w: SparseVector,
                       bucket_budget: int, delta: float,
                       rng: np.random.Generator):
    """locate() plus a LocateReport of per-repetition diagnostics."""
    if not (x.length == y.length == w.length):
        raise ValueError("length mismatch")
    n = x.length
    params = LocateParams.for_budget(bucket_budget, delta)
    report = LocateReport(params=params)
    limit = sieve_limit_for(bucket_budget, n)

    jx, px = x.indices, folding.phased_coeffs(x)
    jy, py = y.indices, folding.phased_coeffs(y)
    jw, pw = w.indices, folding.phased_coeffs(w)
    pair_count = jx.size * jy.size
    pair_terms = None
    if 0 < pair_count <= _PAIR_TERMS_MAX:
        pair_terms = folding.combined_pair_terms(jx, px, jy, py)

    got_i: list[np.ndarray] = []
    got_v: list[np.ndarray] = []
    for rep in range(params.reps):
        p = uniform_prime_below(limit, rng)
        report.primes.append(p)
        report.reps_run = rep + 1
        ids, vals = folding.heavy_residual_buckets(
            jx, px, jy, py, jw, pw, p, params.heavy_threshold,
            pair_terms=pair_terms)
        report.heavy_counts.append(int(ids.size))
        if ids.size > bucket_budget:
            # Residual support overflows the budget; this call cannot
            # separate it, so give up immediately rather than vote on junk.
            report.aborted_rep = rep
            return zero_vector(n), report
        if ids.size == 0:
            continue
        report.saw_heavy = True
        index, value = _decode_heavy(ids, vals, n, params)
        if index.size:
            got_i.append(index)
            got_v.append(value)

    if not got_i:
        return zero_vector(n), report
    z = _prune(np.concatenate(got_i), np.concatenate(got_v), n, params, report)
    return z, report


def locate(x: SparseVector, y: SparseVector, w: SparseVector,
           bucket_budget: int, delta: float,
           rng: np.random.Generator) -> SparseVector:
    """Estimate of the residual (x * y) - w, restricted to recoverable terms.

    With bucket_budget exceeding 16 * l0(residual), the returned vector
    matches the residual except on at most a 5/16 fraction of its support,
    with failure probability at most delta. Always returns the zero vector
    when some repetition sees more than bucket_budget heavy buckets.
    """
    z, _ = locate_with_report(x, y, w, bucket_budget, delta, rng)
    return z
