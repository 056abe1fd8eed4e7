"""Randomized verification that a claimed product is the true product.

Polynomials are compared through their evaluations at random points of a
random prime field: f_x(r) * f_y(r) = f_w(r) mod p holds always when
x * y = w, and fails at each point with good probability otherwise, since
a nonzero polynomial of degree < N has at most N - 1 roots mod p while p
is drawn beyond 64 * N. The test is one-sided: "unequal" is always true.

Callers must present operands whose product does not wrap: the driver
guarantees this by embedding degree-(n-1) inputs at dimension N = 2n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .primes import modpow, random_prime_in_range
from .vectors import SparseVector

RANGE_MULTIPLIER = 64        # prime field size: [64N, 128N]


@dataclass(frozen=True)
class FingerprintParams:
    range_multiplier: int = RANGE_MULTIPLIER

    def eval_rounds(self, delta: float) -> int:
        """Number of evaluation points for total failure at most delta/3 + delta/3."""
        if not (0 < delta < 1):
            raise ValueError("delta must be in (0, 1)")
        per_point = math.log2(self.range_multiplier)
        return math.ceil(math.log2(3.0 / delta) / per_point) + 1


DEFAULT_PARAMS = FingerprintParams()


def eval_sparse_poly_mod(f: SparseVector, point: int, modulus: int) -> int:
    """Evaluate sum of coeff_j * point**j over the stored terms, mod modulus.

    Term-by-term square-and-multiply costs l0 * log2(max index) modular
    products; when the support is dense enough that a full power table up
    to the top index is cheaper, the table is used instead.
    """
    if modulus < 2:
        raise ValueError("modulus must be at least 2")
    if f.is_zero:
        return 0
    point = point % modulus
    top = int(f.indices[-1])
    bits = max(1, top.bit_length())
    total = 0
    if f.l0 * bits > top:
        powers = 1
        table = np.empty(f.l0, dtype=object)
        want = f.indices
        pos = 0
        value = 1
        for exponent in range(top + 1):
            if pos < want.size and exponent == want[pos]:
                table[pos] = value
                pos += 1
            value = value * point % modulus
        for c, pw in zip(f.coeffs, table):
            total += int(c) % modulus * pw
        return total % modulus
    for j, c in zip(f.indices, f.coeffs):
        total += int(c) % modulus * modpow(point, int(j), modulus)
    return total % modulus


def equality_test(x: SparseVector, y: SparseVector, w: SparseVector,
                  delta: float, rng: np.random.Generator,
                  params: FingerprintParams = DEFAULT_PARAMS) -> bool:
    """True iff the evaluations are consistent with x * y = w.

    A true equality always returns True. An inequality survives with
    probability at most delta (prime sampling failure and per-point root
    collisions both counted).
    """
    if not (x.length == y.length == w.length):
        raise ValueError("length mismatch")
    if not (0 < delta < 1):
        raise ValueError("delta must be in (0, 1)")
    n = x.length
    c = params.range_multiplier
    p = random_prime_in_range(c * n, 2 * c * n, delta / 3.0, rng)
    for _ in range(params.eval_rounds(delta)):
        r = int(rng.integers(0, p))
        fx = eval_sparse_poly_mod(x, r, p)
        fy = eval_sparse_poly_mod(y, r, p)
        fw = eval_sparse_poly_mod(w, r, p)
        if fx * fy % p != fw:
            return False
    return True
