#!/usr/bin/env python3
"""Fingerprint verification: cheap, one-sided, and hard to fool.

equality_test checks a claimed product w against the operands without
computing the product. It samples a prime p, evaluates all three
polynomials at random points modulo p, and compares f_x(r) * f_y(r)
with f_w(r). Evaluation needs only the stored terms, so the check costs
about (l0(x) + l0(y) + l0(w)) * rounds modular operations.

The test is one-sided: a correct product is never rejected, and a wrong
one slips through a single call with probability at most delta.
"""

import numpy as np

from sparseconv import (InstanceSpec, PrimeSamplingError, embed_for_product,
                        equality_test, gen_instance, make_sparse_vector,
                        poly_multiply_naive, substream)
from sparseconv.vectors import subtract

DELTA = 0.05


def fingerprint(x, y, w, seed):
    # The prime sampler is Las Vegas: it can exhaust its draw budget and
    # raise instead of returning a composite. That is a resource failure,
    # not a verdict, so the caller retries on a fresh stream.
    for attempt in range(5):
        try:
            return equality_test(x, y, w, DELTA,
                                 substream(seed + 1000 * attempt, "verify"))
        except PrimeSamplingError:
            continue
    raise RuntimeError("prime sampling kept failing; inspect the RNG")

# Part 1: correct products always pass.
passed = 0
trials = 50
for i in range(trials):
    spec = InstanceSpec(n=1 << 10, terms=32, coeff_bound=100,
                        cancel_fraction=0.0, seed=400 + i)
    u, v = gen_instance(spec)
    x, y = embed_for_product(u, v)
    w = poly_multiply_naive(u, v)
    if fingerprint(x, y, w, 400 + i):
        passed += 1
assert passed == trials
print(f"correct products accepted: {passed}/{trials} (guaranteed)")

# Part 2: corrupt one coefficient and count how often the bump is
# caught. Any single-term error changes the polynomial at almost all
# evaluation points, so detection should beat 1 - delta comfortably.
rng = np.random.default_rng(41)
spec = InstanceSpec(n=1 << 10, terms=32, coeff_bound=100,
                    cancel_fraction=0.0, seed=999)
u, v = gen_instance(spec)
x, y = embed_for_product(u, v)
w = poly_multiply_naive(u, v)

caught = 0
trials = 500
for i in range(trials):
    idx = int(rng.integers(0, w.length))
    bump = int(rng.integers(1, 4)) * (1 if rng.integers(0, 2) else -1)
    bad = subtract(w, make_sparse_vector(w.length, [(idx, bump)]))
    assert bad != w
    if not fingerprint(x, y, bad, 5000 + i):
        caught += 1
print(f"corrupted products rejected: {caught}/{trials} "
      f"(expected at least {round((1 - DELTA) * trials)})")
assert caught >= (1 - DELTA) * trials

# This asymmetry is what makes the multiplication driver Las Vegas: it
# keeps guessing sparsity budgets and only returns an accumulation that
# survived the fingerprint, so a wrong vector is never handed back.
print("a rejection is always correct; only acceptances carry the "
      f"delta = {DELTA} risk")
