#!/usr/bin/env python3
"""Inside the driver: budget doubling outside, peeling rounds inside.

sparse_multiply never knows the product sparsity up front. It guesses a
bucket budget, runs the peeling recovery at that budget, fingerprints
the accumulated vector, and doubles the budget on rejection. The peel
itself runs locate rounds with halving budgets, subtracting everything
recovered so far, until a round sees no heavy bucket at all.

This script replays that logic by hand on one instance, using the
internal trace hook of hash_and_iterate to show what each budget and
each round actually did.
"""

import numpy as np

from sparseconv import (InstanceSpec, embed_for_product, equality_test,
                        gen_instance, poly_multiply_naive, substream)
from sparseconv.driver import _hash_and_iterate
from sparseconv.vectors import subtract

spec = InstanceSpec(n=1 << 14, terms=192, coeff_bound=100,
                    cancel_fraction=0.0, seed=31)
u, v = gen_instance(spec)
exact = poly_multiply_naive(u, v)
print(f"n = {spec.n}, l0(u) = {u.l0}, l0(v) = {v.l0}, "
      f"product terms = {exact.l0}")

# The pipeline works on the cyclic embedding: both operands are placed
# in dimension 2n, where the product cannot wrap around.
x, y = embed_for_product(u, v)
rng = substream(31, "multiply")
verify_rng = substream(31, "verify")

# Sweep budgets the way the driver does (doubling), but print verdicts
# instead of returning at the first success. A budget below the number
# of occupied buckets makes every locate repetition abort, so the peel
# comes back empty and the fingerprint rejects it. Once the budget
# clears that bar, recovery is total and the fingerprint accepts.
print(f"\n{'budget':>7}  {'recovered':>9}  {'residual':>8}  fingerprint")
for log_b in range(11, 17):
    budget = 1 << log_b
    w, trace = _hash_and_iterate(x, y, budget, 0.01, rng)
    ok = equality_test(x, y, w, 0.01, verify_rng)
    residual = subtract(exact, w).l0
    print(f"{budget:>7}  {w.l0:>9}  {residual:>8}  "
          f"{'accept' if ok else 'reject'}")
    if ok:
        assert w == exact
        break

# Now look inside the successful budget: the per-round trace. Round 0
# recovers the bulk of the product; the next round sees the residual
# fall below the heavy threshold everywhere and the loop exits early.
# Budgets halve per round because the residual shrinks at least that
# fast; quiet rounds certify convergence.
w, trace = _hash_and_iterate(x, y, budget, 0.01, substream(32, "multiply"))
print(f"\nper-round trace at budget {budget}:")
print(f"{'round':>5}  {'budget':>7}  {'heavy seen':>10}  "
      f"{'recovered':>9}  {'residual':>8}")
for r, (w_after, report) in enumerate(trace):
    heavy = max(report.heavy_counts) if report.heavy_counts else 0
    print(f"{r:>5}  {report.params.bucket_budget:>7}  {heavy:>10}  "
          f"{w_after.l0:>9}  {subtract(exact, w_after).l0:>8}")
assert w == exact

# The abort gate is what keeps wrong budgets cheap: a repetition stops
# as soon as it counts more heavy buckets than the budget allows, so
# undersized rounds cost little and the doubling loop pays mostly for
# the one budget that works.
print("\nundersized budgets abort instead of decoding garbage; the "
      "fingerprint gate is what lets the driver trust a success")
