#!/usr/bin/env python3
"""Multiply two sparse polynomials with all three backends.

The package exposes one contract, the coefficient vector of u * v over
exponents [0, 2n), through three backends:

* poly_multiply_naive: every pair of terms, cost l0(u) * l0(v)
* poly_multiply_dense: FFT over the full dimension, cost n log n
* sparse_multiply:     randomized, cost follows the term counts, and
                       the result is fingerprint-verified before return

This script builds a small instance, runs all three, and checks that
they agree to the coefficient.
"""

import numpy as np

from sparseconv import (InstanceSpec, gen_instance, poly_multiply_dense,
                        poly_multiply_naive, sparse_multiply, substream)

# A dimension-65536 instance with 24 terms per operand. coeff_bound caps
# the coefficient magnitude; cancel_fraction=0 keeps both operands random.
spec = InstanceSpec(n=1 << 16, terms=24, coeff_bound=50,
                    cancel_fraction=0.0, seed=7)
u, v = gen_instance(spec)

print(f"operands: n = {u.length}, l0(u) = {u.l0}, l0(v) = {v.l0}")

exact = poly_multiply_naive(u, v)
dense = poly_multiply_dense(u, v)
fast = sparse_multiply(u, v, substream(7, "multiply"))

assert dense == exact
assert fast == exact
print("all three backends agree")

# The product lives in dimension 2n but carries at most l0(u) * l0(v)
# nonzeros; for random operands almost no pair of index sums collides.
print(f"product:  length = {exact.length}, l0 = {exact.l0} "
      f"(<= {u.l0 * v.l0} pairwise bound)")

print("\nfirst ten terms of the product:")
for idx, coeff in exact.to_pairs()[:10]:
    print(f"  z^{idx:<6d} * {coeff:+d}")

# Sparsity is the whole point: the dense backend touched all 2n slots to
# find these few terms, the sparse one never looked at most of them.
fill = exact.l0 / exact.length
print(f"\noutput fill ratio: {fill:.6f} "
      f"({exact.l0} of {exact.length} slots occupied)")

# Cancellation shrinks the output below the pairwise bound. With
# cancel_fraction=1 the instance telescopes: u is an all-ones run and
# v = z - 1, so the product collapses to exactly two terms.
tele = InstanceSpec(n=1 << 16, terms=512, coeff_bound=50,
                    cancel_fraction=1.0, seed=8)
ut, vt = gen_instance(tele)
pt = sparse_multiply(ut, vt, substream(8, "multiply"))
assert pt == poly_multiply_naive(ut, vt)
print(f"\ntelescoping: l0(u) = {ut.l0}, l0(v) = {vt.l0}, "
      f"product terms = {pt.to_pairs()}")
