#!/usr/bin/env python3
"""Output-sensitive scaling on a high-cancellation family.

blocked_telescoping_instance builds operands with 2^e terms in total
whose product telescopes down to 32 nonzeros, while the index range
grows quadratically in the term count. Doubling e therefore:

* quadruples the pairwise work of the naive backend,
* leaves the product sparsity unchanged at 32.

The sparse backend's budget loop keys off that output sparsity, so its
time should grow far slower than 4x per step. Timings are wall-clock
medians over a few repeats on one core; expect noise.
"""

import statistics
import time

from sparseconv import blocked_telescoping_instance, sparse_multiply, substream
from sparseconv.vectors import poly_multiply_naive

REPEATS = 2
SIZES = range(10, 15)


def median_time(fn, repeats=REPEATS):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


rows = []
for e in SIZES:
    u, v, product = blocked_telescoping_instance(e)
    assert product.l0 == 32

    def run_sparse(e=e, u=u, v=v, product=product):
        got = sparse_multiply(u, v, substream(100 * e, "multiply"))
        assert got == product

    t_sparse = median_time(run_sparse)
    t_naive = median_time(lambda: poly_multiply_naive(u, v))
    rows.append((e, u.l0 + v.l0, u.l0 * v.l0, t_sparse, t_naive))

print(f"{'e':>3} {'terms':>7} {'pairs':>10} {'sparse (s)':>11} "
      f"{'naive (s)':>10} {'growth s':>9} {'growth n':>9}")
for i, (e, terms, pairs, ts, tn) in enumerate(rows):
    if i == 0:
        gs = gn = ""
    else:
        gs = f"{ts / rows[i - 1][3]:.2f}x"
        gn = f"{tn / rows[i - 1][4]:.2f}x"
    print(f"{e:>3} {terms:>7} {pairs:>10} {ts:>11.3f} {tn:>10.3f} "
          f"{gs:>9} {gn:>9}")

# The pairs column is what the naive backend actually enumerates, so
# its growth factor hovers around 4x per step, with memory traffic
# pushing some steps well past that. The sparse column grows with the term count instead: the
# product never gets denser, so the budget loop stops at the same
# point every time. The randomized pipeline pays a large constant per
# call, which is why the small sizes still favor naive; the growth gap
# closes that lead within a few doublings.
print("\nproduct sparsity stayed at 32 nonzeros for every size")
last = rows[-1]
if last[3] < last[4]:
    print(f"at e = {last[0]} the sparse backend is already "
          f"{last[4] / last[3]:.1f}x faster than naive")
