"""Modular-evaluation fingerprint: one-sided product verification."""

import numpy as np
import pytest

from sparseconv.fingerprint import (FingerprintParams, eval_sparse_poly_mod,
                                    equality_test)
from sparseconv.primes import PrimeSamplingError
from sparseconv.vectors import (cyclic_convolve_naive, embed_for_product,
                                from_arrays, make_sparse_vector, zero_vector)


def test_eval_known_values():
    f = make_sparse_vector(8, [(0, 1), (1, 1), (2, 1), (3, 1)])
    assert eval_sparse_poly_mod(f, 2, 101) == 15  # 1 + 2 + 4 + 8
    g = make_sparse_vector(8, [(3, 5)])
    assert eval_sparse_poly_mod(g, 2, 1000) == 40
    assert eval_sparse_poly_mod(zero_vector(8), 2, 101) == 0


def test_eval_negative_coefficients():
    f = make_sparse_vector(4, [(0, -1), (1, 1)])
    # f(3) = 2 regardless of modulus
    assert eval_sparse_poly_mod(f, 3, 97) == 2
    f2 = make_sparse_vector(4, [(0, -5)])
    assert eval_sparse_poly_mod(f2, 0, 7) == 2  # -5 mod 7


def test_eval_matches_builtin_pow():
    rng = np.random.default_rng(10)
    for _ in range(40):
        n = 1 << 12
        k = int(rng.integers(1, 12))
        idx = np.sort(rng.choice(n, size=k, replace=False))
        val = rng.integers(-100, 101, size=k)
        val[val == 0] = 1
        f = from_arrays(n, idx, val)
        p = 10007
        r = int(rng.integers(0, p))
        want = sum(int(c) * pow(r, int(j), p) for j, c in f.to_pairs()) % p
        assert eval_sparse_poly_mod(f, r, p) == want


def test_eval_table_and_modpow_paths_agree():
    p = 4001
    r = 1234
    # dense support on a short range: table path fires (l0 * bits > top)
    dense = make_sparse_vector(64, [(j, j + 1) for j in range(32)])
    # same polynomial padded into a huge dimension: per-term modpow path
    sparse = make_sparse_vector(1 << 22,
                                [(j, j + 1) for j in range(32)])
    assert (eval_sparse_poly_mod(dense, r, p)
            == eval_sparse_poly_mod(sparse, r, p))
    lone = make_sparse_vector(1 << 22, [((1 << 22) - 1, 9)])
    want = 9 * pow(r, (1 << 22) - 1, p) % p
    assert eval_sparse_poly_mod(lone, r, p) == want


def test_eval_rounds_formula():
    params = FingerprintParams()
    # log2(3/0.1)/log2(64) = 4.9/6 -> ceil = 1, plus 1
    assert params.eval_rounds(0.1) == 2
    assert params.eval_rounds(0.0001) >= 3
    with pytest.raises(ValueError):
        params.eval_rounds(0.0)


def test_rejects_bad_arguments():
    v = make_sparse_vector(4, [(0, 1)])
    with pytest.raises(ValueError):
        eval_sparse_poly_mod(v, 2, 1)
    with pytest.raises(ValueError):
        equality_test(v, v, make_sparse_vector(8, [(0, 1)]), 0.1,
                      np.random.default_rng(0))
    with pytest.raises(ValueError):
        equality_test(v, v, v, 2.0, np.random.default_rng(0))


def random_triple(seed, n=512, k=10):
    rng = np.random.default_rng(seed)
    xi = rng.choice(n, size=k, replace=False)
    yi = rng.choice(n, size=k, replace=False)
    u = from_arrays(n, xi, rng.integers(1, 100, size=k))
    v = from_arrays(n, yi, rng.integers(1, 100, size=k))
    x, y = embed_for_product(u, v)
    return x, y, cyclic_convolve_naive(x, y)


def answer_with_retry(x, y, w, delta, seed, tries=4):
    """Retry prime-sampling failures; the yes/no answer quality is what is
    under test here, not the sampler's patience."""
    for k in range(tries):
        try:
            return equality_test(x, y, w, delta, np.random.default_rng(seed + 1000 * k))
        except PrimeSamplingError:
            continue
    raise AssertionError("sampler kept failing; should be ~1% per call")


def test_true_products_always_pass():
    # one-sidedness: a correct triple can never be rejected, at any delta
    for seed in range(100):
        x, y, w = random_triple(seed)
        assert answer_with_retry(x, y, w, 0.1, seed + 1)
    for seed in range(20):
        x, y, w = random_triple(seed)
        assert answer_with_retry(x, y, w, 1e-6, seed + 1)


def test_perturbed_products_usually_fail():
    rejected = 0
    accepted = 0
    trials = 300
    for seed in range(trials):
        x, y, w = random_triple(seed)
        rng = np.random.default_rng(10_000 + seed)
        mode = seed % 3
        pairs = w.to_pairs()
        if mode == 0:     # change one coefficient
            i, c = pairs[int(rng.integers(len(pairs)))]
            bad = [(j, cc) for j, cc in pairs if j != i] + [(i, c + 1)]
        elif mode == 1:   # drop one term
            i, _ = pairs[int(rng.integers(len(pairs)))]
            bad = [(j, cc) for j, cc in pairs if j != i]
        else:             # add a spurious term
            free = int(rng.integers(w.length))
            while any(j == free for j, _ in pairs):
                free = int(rng.integers(w.length))
            bad = pairs + [(free, 7)]
        wrong = make_sparse_vector(w.length, bad)
        try:
            if not equality_test(x, y, wrong, 0.1, rng):
                rejected += 1
            else:
                accepted += 1
        except PrimeSamplingError:
            pass    # resource failure, not an answer; ~1% of calls
    # a false accept needs the random point to hit a root of a nonzero
    # degree-N polynomial mod p > 64N: rare far beyond the delta bound
    assert accepted == 0
    assert rejected >= int(0.95 * trials)


def test_equality_is_deterministic_per_seed():
    x, y, w = random_triple(5)
    outcomes = {equality_test(x, y, w, 0.05, np.random.default_rng(3))
                for _ in range(5)}
    assert outcomes == {True}
