"""Folding into buckets: roots of unity, short convolutions, residuals."""

import mpmath
import numpy as np
import pytest

from sparseconv.folding import (FoldedVector, cyclic_fft_convolve, fold,
                                folded_residual, heavy_residual_buckets,
                                phased_coeffs, root_of_unity_power)
from sparseconv.vectors import (cyclic_convolve_naive, from_arrays,
                                make_sparse_vector, subtract, zero_vector)

mpmath.mp.prec = 120


def mp_root(j, n):
    theta = mpmath.pi * j / n
    return mpmath.mpc(mpmath.cos(theta), mpmath.sin(theta))


def root_error(j, n):
    got = root_of_unity_power(j, n)
    return float(abs(mpmath.mpc(got.real, got.imag) - mp_root(j, n)))


def test_root_identities():
    assert root_of_unity_power(0, 16) == 1.0 + 0.0j
    # w^N = -1 is the sign carrier for negative coefficients
    assert abs(root_of_unity_power(16, 16) - (-1.0)) < 1e-15
    assert abs(root_of_unity_power(8, 16) - 1j) < 1e-15
    assert abs(root_of_unity_power(24, 16) - (-1j)) < 1e-15


def test_root_against_mpmath():
    assert root_error(5, 8) <= 4 * 2.0**-53
    cases = [(1, 3), (7, 7), (12, 7), (1 << 20, 1 << 24)]
    rng = np.random.default_rng(31)
    n = 1 << 24
    cases += [(int(rng.integers(0, 2 * n)), n) for _ in range(50)]
    for j, half in cases:
        assert root_error(j, half) <= 4 * 2.0**-53, (j, half)


def test_root_exponent_validation():
    with pytest.raises(ValueError):
        root_of_unity_power(-1, 8)
    with pytest.raises(ValueError):
        root_of_unity_power(16, 8)
    with pytest.raises(ValueError):
        root_of_unity_power(0, 0)


def test_root_array_matches_scalar():
    n = 1 << 10
    js = np.arange(0, 2 * n, 37)
    batch = root_of_unity_power(js, n)
    for j, b in zip(js, batch):
        assert b == root_of_unity_power(int(j), n)


def test_fold_single_term_bucket_and_phase():
    # coefficient 3 at index 5 of Z^8 lands in bucket 5 mod 3 = 2
    v = make_sparse_vector(8, [(5, 3)])
    f = fold(v, 3)
    assert f.modulus == 3
    assert f.buckets.shape == (3,)
    assert abs(f.buckets[0]) < 1e-12 and abs(f.buckets[1]) < 1e-12
    assert abs(f.buckets[2] - 3 * root_of_unity_power(5, 8)) < 1e-12


def test_fold_sums_collisions():
    # indices 1 and 5 collide mod 4; bucket holds the phased sum
    v = make_sparse_vector(8, [(1, 2), (5, -1)])
    f = fold(v, 4)
    want = 2 * root_of_unity_power(1, 8) - root_of_unity_power(5, 8)
    assert abs(f.buckets[1] - want) < 1e-12


def test_negative_value_encodes_as_shifted_phase():
    # -c at index j has the phase of +c at j + N, since w^N = -1
    n = 32
    neg = fold(make_sparse_vector(n, [(7, -4)]), 5)
    expect = 4 * root_of_unity_power(7 + n, n)
    assert abs(neg.buckets[7 % 5] - expect) < 1e-12


def test_fold_is_linear():
    rng = np.random.default_rng(6)
    n, m = 128, 11
    for _ in range(10):
        xi = rng.choice(n, size=9, replace=False)
        yi = rng.choice(n, size=9, replace=False)
        x = from_arrays(n, xi, rng.integers(-20, 21, size=9))
        y = from_arrays(n, yi, rng.integers(-20, 21, size=9))
        both = fold(x, m).buckets + fold(y, m).buckets
        summed = fold(make_sparse_vector(
            n, x.to_pairs() + y.to_pairs()), m).buckets
        assert np.allclose(both, summed, atol=1e-10)


def cyclic_conv_quadratic(a, b):
    m = len(a)
    out = np.zeros(m, dtype=np.complex128)
    for i in range(m):
        for j in range(m):
            out[(i + j) % m] += a[i] * b[j]
    return out


def test_fft_convolve_matches_quadratic_at_prime_length():
    rng = np.random.default_rng(13)
    for m in (1, 2, 5, 127):
        a = rng.normal(size=m) + 1j * rng.normal(size=m)
        b = rng.normal(size=m) + 1j * rng.normal(size=m)
        got = cyclic_fft_convolve(a, b)
        assert np.allclose(got, cyclic_conv_quadratic(a, b), atol=1e-9)


def test_fft_convolve_rejects_mismatch():
    with pytest.raises(ValueError):
        cyclic_fft_convolve(np.ones(3), np.ones(4))


def test_fold_commutes_with_convolution():
    # fold(x (*) y, m) == fold(x, m) (*) fold(y, m): the core identity,
    # valid in the no-wrap regime (supports below N/2, as after embedding)
    rng = np.random.default_rng(21)
    n = 256
    for m in (7, 16, 61):
        xi = rng.choice(n // 2, size=12, replace=False)
        yi = rng.choice(n // 2, size=12, replace=False)
        x = from_arrays(n, xi, rng.integers(-50, 51, size=12))
        y = from_arrays(n, yi, rng.integers(-50, 51, size=12))
        direct = fold(cyclic_convolve_naive(x, y), m).buckets
        factored = cyclic_fft_convolve(fold(x, m).buckets, fold(y, m).buckets)
        assert np.max(np.abs(direct - factored)) < 1e-8


def test_fold_factoring_fails_with_wraparound():
    # outside the no-wrap regime the factored form flips signs; make sure
    # the test above is actually exercising a nontrivial precondition
    n = 16
    x = make_sparse_vector(n, [(15, 1)])
    direct = fold(cyclic_convolve_naive(x, x), 3).buckets
    factored = cyclic_fft_convolve(fold(x, 3).buckets, fold(x, 3).buckets)
    assert np.max(np.abs(direct - factored)) > 1.0


def test_folded_residual_matches_exact_residual():
    rng = np.random.default_rng(8)
    n, m = 128, 13
    xi = rng.choice(n // 2, size=10, replace=False)
    yi = rng.choice(n // 2, size=10, replace=False)
    x = from_arrays(n, xi, rng.integers(-30, 31, size=10))
    y = from_arrays(n, yi, rng.integers(-30, 31, size=10))
    exact = cyclic_convolve_naive(x, y)
    # recover all but three of the product terms
    w = make_sparse_vector(n, exact.to_pairs()[:-3])
    want = fold(subtract(exact, w), m).buckets
    got = folded_residual(x, y, w, m)
    assert isinstance(got, FoldedVector)
    assert np.max(np.abs(got.buckets - want)) < 1e-8


def test_folded_residual_zero_when_fully_recovered():
    x = make_sparse_vector(16, [(0, 1), (3, 2)])
    y = make_sparse_vector(16, [(1, 5)])
    w = cyclic_convolve_naive(x, y)
    got = folded_residual(x, y, w, 7)
    assert np.max(np.abs(got.buckets)) < 1e-9


def _phases(v):
    return v.indices.copy(), phased_coeffs(v)


def _heavy_reference(x, y, w, m, threshold):
    """Dense contract: fold the exact residual and keep heavy buckets."""
    residual = subtract(cyclic_convolve_naive(x, y), w)
    buckets = fold(residual, m).buckets
    ids = np.flatnonzero(np.abs(buckets) >= threshold)
    return ids, buckets[ids]


@pytest.mark.parametrize("m,k", [
    (8, 15),      # pairs = 225 > 6 * 8 * 3: FFT route
    (4096, 6),    # pairs = 36, tiny vs fft cost: direct route
])
def test_heavy_buckets_both_routes_match_reference(m, k):
    rng = np.random.default_rng(m * 1000 + k)
    n = 1 << 14
    xi = rng.choice(n // 2, size=k, replace=False)
    yi = rng.choice(n // 2, size=k, replace=False)
    x = from_arrays(n, xi, rng.integers(1, 50, size=k))
    y = from_arrays(n, yi, rng.integers(1, 50, size=k))
    exact = cyclic_convolve_naive(x, y)
    w = make_sparse_vector(n, exact.to_pairs()[::2])
    jx, px = _phases(x)
    jy, py = _phases(y)
    jw, pw = _phases(w)
    ids, vals = heavy_residual_buckets(jx, px, jy, py, jw, pw, m, 0.5)
    want_ids, want_vals = _heavy_reference(x, y, w, m, 0.5)
    assert ids.tolist() == want_ids.tolist()
    order = np.argsort(ids)
    assert np.allclose(vals[order], want_vals[np.argsort(want_ids)], atol=1e-6)


def test_heavy_buckets_empty_inputs():
    e_i = np.empty(0, dtype=np.int64)
    e_v = np.empty(0, dtype=np.complex128)
    ids, vals = heavy_residual_buckets(e_i, e_v, e_i, e_v, e_i, e_v, 64, 0.5)
    assert ids.size == 0 and vals.size == 0
    # x empty but w nonzero: residual is -w
    v = make_sparse_vector(32, [(3, 7)])
    jw, pw = _phases(v)
    ids, vals = heavy_residual_buckets(e_i, e_v, e_i, e_v, jw, pw, 5, 0.5)
    assert ids.tolist() == [3]
    assert abs(vals[0] + 7 * root_of_unity_power(3, 32)) < 1e-12


def test_fold_of_zero_vector():
    f = fold(zero_vector(64), 9)
    assert f.l0 == 0
    assert np.all(f.buckets == 0)
