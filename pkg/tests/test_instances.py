"""Instance generators and the deterministic seeding layer."""

import numpy as np
import pytest

from sparseconv.instances import (InstanceSpec, blocked_telescoping_instance,
                                  gen_instance)
from sparseconv.seeding import (DEFAULT_SEED, SEED_ENV_VAR, resolve_seed,
                                substream)
from sparseconv.vectors import make_sparse_vector, poly_multiply_naive


def test_substream_independence_and_determinism():
    a = substream(7, "generation").integers(0, 1 << 30, size=8)
    b = substream(7, "generation").integers(0, 1 << 30, size=8)
    c = substream(7, "multiply").integers(0, 1 << 30, size=8)
    d = substream(8, "generation").integers(0, 1 << 30, size=8)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert not np.array_equal(a, d)


def test_resolve_seed_precedence(monkeypatch):
    monkeypatch.delenv(SEED_ENV_VAR, raising=False)
    assert resolve_seed(None) == DEFAULT_SEED
    assert resolve_seed(42) == 42
    monkeypatch.setenv(SEED_ENV_VAR, "17")
    assert resolve_seed(None) == 17
    assert resolve_seed(42) == 42   # flag beats env
    monkeypatch.setenv(SEED_ENV_VAR, "not-a-seed")
    with pytest.raises(ValueError):
        resolve_seed(None)


def test_spec_validation():
    with pytest.raises(ValueError):
        InstanceSpec(n=0, terms=1, coeff_bound=1, cancel_fraction=0, seed=0)
    with pytest.raises(ValueError):
        InstanceSpec(n=8, terms=9, coeff_bound=1, cancel_fraction=0, seed=0)
    with pytest.raises(ValueError):
        InstanceSpec(n=8, terms=4, coeff_bound=0, cancel_fraction=0, seed=0)
    with pytest.raises(ValueError):
        InstanceSpec(n=8, terms=4, coeff_bound=1, cancel_fraction=1.5, seed=0)


def test_gen_instance_shapes_and_bounds():
    spec = InstanceSpec(n=1 << 10, terms=64, coeff_bound=100,
                        cancel_fraction=0.0, seed=3)
    u, v = gen_instance(spec)
    assert u.length == v.length == 1 << 10
    assert u.l0 == 64
    assert 1 <= v.l0 <= 64
    for w in (u, v):
        assert np.all(np.abs(w.coeffs) <= 100)
        assert np.all(w.coeffs != 0)


def test_gen_instance_deterministic():
    spec = InstanceSpec(n=256, terms=32, coeff_bound=50,
                        cancel_fraction=0.3, seed=11)
    u1, v1 = gen_instance(spec)
    u2, v2 = gen_instance(spec)
    assert u1 == u2 and v1 == v2
    other = gen_instance(InstanceSpec(n=256, terms=32, coeff_bound=50,
                                      cancel_fraction=0.3, seed=12))
    assert other[0] != u1 or other[1] != v1


def test_gen_instance_full_cancellation_product():
    # cancel_fraction 1: u is an all-ones run, v = z - 1, and the product
    # telescopes to exactly two terms
    spec = InstanceSpec(n=16, terms=4, coeff_bound=100,
                        cancel_fraction=1.0, seed=0)
    u, v = gen_instance(spec)
    assert u == make_sparse_vector(16, [(j, 1) for j in range(4)])
    assert v == make_sparse_vector(16, [(0, -1), (1, 1)])
    assert poly_multiply_naive(u, v) == make_sparse_vector(
        32, [(0, -1), (4, 1)])


def test_gen_instance_interpolates():
    spec = InstanceSpec(n=1 << 8, terms=32, coeff_bound=10,
                        cancel_fraction=0.5, seed=5)
    u, v = gen_instance(spec)
    # half the u-terms form the ones run
    assert np.array_equal(u.indices[:16], np.arange(16))
    assert np.all(u.coeffs[:16] == 1)
    assert u.l0 == 32
    # v keeps the canceller plus random filler
    assert (0, -1) in v.to_pairs() and (1, 1) in v.to_pairs()


def test_blocked_telescoping_product_matches_naive():
    for e in (6, 7, 8):
        u, v, product = blocked_telescoping_instance(e)
        assert poly_multiply_naive(u, v) == product


def test_blocked_telescoping_sizes():
    runs = 16
    u, v, product = blocked_telescoping_instance(10, runs=runs)
    # operand sparsity ~2^10 split between u and v
    assert u.l0 == 1 << 9
    assert (1 << 9) - 40 <= v.l0 <= 1 << 10
    # output stays at two terms per contiguous block
    assert product.l0 == 2 * runs
    assert np.all(np.abs(product.coeffs) == 1)


def test_blocked_telescoping_validation():
    with pytest.raises(ValueError):
        blocked_telescoping_instance(5)
    with pytest.raises(ValueError):
        blocked_telescoping_instance(8, runs=0)
