import numpy as np
import pytest
from hypothesis import given, strategies as st

from loccdisc.errors import DomainError
from loccdisc.localrange import (
    ProductState,
    conditional_operator,
    geodesic_path,
    hermitian_local_interval,
    hermitian_local_isotropic,
    local_value,
    min_abs_local,
    product_density_value,
    purify_product_value,
    random_product_state,
)
from loccdisc.matrixcore import PartitionedOperator, random_density, random_unitary
from loccdisc.oracle import GridSpec, grid_min_local

seeds = st.integers(0, 2 ** 31 - 1)
EXAMPLE = PartitionedOperator(np.diag([1, 1j, 1j, -1]), (2, 2))


def rand_op(rng, dims):
    d = int(np.prod(dims))
    return PartitionedOperator(rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d)), dims)


def test_product_state_requires_normalized():
    with pytest.raises(DomainError):
        ProductState((np.array([1.0, 1.0]),))
    s = ProductState.normalized([np.array([1.0, 1.0]), np.array([0, 2.0])])
    assert np.allclose(s.vector(), np.array([0, 1, 0, 1]) / np.sqrt(2))


@given(seeds)
def test_local_value_matches_dense(seed):
    rng = np.random.default_rng(seed)
    A = rand_op(rng, (2, 3))
    s = random_product_state(A.dims, rng)
    v = s.vector()
    assert abs(local_value(A, s) - np.vdot(v, A.matrix @ v)) < 1e-12
    for k in range(2):
        M = conditional_operator(A, s, k)
        x = s.party_states[k]
        assert abs(np.vdot(x, M @ x) - local_value(A, s)) < 1e-12


def test_example_local_range_is_not_convex():
    assert local_value(EXAMPLE, ProductState((np.eye(2)[0], np.eye(2)[0]))) == 1
    assert local_value(EXAMPLE, ProductState((np.eye(2)[1], np.eye(2)[1]))) == -1
    res = min_abs_local(EXAMPLE, seed=0)
    assert abs(res.value) >= 0.5 - 1e-3
    # minimizers are equal superpositions on both parties
    for x in res.state.party_states:
        assert np.allclose(np.abs(x), 1 / np.sqrt(2), atol=1e-3)


def test_min_abs_local_finds_zero_for_traceless_product():
    A = PartitionedOperator(np.kron(np.diag([1.0, -1.0]), np.eye(2)), (2, 2))
    assert abs(min_abs_local(A, seed=3).value) < 1e-12


@given(st.integers(0, 50))
def test_min_abs_local_not_worse_than_grid(seed):
    rng = np.random.default_rng(seed)
    A = PartitionedOperator(random_unitary(4, rng), (2, 2))
    res = min_abs_local(A, seed=seed, starts=8)
    g = grid_min_local(A, GridSpec(resolution=12))
    assert abs(res.value) <= g.value + 1e-9


@given(seeds)
def test_hermitian_interval_brackets_samples(seed):
    rng = np.random.default_rng(seed)
    G = rand_op(rng, (2, 2)).matrix
    H = PartitionedOperator(G + G.conj().T, (2, 2))
    iv = hermitian_local_interval(H, seed=seed, starts=8)
    assert abs(local_value(H, iv.lo_state).real - iv.lo) < 1e-10
    for _ in range(20):
        v = local_value(H, random_product_state(H.dims, rng)).real
        assert iv.lo - 1e-9 <= v <= iv.hi + 1e-9


def test_hermitian_interval_rejects_non_hermitian():
    with pytest.raises(DomainError):
        hermitian_local_interval(EXAMPLE)


def test_hermitian_isotropic_on_reflection():
    phi = np.array([np.sqrt(0.75), 0, 0, 0.5])
    H = PartitionedOperator(np.eye(4) - 2 * np.outer(phi, phi), (2, 2))
    iso = hermitian_local_isotropic(H, seed=1)
    assert abs(local_value(H, iso.state)) <= 1e-9


def test_geodesic_path_endpoints():
    a = random_product_state((2, 3), 0)
    b = random_product_state((2, 3), 1)
    for t, ref in ((0.0, a), (1.0, b)):
        s = geodesic_path(a, b, t)
        for x, y in zip(s.party_states, ref.party_states):
            assert abs(abs(np.vdot(x, y)) - 1) < 1e-12


@given(seeds, st.sampled_from([(2, 2), (2, 3)]))
def test_purification_reproduces_mixed_value(seed, dims):
    rng = np.random.default_rng(seed)
    A = rand_op(rng, dims)
    rhos = [random_density(d, rng) for d in dims]
    s = purify_product_value(A, rhos, seed=seed)
    assert abs(local_value(A, s) - product_density_value(A, rhos)) <= 1e-8


def test_purification_of_maximally_mixed_traceless():
    A = PartitionedOperator(np.kron(np.diag([1.0, -1.0]), np.eye(2)), (2, 2))
    s = purify_product_value(A, [np.eye(2) / 2] * 2)
    assert np.allclose(s.party_states[0], np.array([1, 1]) / np.sqrt(2))
    assert np.allclose(s.party_states[1], [1, 0])
