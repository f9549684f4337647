import numpy as np
import pytest
from hypothesis import given, strategies as st

from loccdisc.errors import ShapeError, SizeLimitError
from loccdisc.matrixcore import (
    PartitionedOperator,
    compress,
    contract_party,
    contract_party_density,
    eig_hermitian,
    eig_unitary,
    fix_gauge,
    orthonormal_frame,
    random_density,
    random_local_unitary,
    random_state,
    random_unitary,
    tensor,
    tensor_all,
)

seeds = st.integers(0, 2 ** 31 - 1)


def test_partitioned_operator_checks_dims():
    with pytest.raises(ShapeError):
        PartitionedOperator(np.eye(4), (2, 3))
    with pytest.raises(ShapeError):
        PartitionedOperator(np.eye(4), (4, 0))
    with pytest.raises(ShapeError):
        PartitionedOperator(np.ones((2, 3)), (2,))


def test_tensor_cap():
    with pytest.raises(SizeLimitError):
        tensor(np.eye(64), np.eye(65))
    assert tensor_all([np.eye(2), np.eye(3)]).shape == (6, 6)


@given(seeds)
def test_random_unitary_is_unitary(seed):
    U = random_unitary(4, seed)
    assert np.allclose(U.conj().T @ U, np.eye(4), atol=1e-12)
    L = random_local_unitary((2, 3), seed)
    assert np.allclose(L.conj().T @ L, np.eye(6), atol=1e-12)


@given(seeds)
def test_eig_hermitian_descending_and_reconstructs(seed):
    rng = np.random.default_rng(seed)
    G = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    H = G + G.conj().T
    es = eig_hermitian(H)
    assert np.all(np.diff(es.values) <= 1e-12)
    assert np.allclose(es.vectors @ np.diag(es.values) @ es.vectors.conj().T, H, atol=1e-10)


@given(seeds)
def test_eig_unitary_reconstructs(seed):
    U = random_unitary(5, seed)
    es = eig_unitary(U)
    assert np.allclose(np.abs(es.values), 1, atol=1e-10)
    assert np.allclose(es.vectors @ np.diag(es.values) @ es.vectors.conj().T, U, atol=1e-10)


@given(seeds, st.integers(0, 2))
def test_contract_party_matches_dense_sandwich(seed, party):
    rng = np.random.default_rng(seed)
    dims = (2, 3, 2)
    A = PartitionedOperator(rng.standard_normal((12, 12)) + 1j * rng.standard_normal((12, 12)), dims)
    s = random_state(dims[party], rng)
    red = contract_party(A, party, s)
    # oracle: embed s with identities and sandwich
    mats = [np.eye(d) for d in dims]
    mats[party] = s.reshape(-1, 1)
    V = tensor_all(mats)
    assert np.allclose(red.matrix, V.conj().T @ A.matrix @ V, atol=1e-12)
    rho = random_density(dims[party], rng)
    dens = contract_party_density(A, party, rho)
    mats[party] = np.eye(dims[party])
    # oracle: sum over eigen-decomposition of rho
    w, v = np.linalg.eigh(rho)
    ref = sum(wk * contract_party(A, party, v[:, k]).matrix for k, wk in enumerate(w))
    assert np.allclose(dens.matrix, ref, atol=1e-12)


def test_orthonormal_frame_drops_dependent():
    e0, e1 = np.eye(3)[0], np.eye(3)[1]
    F, dropped = orthonormal_frame([e0, e1, e0 + e1, np.zeros(3)])
    assert F.shape == (3, 2) and dropped == [2, 3]
    assert np.allclose(F.conj().T @ F, np.eye(2))


def test_compress_restricts():
    A = np.diag([1.0, 2.0, 3.0])
    c = compress(A, [np.eye(3)[0], np.eye(3)[2]])
    assert np.allclose(c.matrix, np.diag([1.0, 3.0]))
    with pytest.raises(ValueError):
        compress(A, [])


def test_fix_gauge():
    v = fix_gauge(np.array([0, 1j, 1]) / np.sqrt(2))
    assert v[1].real > 0 and abs(v[1].imag) < 1e-15
