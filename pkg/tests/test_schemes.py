import dataclasses

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import SX, SZ, max_entangled, reflection
from loccdisc.errors import DomainError, InternalContradiction, SearchFailure, ValidationError
from loccdisc.hermbasis import canonical_phase, hermiticity_defect
from loccdisc.localrange import ProductState, local_value
from loccdisc.matrixcore import PartitionedOperator, random_unitary
from loccdisc.schemes import (
    apply_copywise,
    choose_pivot,
    dense_overlap,
    lattice_path,
    parallel_plan,
    plan_discrimination,
    plan_multi,
    scheme_overlap,
    sequential_search,
    simulate_elimination,
    two_qubit_hermitian_plan,
    verify_scheme,
)
from loccdisc.oracle import dense_tensor_power


def entangled_across_copies(x, d, N, tol=1e-9):
    t = x.reshape((d,) * N)
    for j in range(N):
        m = np.moveaxis(t, j, 0).reshape(d, -1)
        if np.linalg.svd(m, compute_uv=False)[1:].max(initial=0) > tol:
            return True
    return False


def test_lattice_path_changes_last_party_first():
    assert lattice_path((0, 0, 0), (1, 0, 2)) == [(0, 0, 0), (0, 0, 2), (1, 0, 2)]


def test_pivot_on_colinear_lattice_is_a_contradiction():
    with pytest.raises(InternalContradiction):
        choose_pivot(np.ones((4, 4)))


def test_worked_parallel_scheme(worked_pair):
    I, U = worked_pair
    s = parallel_plan(PartitionedOperator(U.matrix, U.dims))
    assert s.kind == "parallel" and s.copies == 2 and s.uses == 2
    a, b = s.input.party_states
    assert np.allclose(a, np.array([1, 0, 0, 1]) / np.sqrt(2))
    assert np.allclose(b, [0, 0, 0, 1])
    assert abs(dense_overlap(I.matrix, U.matrix, s)) <= 1e-12


def test_single_party_parallel():
    A = PartitionedOperator(np.diag([1, np.exp(1j * np.pi / 3)]), (2,))
    s = parallel_plan(A)
    assert s.copies == 3
    v = s.input.vector()
    assert abs(np.vdot(v, dense_tensor_power(A.matrix, 3) @ v)) <= 1e-12


def test_parallel_rejects_hermitian():
    with pytest.raises(DomainError):
        parallel_plan(PartitionedOperator(np.kron(SZ, SX), (2, 2)))


@settings(max_examples=15)
@given(st.integers(0, 10 ** 6), st.sampled_from([(2, 2), (2, 3), (3,)]))
def test_parallel_on_random_unitaries(seed, dims):
    d = int(np.prod(dims))
    A = PartitionedOperator(random_unitary(d, seed), dims)
    s = parallel_plan(A)
    assert s.residual <= 1e-9
    v = s.input.vector()
    assert abs(np.vdot(v, apply_copywise(A.matrix, dims, s.copies, v))) <= 1e-9
    # only one party holds entanglement among its copies
    ent = [entangled_across_copies(x, dk, s.copies) for x, dk in zip(s.input.party_states, dims)]
    assert sum(ent) <= 1


@settings(max_examples=10)
@given(st.integers(0, 10 ** 6))
def test_parallel_on_traceless_unitaries(seed):
    rng = np.random.default_rng(seed)
    V = random_unitary(4, rng)
    A = V @ np.diag(np.exp(1j * np.array([0, np.pi / 2, np.pi, 3 * np.pi / 2]))) @ V.conj().T
    s = parallel_plan(PartitionedOperator(A, (2, 2)))
    assert s.residual <= 1e-9


def test_apply_copywise_matches_dense_layout():
    rng = np.random.default_rng(5)
    dims, N = (2, 3), 2
    A = random_unitary(6, rng)
    ps = ProductState.normalized([rng.standard_normal(4) + 0j, rng.standard_normal(9) + 0j])
    v = ps.vector()
    fact = apply_copywise(A, dims, N, v)
    # dense: permute party-major to copy-major, apply A (x) A, permute back
    t = v.reshape(2, 2, 3, 3).transpose(0, 2, 1, 3).reshape(-1)
    out = (np.kron(A, A) @ t).reshape(2, 3, 2, 3).transpose(0, 2, 1, 3).reshape(-1)
    assert np.allclose(fact, out, atol=1e-12)


def test_sequential_search_two_qubit_reflection():
    U1 = PartitionedOperator(np.eye(4), (2, 2))
    U2 = reflection(max_entangled(2), (2, 2))
    res = sequential_search(U1, U2, seed=0)
    assert res.n == 2
    assert res.diagnostics["history"][0]["identity_defect"] < 1e-12
    D = res.W1.conj().T @ res.W2
    assert canonical_phase(D) is None and hermiticity_defect(D) >= 1e-6


def test_sequential_search_preconditions(worked_pair):
    I, U = worked_pair
    with pytest.raises(DomainError):
        sequential_search(I, U)
    with pytest.raises(DomainError):
        sequential_search(I, PartitionedOperator(np.kron(SZ, np.eye(2)), (2, 2)))


def test_sequential_search_exhaustion():
    U1 = PartitionedOperator(np.eye(9), (3, 3))
    U2 = reflection(max_entangled(3), (3, 3))
    with pytest.raises(SearchFailure) as info:
        sequential_search(U1, U2, seed=0, n_max=1)
    assert info.value.diagnostics["history"] == []


def test_sequential_search_three_qutrits():
    U1 = PartitionedOperator(np.eye(9), (3, 3))
    U2 = reflection(max_entangled(3), (3, 3))
    res = sequential_search(U1, U2, seed=0)
    assert res.n <= 8 and canonical_phase(res.W1.conj().T @ res.W2) is None


def test_dispatch_trace_zero():
    I = PartitionedOperator(np.eye(4), (2, 2))
    s = plan_discrimination(I, PartitionedOperator(np.kron(SZ, np.eye(2)), (2, 2)))
    assert s.kind == "single_run" and s.diagnostics["stage"] == "trace_zero"
    assert np.allclose(s.input.party_states[0], np.array([1, 1]) / np.sqrt(2))
    assert np.allclose(s.input.party_states[1], [1, 0])
    assert s.residual < 1e-15


def test_dispatch_parallel(worked_pair):
    s = plan_discrimination(*worked_pair)
    assert s.kind == "parallel" and s.copies == 2 and s.residual <= 1e-12


def test_dispatch_two_qubit_reflection():
    I = PartitionedOperator(np.eye(4), (2, 2))
    U = reflection([np.sqrt(0.75), 0, 0, 0.5], (2, 2))
    s = plan_discrimination(I, U)
    assert s.kind == "single_run" and s.residual <= 1e-9
    s2 = two_qubit_hermitian_plan(PartitionedOperator(U.matrix, (2, 2)))
    assert s2.residual <= 1e-9 and s2.phase_note == 0.0


def test_dispatch_sequential_parallel():
    I = PartitionedOperator(np.eye(9), (3, 3))
    U = reflection(max_entangled(3), (3, 3))
    s = plan_discrimination(I, U, seed=0)
    assert s.kind == "sequential_parallel"
    assert abs(s.diagnostics["local_minimum"] - 1 / 3) <= 1e-6
    assert s.residual <= 1e-8 and s.uses == s.copies * s.sequential_depth


def test_dispatch_rejects_identical_up_to_phase():
    I = PartitionedOperator(np.eye(4), (2, 2))
    with pytest.raises(DomainError):
        plan_discrimination(I, PartitionedOperator(np.exp(1j * np.pi / 7) * np.eye(4), (2, 2)))


@settings(max_examples=10)
@given(st.integers(0, 10 ** 6), st.floats(0, 2 * np.pi))
def test_dispatch_phase_invariance(seed, phi):
    rng = np.random.default_rng(seed)
    U1 = PartitionedOperator(random_unitary(4, rng), (2, 2))
    U2 = PartitionedOperator(random_unitary(4, rng), (2, 2))
    a = plan_discrimination(U1, U2, seed=seed)
    b = plan_discrimination(U1, PartitionedOperator(np.exp(1j * phi) * U2.matrix, (2, 2)), seed=seed)
    assert a.diagnostics["stage"] == b.diagnostics["stage"]
    assert a.residual <= 1e-8 and b.residual <= 1e-8


@settings(max_examples=10)
@given(st.integers(0, 10 ** 6))
def test_dispatch_stage_matches_hermiticity(seed):
    rng = np.random.default_rng(seed)
    U1 = PartitionedOperator(random_unitary(4, rng), (2, 2))
    U2 = PartitionedOperator(random_unitary(4, rng), (2, 2))
    s = plan_discrimination(U1, U2, seed=seed)
    herm = canonical_phase(U1.matrix.conj().T @ U2.matrix) is not None
    if s.diagnostics["stage"] == "parallel":
        assert not herm
    if s.diagnostics["stage"] in ("two_qubit_hermitian", "sequential_parallel"):
        assert herm


def test_multi_three_paulis():
    I = PartitionedOperator(np.eye(4), (2, 2))
    units = [I, PartitionedOperator(np.kron(SZ, np.eye(2)), (2, 2)),
             PartitionedOperator(np.kron(SX, np.eye(2)), (2, 2))]
    tree = plan_multi(units)
    assert len(tree.schemes) == 3
    for t in range(3):
        out = simulate_elimination(tree, t)
        assert out.stages == 2 and out.error_probability <= 1e-12
        assert out.survivor_probabilities[t] == pytest.approx(1)


def test_multi_two_is_pairwise(worked_pair):
    tree = plan_multi(list(worked_pair))
    assert list(tree.schemes) == [(0, 1)] and tree.schemes[0, 1].kind == "parallel"
    assert simulate_elimination(tree, 1).stages == 1


def test_multi_rejects_phase_copies():
    I = PartitionedOperator(np.eye(4), (2, 2))
    with pytest.raises(DomainError):
        plan_multi([I, PartitionedOperator(1j * np.eye(4), (2, 2))])


def test_verify_worked_and_tampered(worked_pair):
    I, U = worked_pair
    s = plan_discrimination(I, U)
    rep = verify_scheme(I, U, s)
    assert rep.residual <= 1e-15 and rep.dense_residual <= 1e-15 and rep.passed()
    zero = ProductState(tuple(np.eye(4)[0] for _ in range(2)))
    bad = verify_scheme(I, U, dataclasses.replace(s, input=zero))
    assert bad.residual >= 0.49 and not bad.passed()


def test_verify_single_run_is_local_value():
    I = PartitionedOperator(np.eye(4), (2, 2))
    U = reflection([np.sqrt(0.75), 0, 0, 0.5], (2, 2))
    s = plan_discrimination(I, U)
    rep = verify_scheme(I, U, s)
    assert rep.residual == pytest.approx(abs(local_value(PartitionedOperator(U.matrix, (2, 2)), s.input)), abs=1e-15)


def test_verify_rejects_inconsistent(worked_pair):
    I, U = worked_pair
    s = plan_discrimination(I, U)
    with pytest.raises(ValidationError) as info:
        verify_scheme(I, U, dataclasses.replace(s, copies=3))
    assert "input" in info.value.fields
    with pytest.raises(ValidationError):
        verify_scheme(I, U, dataclasses.replace(s, kind="bogus"))


def test_scheme_overlap_sequential_matches_dense():
    I = PartitionedOperator(np.eye(9), (3, 3))
    U = reflection(max_entangled(3), (3, 3))
    s = plan_discrimination(I, U, seed=0)
    assert abs(scheme_overlap(I.matrix, U.matrix, s) - dense_overlap(I.matrix, U.matrix, s)) <= 1e-10
