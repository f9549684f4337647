"""Top-level planner: pick the cheapest branch that provably applies.

Branches, in order: traceless difference (single run from the maximally
mixed product state), a product isotropic vector found by see-saw (single
run), non-Hermitian difference (parallel), Hermitian difference on two
qubits (single run via the local interval), and otherwise an interleaved
sequential stage followed by a parallel one.
"""
import dataclasses

import numpy as np

from ..errors import ConvergenceError, DomainError, PlannerFailure, SearchFailure, SizeLimitError
from ..hermbasis import canonical_phase
from ..localrange import (
    hermitian_local_interval,
    hermitian_local_isotropic,
    local_value,
    min_abs_local,
    purify_product_value,
)
from ..matrixcore import PartitionedOperator, is_unitary
from .parallel import parallel_plan
from .scheme import DiscriminationScheme, scheme_overlap
from .sequential import sequential_search

TRACE_ZERO_TOL = 1e-10
IDENTICAL_TOL = 1e-10


def difference(U1: PartitionedOperator, U2: PartitionedOperator) -> PartitionedOperator:
    """A = U_1^dag U_2, after checking that the pair is admissible."""
    if U1.dims != U2.dims:
        raise DomainError(f"party dims differ: {U1.dims} vs {U2.dims}")
    for name, U in (("U1", U1), ("U2", U2)):
        if not is_unitary(U.matrix):
            raise DomainError(f"{name} is not unitary")
    A = U1.matrix.conj().T @ U2.matrix
    d = A.shape[0]
    c = np.trace(A) / d
    if np.linalg.norm(A - c * np.eye(d)) <= IDENTICAL_TOL * np.sqrt(d):
        raise DomainError("the unitaries are identical up to a global phase")
    return PartitionedOperator(A, U1.dims)


def _single(A, state, branch, **diag):
    return DiscriminationScheme(
        kind="single_run", dims=A.dims, copies=1, sequential_depth=1, interleaved_locals=(),
        input=state.gauge_fixed(), residual=float(abs(local_value(A, state))), branch=branch,
        diagnostics=diag)


def trace_zero_plan(A: PartitionedOperator, seed=0) -> DiscriminationScheme:
    """Single run from a pure product state with the value of the maximally mixed one."""
    rhos = [np.eye(d) / d for d in A.dims]
    s = purify_product_value(A, rhos, seed=seed)
    if abs(local_value(A, s)) > 1e-12:
        s = min_abs_local(A, seed=seed, starts=0, initial=[s]).state
    return _single(A, s, "trace_zero")


def two_qubit_hermitian_plan(A: PartitionedOperator, seed=0, tol=1e-9) -> DiscriminationScheme:
    """Single run for a Hermitian-up-to-phase difference on two qubits.

    With A = e^{i theta} H and tr H >= 0, the local interval of H contains 0
    and a geodesic root-find between its endpoints gives the input.
    """
    if A.dims != (2, 2):
        raise DomainError("this branch is specific to two qubits")
    dec = canonical_phase(A.matrix)
    if dec is None:
        raise DomainError("difference is not Hermitian up to phase")
    H = PartitionedOperator(dec.hermitian, A.dims)
    iv = hermitian_local_interval(H, seed=seed)
    iso = hermitian_local_isotropic(H, seed=seed, tol=tol, interval=iv)
    sch = _single(A, iso.state, "two_qubit_hermitian", interval=(iv.lo, iv.hi), path=iso.path)
    return dataclasses.replace(sch, phase_note=dec.theta)


def plan_discrimination(U1: PartitionedOperator, U2: PartitionedOperator, seed=0, tol: float = 1e-8,
                        n_max: int = 8) -> DiscriminationScheme:
    A = difference(U1, U2)
    trace = complex(np.trace(A.matrix))
    stage = "trace_zero"
    try:
        if abs(trace) <= TRACE_ZERO_TOL:
            sch = trace_zero_plan(A, seed=seed)
        else:
            stage = "local_minimum"
            lm = min_abs_local(A, seed=seed, extrapolate=True)
            if abs(lm.value) <= tol:
                sch = _single(A, lm.state, "local_minimum", starts=lm.starts, sweeps=lm.sweeps)
            else:
                dec = canonical_phase(A.matrix)
                if dec is None:
                    stage = "parallel"
                    sch = parallel_plan(A)
                elif A.dims == (2, 2):
                    stage = "two_qubit_hermitian"
                    sch = two_qubit_hermitian_plan(A, seed=seed)
                else:
                    stage = "sequential"
                    seq = sequential_search(U1, U2, seed=seed, n_max=n_max)
                    D = PartitionedOperator(seq.W1.conj().T @ seq.W2, A.dims)
                    stage = "sequential_parallel"
                    inner = parallel_plan(D)
                    sch = dataclasses.replace(
                        inner, kind="sequential_parallel", sequential_depth=seq.n,
                        interleaved_locals=seq.locals, phase_note=dec.theta,
                        branch=f"sequential+{inner.branch}",
                        diagnostics={**inner.diagnostics, "sequential": seq.diagnostics})
                sch = dataclasses.replace(sch, diagnostics={**sch.diagnostics, "local_minimum": abs(lm.value)})
        residual = abs(scheme_overlap(U1.matrix, U2.matrix, sch))
    except (ConvergenceError, SearchFailure, DomainError, SizeLimitError) as exc:
        diag = getattr(exc, "diagnostics", None) or getattr(exc, "details", {})
        raise PlannerFailure(stage, str(exc), diag) from exc
    sch = dataclasses.replace(sch, residual=float(residual),
                              diagnostics={**sch.diagnostics, "stage": stage, "trace": trace})
    if residual > tol:
        raise PlannerFailure(stage, f"scheme residual {residual:.3e} exceeds {tol:.1e}",
                             {"scheme": sch})
    return sch.validate()

