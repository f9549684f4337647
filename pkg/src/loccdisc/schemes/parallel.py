"""Parallel scheme for a non-Hermitian-up-to-phase A = U_1^dag U_2.

The product Hermitian-basis lattice always holds two values on different
rays that differ at a single party. Fixing the other parties turns that into
a one-party tensor-power problem; the other parties just repeat their basis
state on every copy.
"""
from typing import NamedTuple

import numpy as np

from ..errors import DomainError, InternalContradiction
from ..hermbasis import angle_gap, build_lattice, canonical_phase
from ..localrange import ProductState, conditional_operator
from ..matrixcore import PartitionedOperator, is_unitary
from .keylemma import copies_state, keylemma_isotropic, keylemma_state
from .scheme import DiscriminationScheme

ZERO_TOL = 1e-10
GAP_TOL = 1e-12


class Pivot(NamedTuple):
    left: tuple
    right: tuple
    party: int
    theta: float


def lattice_path(a: tuple, b: tuple) -> list:
    """Tuples from a to b, changing one coordinate per step, last party first."""
    path = [tuple(a)]
    cur = list(a)
    for k in reversed(range(len(a))):
        if cur[k] != b[k]:
            cur[k] = b[k]
            path.append(tuple(cur))
    return path


def choose_pivot(values: np.ndarray) -> Pivot:
    """Adjacent pair of lattice tuples with values on different rays.

    Anchors at the all-zeros tuple, walks to the first tuple of widest angle
    from it, and keeps the step of widest angle (latest step on ties).
    """
    origin = (0,) * values.ndim
    z0 = values[origin]
    gaps = np.array([angle_gap(z0, z) for z in values.ravel()])
    far = int(np.argmax(gaps))
    if gaps[far] <= GAP_TOL:
        raise InternalContradiction("all lattice values lie on one ray; A would be Hermitian up to phase")
    target = tuple(int(i) for i in np.unravel_index(far, values.shape))
    path = lattice_path(origin, target)
    best = None
    for t, u in zip(path, path[1:]):
        theta = angle_gap(values[t], values[u])
        if best is None or theta >= best.theta:
            party = next(k for k in range(len(t)) if t[k] != u[k])
            best = Pivot(t, u, party, theta)
    if best.theta <= GAP_TOL:
        raise InternalContradiction("lattice path has no step between different rays")
    return best


def _single_run(A: PartitionedOperator, state: ProductState, value, **diag):
    return DiscriminationScheme(
        kind="single_run", dims=A.dims, copies=1, sequential_depth=1, interleaved_locals=(),
        input=state.gauge_fixed(), residual=float(abs(value)), branch="lattice_zero", diagnostics=diag)


def parallel_plan(A: PartitionedOperator, tol: float = 1e-9) -> DiscriminationScheme:
    """Product input state with <in|A^{⊗N}|in> = 0, entangled across copies at one party only."""
    if not is_unitary(A.matrix):
        raise DomainError("parallel_plan expects a unitary operator")
    if canonical_phase(A.matrix) is not None:
        raise DomainError("operator is Hermitian up to phase; no parallel lattice pivot exists")
    lat = build_lattice(A)
    flat = np.abs(lat.values.ravel())
    zero = int(np.argmax(flat <= ZERO_TOL)) if np.any(flat <= ZERO_TOL) else None
    if zero is not None:
        idx = tuple(int(i) for i in np.unravel_index(zero, lat.shape))
        return _single_run(A, ProductState(lat.state(idx)), lat.values[idx], lattice_index=idx)
    piv = choose_pivot(lat.values)
    k = piv.party
    fixed = ProductState(lat.state(piv.left))
    M = conditional_operator(A, fixed, k)
    psi1, psi2 = lat.bases[k][piv.left[k]], lat.bases[k][piv.right[k]]
    res = keylemma_isotropic(M, psi1, psi2, tol=tol)
    N = res.N
    states = [copies_state(s, N) for s in fixed.party_states]
    states[k] = keylemma_state(psi1, psi2, res)
    diag = {
        "pivot": (piv.left, piv.right),
        "pivot_party": k,
        "theta": piv.theta,
        "case": res.plan.case_tag,
        "phi_indices": res.plan.phi_indices,
        "coefficients": res.coefficients,
    }
    return DiscriminationScheme(
        kind="parallel", dims=A.dims, copies=N, sequential_depth=1, interleaved_locals=(),
        input=ProductState(tuple(states)), residual=res.residual, branch="lattice_pivot",
        diagnostics=diag)
