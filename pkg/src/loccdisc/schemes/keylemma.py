"""Isotropic vectors of tensor powers from two non-co-linear values.

Given <psi_1|A|psi_1> = r_1 e^{i theta_1} and <psi_2|A|psi_2> = r_2 e^{i theta_2}
on different rays, the states Phi_k = psi_1^{⊗(N-k)} psi_2^{⊗k} have values
z_k = r_1^{N-k} r_2^k e^{i k theta} (after a common rotation), and for
N = ceil(pi / theta) zero is a convex combination of at most three of them.
Everything is evaluated in factored form; A^{⊗N} is never built.
"""
import math
from typing import NamedTuple, Sequence

import numpy as np

from ..errors import ConvergenceError, DomainError, SizeLimitError
from ..hermbasis import RayValue
from ..matrixcore import fix_gauge
from ..numrange import combine_in_frame, isotropic_vector, quad

CASE_BOUNDARY_TOL = 1e-10
MAX_STATE_DIM = 1 << 20


class KeyLemmaPlan(NamedTuple):
    N: int
    theta: float
    case_tag: str  # "case1", "case2a" or "case2b"
    weights: tuple
    phi_indices: tuple
    residual: float  # |sum_k p_k z_k| with z_k in canonical position


def keylemma_N(z1: RayValue, z2: RayValue):
    """Angle between the two rays (in (0, pi]) and the copy count N = ceil(pi / theta)."""
    gap = abs(z2.theta - z1.theta) % (2 * math.pi)
    theta = min(gap, 2 * math.pi - gap)
    if theta <= 1e-12:
        raise DomainError("values are co-linear; no copy count exists")
    ratio = math.pi / theta
    # theta = pi/k must give exactly k despite rounding
    N = max(1, math.ceil(ratio * (1 - 1e-12)))
    return theta, N


def canonical_values(r1, r2, theta, N, indices=None):
    ks = range(N + 1) if indices is None else indices
    return np.array([r1 ** (N - k) * r2 ** k * np.exp(1j * k * theta) for k in ks])


def keylemma_weights(z1: RayValue, z2: RayValue, theta: float, N: int) -> KeyLemmaPlan:
    r1, r2 = z1.r, z2.r
    if N == 1:
        if abs(theta - math.pi) > CASE_BOUNDARY_TOL:
            raise DomainError(f"N = 1 needs antipodal rays, got theta = {theta}")
        p = r2 / (r1 + r2)
        case, idx, w = "case1", (0, 1), (p, 1 - p)
    elif abs(N * theta - math.pi) <= CASE_BOUNDARY_TOL:
        a, b = r1 ** N, r2 ** N
        p = b / (a + b)
        case, idx, w = "case2a", (0, N), (p, 1 - p)
    else:
        if not (math.pi < N * theta < 2 * math.pi and (N - 1) * theta < math.pi):
            raise DomainError(f"theta = {theta}, N = {N} outside the three-point case")
        idx = (0, N - 1, N)
        z = canonical_values(r1, r2, theta, N, idx)
        M = np.vstack([z.real, z.imag, np.ones(3)])
        w = np.linalg.solve(M, [0.0, 0.0, 1.0])
        if np.any(w < -1e-12):
            raise DomainError(f"three-point weights not convex: {w}")
        w = np.clip(w, 0, None)
        w = tuple(w / w.sum())
        case = "case2b"
    z = canonical_values(r1, r2, theta, N, idx)
    resid = float(abs(np.dot(w, z)))
    return KeyLemmaPlan(N, theta, case, tuple(float(x) for x in w), tuple(idx), resid)


def selector(N: int, k: int) -> tuple:
    """Per-copy choice (1 or 2) for Phi_k = psi_1^{⊗(N-k)} psi_2^{⊗k}."""
    return (1,) * (N - k) + (2,) * k


def tensor_bracket(A, left: Sequence[int], right: Sequence[int], psi1, psi2) -> complex:
    """<Phi_left| A^{⊗N} |Phi_right> as a product of single-copy brackets."""
    if len(left) != len(right):
        raise ValueError("selectors must have equal length")
    psi = {1: np.asarray(psi1), 2: np.asarray(psi2)}
    out = 1.0 + 0j
    for a, b in zip(left, right):
        out *= np.vdot(psi[a], A @ psi[b])
    return complex(out)


def tensor_overlap(left, right, psi1, psi2) -> complex:
    psi = {1: np.asarray(psi1), 2: np.asarray(psi2)}
    out = 1.0 + 0j
    for a, b in zip(left, right):
        out *= np.vdot(psi[a], psi[b])
    return complex(out)


class KeyLemmaResult(NamedTuple):
    plan: KeyLemmaPlan
    coefficients: np.ndarray  # over Phi_k for k in plan.phi_indices
    residual: float  # |<psi|A^{⊗N}|psi>| in factored form
    compressed: np.ndarray  # A^{⊗N} on the Phi span (non-orthonormal basis)
    gram: np.ndarray

    @property
    def N(self):
        return self.plan.N


def keylemma_isotropic(A, psi1, psi2, tol=1e-9) -> KeyLemmaResult:
    """Unit vector in span{Phi_k} with <psi|A^{⊗N}|psi> = 0."""
    A = np.asarray(A, dtype=np.complex128)
    psi1 = np.asarray(psi1, dtype=np.complex128) / np.linalg.norm(psi1)
    psi2 = np.asarray(psi2, dtype=np.complex128) / np.linalg.norm(psi2)
    z1, z2 = quad(A, psi1), quad(A, psi2)
    if abs(z1) == 0 or abs(z2) == 0:
        raise DomainError("both input values must be nonzero")
    r1, r2 = RayValue.from_complex(z1), RayValue.from_complex(z2)
    theta, N = keylemma_N(r1, r2)
    plan = keylemma_weights(r1, r2, theta, N)
    sels = [selector(N, k) for k in plan.phi_indices]
    n = len(sels)
    B = np.array([[tensor_bracket(A, sels[a], sels[b], psi1, psi2) for b in range(n)] for a in range(n)])
    G = np.array([[tensor_overlap(sels[a], sels[b], psi1, psi2) for b in range(n)] for a in range(n)])
    # orthonormal frame f = Phi C with C^dag G C = I
    w, V = np.linalg.eigh((G + G.conj().T) / 2)
    keep = w > 1e-10 * w.max()
    C = V[:, keep] / np.sqrt(w[keep])
    Bf = C.conj().T @ B @ C
    coords = (C.conj().T @ G).T  # row a: coordinates of Phi_a in the frame
    x = combine_in_frame(Bf, coords, plan.weights)
    if abs(quad(Bf, x)) > tol:
        x = isotropic_vector(Bf)
    c = fix_gauge(C @ x)
    norm = np.vdot(c, G @ c).real
    c = c / np.sqrt(norm)
    resid = abs(np.vdot(c, B @ c))
    if resid > tol:
        raise ConvergenceError("tensor-power isotropic vector misses its residual", resid,
                               {"compressed": B, "gram": G})
    return KeyLemmaResult(plan, c, float(resid), B, G)


def copies_state(psi, N: int) -> np.ndarray:
    out = np.ones(1, dtype=np.complex128)
    for _ in range(N):
        out = np.kron(out, psi)
    return out


def keylemma_state(psi1, psi2, result: KeyLemmaResult, cap: int = MAX_STATE_DIM) -> np.ndarray:
    """Dense vector sum_k c_k Phi_k on the N-copy space of one party."""
    N = result.plan.N
    d = len(psi1)
    if d ** N > cap:
        raise SizeLimitError(f"N-copy state of dimension {d}^{N} exceeds {cap}")
    psi1 = np.asarray(psi1, dtype=np.complex128) / np.linalg.norm(psi1)
    psi2 = np.asarray(psi2, dtype=np.complex128) / np.linalg.norm(psi2)
    out = np.zeros(d ** N, dtype=np.complex128)
    for c, k in zip(result.coefficients, result.plan.phi_indices):
        out += c * np.kron(copies_state(psi1, N - k), copies_state(psi2, k))
    return out / np.linalg.norm(out)

