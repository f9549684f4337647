"""Hermitian rank-one bases, phase canonicalization, rays, and clock-and-shift twirls."""
import itertools
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .errors import DomainError, ShapeError, SizeLimitError
from .matrixcore import PartitionedOperator, as_cmatrix, basis_state, is_unitary, tensor_all

TWO_PI = 2 * np.pi
LATTICE_CAP = 10_000


class RayValue(NamedTuple):
    """Nonzero complex number r * exp(i theta) with r > 0 and theta in [0, 2 pi)."""

    r: float
    theta: float

    @classmethod
    def from_complex(cls, z: complex) -> "RayValue":
        r = abs(z)
        if not r > 0:
            raise DomainError("a ray value must be nonzero")
        return cls(r, float(np.angle(z)) % TWO_PI)

    @property
    def value(self) -> complex:
        return self.r * np.exp(1j * self.theta)


def hermitian_basis(d: int) -> list:
    """The d^2 tomography states |p>, (|p>+|q>)/sqrt2, (|p>+i|q>)/sqrt2 (p < q).

    Their projectors span the real space of d x d Hermitian matrices.
    Computational states come first, then the pairs in lexicographic order.
    """
    if d < 1:
        raise ValueError("dimension must be >= 1")
    out = [basis_state(d, p) for p in range(d)]
    for p, q in itertools.combinations(range(d), 2):
        out.append((basis_state(d, p) + basis_state(d, q)) / np.sqrt(2))
        out.append((basis_state(d, p) + 1j * basis_state(d, q)) / np.sqrt(2))
    return out


def projector_gram(states: Sequence) -> np.ndarray:
    """Real Gram matrix of the projectors |s><s| under the trace inner product."""
    S = np.array(states)
    return np.abs(S.conj() @ S.T) ** 2


def is_hermitian_via_basis(A, basis=None, tol=1e-9):
    """A is Hermitian iff tr(A rho_k) is real for every element of a Hermitian basis.

    Returns (verdict, max |Im tr(A rho_k)|).
    """
    A = as_cmatrix(A)
    if basis is None:
        basis = hermitian_basis(A.shape[0])
    S = np.array(basis)
    vals = np.einsum("ki,ij,kj->k", S.conj(), A, S)
    resid = float(np.max(np.abs(vals.imag)))
    return resid <= tol, resid


def is_hermitian_direct(A, tol=1e-9) -> bool:
    A = as_cmatrix(A)
    return np.linalg.norm(A - A.conj().T) <= tol * np.linalg.norm(A)


class PhaseDecomposition(NamedTuple):
    theta: float
    hermitian: np.ndarray


def canonical_phase(A, tol=1e-8) -> Optional[PhaseDecomposition]:
    """Write a unitary A as exp(i theta) H with H Hermitian, if possible.

    A unitary is Hermitian up to phase exactly when its spectrum sits in two
    antipodal points, i.e. when A^2 is a scalar. theta is chosen so that
    tr(H) >= 0, and for tr(H) = 0 so that H's first nonzero diagonal entry is
    positive.
    """
    A = as_cmatrix(A)
    d = A.shape[0]
    if not is_unitary(A, tol=tol * max(1.0, np.sqrt(d))):
        raise DomainError("canonical_phase expects a unitary matrix")
    sq = A @ A
    c = np.trace(sq) / d
    if np.linalg.norm(sq - c * np.eye(d)) > tol * np.sqrt(d):
        return None
    theta = float(np.angle(c)) / 2
    H = np.exp(-1j * theta) * A
    H = (H + H.conj().T) / 2
    tr = np.trace(H).real
    flip = tr < -tol
    if abs(tr) <= tol:
        diag = np.real(np.diag(H))
        nz = np.flatnonzero(np.abs(diag) > tol)
        flip = bool(nz.size and diag[nz[0]] < 0)
    if flip:
        theta += np.pi
        H = -H
    return PhaseDecomposition(theta % TWO_PI, H)


def hermiticity_defect(A) -> float:
    """Distance of a unitary from being Hermitian up to phase: |A^2 - tr(A^2)/d I|_F."""
    A = as_cmatrix(A)
    d = A.shape[0]
    sq = A @ A
    return float(np.linalg.norm(sq - np.trace(sq) / d * np.eye(d)))


def angle_gap(z1: complex, z2: complex) -> float:
    """Smaller angle in [0, pi] between the rays through z1 and z2."""
    return float(abs(np.angle(z2 * np.conj(z1))))


def colinear(values: Sequence[complex], tol=1e-8, zero_tol=0.0) -> Optional[float]:
    """Common ray angle of the nonzero values, or None if they are not on one ray.

    Zeros lie on every ray and are discarded first.
    """
    vals = [complex(v) for v in values if abs(v) > zero_tol]
    if not vals:
        return 0.0
    theta = float(np.angle(vals[0])) % TWO_PI
    rot = np.exp(-1j * theta)
    for z in vals:
        w = rot * z
        if abs(w.imag) > tol * abs(z) or w.real <= 0:
            return None
    return theta


def clock_shift(d: int):
    """Shift X|j> = |j+1 mod d> and clock Z|j> = w^j |j>, w = exp(2 pi i / d)."""
    X = np.roll(np.eye(d, dtype=np.complex128), 1, axis=0)
    Z = np.diag(np.exp(TWO_PI * 1j * np.arange(d) / d))
    return X, Z


def generalized_paulis(party_dims: Sequence[int]) -> list:
    """All tensor products of per-party X^a Z^b; prod(d_k^2) local unitaries in total."""
    per_party = []
    for d in party_dims:
        X, Z = clock_shift(d)
        ops = []
        for a in range(d):
            Xa = np.linalg.matrix_power(X, a)
            for b in range(d):
                ops.append(Xa @ np.linalg.matrix_power(Z, b))
        per_party.append(ops)
    return [tensor_all(combo, cap=np.inf) for combo in itertools.product(*per_party)]


def depolarize(A, paulis) -> np.ndarray:
    """(1/d^2) sum_k u_k^dag A u_k over a clock-and-shift set; equals tr(A) I / d."""
    A = as_cmatrix(A)
    d = A.shape[0]
    if len(paulis) != d * d or paulis[0].shape != A.shape:
        raise ShapeError("Pauli set does not match the operator dimension")
    out = np.zeros_like(A)
    for u in paulis:
        out += u.conj().T @ A @ u
    return out / (d * d)


@dataclass(frozen=True, eq=False)
class BasisLattice:
    """Values z[t] = <psi_t|A|psi_t> over product tuples of per-party Hermitian-basis states."""

    bases: tuple  # per-party list of states
    values: np.ndarray  # shape (d_1^2, ..., d_m^2)

    @property
    def shape(self):
        return self.values.shape

    def state(self, index) -> tuple:
        return tuple(self.bases[k][i] for k, i in enumerate(index))

    def tuples(self):
        return itertools.product(*(range(n) for n in self.values.shape))


def build_lattice(A: PartitionedOperator) -> BasisLattice:
    shape = tuple(d * d for d in A.dims)
    if int(np.prod(shape)) > LATTICE_CAP:
        raise SizeLimitError(f"lattice of {int(np.prod(shape))} points exceeds {LATTICE_CAP}")
    bases = tuple(hermitian_basis(d) for d in A.dims)
    V = np.ones((1, 1), dtype=np.complex128)
    for basis in bases:
        S = np.array(basis)
        V = np.einsum("ai,bj->abij", V, S).reshape(V.shape[0] * S.shape[0], -1)
    values = np.einsum("ki,ij,kj->k", V.conj(), A.matrix, V)
    return BasisLattice(bases, values.reshape(shape))
