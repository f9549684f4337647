"""Dense complex linear algebra for small multipartite operators.

Operators are plain ``numpy`` complex arrays. Kronecker products follow the
row-major convention of :func:`numpy.kron`, so the first party is the most
significant index. :class:`PartitionedOperator` attaches the party structure.
"""
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
import scipy.linalg

from .errors import DomainError, ShapeError, SizeLimitError

MAX_DENSE_DIM = 4096
RANK_TOL = 1e-10


def as_cmatrix(a) -> np.ndarray:
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2:
        raise ShapeError(f"expected a 2-d matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise DomainError("matrix has non-finite entries")
    return a


def _as_square(a) -> np.ndarray:
    a = as_cmatrix(a)
    if a.shape[0] != a.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {a.shape}")
    return a


def as_state(v, normalize=True) -> np.ndarray:
    v = np.asarray(v, dtype=np.complex128).reshape(-1)
    if not np.all(np.isfinite(v)):
        raise DomainError("state has non-finite amplitudes")
    if normalize:
        nrm = np.linalg.norm(v)
        if nrm == 0:
            raise DomainError("cannot normalize the zero vector")
        v = v / nrm
    return v


def fix_gauge(v: np.ndarray, tol=1e-12) -> np.ndarray:
    """Multiply by a global phase so the first non-negligible amplitude is real positive."""
    v = np.asarray(v, dtype=np.complex128)
    idx = np.flatnonzero(np.abs(v) > tol)
    if idx.size == 0:
        return v.copy()
    a = v[idx[0]]
    return v * (abs(a) / a)


def basis_state(d: int, k: int) -> np.ndarray:
    v = np.zeros(d, dtype=np.complex128)
    v[k] = 1.0
    return v


@dataclass(frozen=True, eq=False)
class PartitionedOperator:
    """A d x d operator on the tensor product of parties with dimensions ``dims``."""

    matrix: np.ndarray
    dims: tuple

    def __post_init__(self):
        m = _as_square(self.matrix)
        dims = tuple(int(x) for x in self.dims)
        if len(dims) < 1 or any(x < 1 for x in dims):
            raise ShapeError(f"party dimensions must be positive, got {dims}")
        if int(np.prod(dims)) != m.shape[0]:
            raise ShapeError(f"party dims {dims} do not multiply to {m.shape[0]}")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def nparties(self) -> int:
        return len(self.dims)

    def with_matrix(self, matrix) -> "PartitionedOperator":
        return PartitionedOperator(matrix, self.dims)

    def __repr__(self):
        return f"PartitionedOperator(dims={self.dims})"


def tensor(a, b, cap: int = MAX_DENSE_DIM) -> np.ndarray:
    a, b = as_cmatrix(a), as_cmatrix(b)
    rows, cols = a.shape[0] * b.shape[0], a.shape[1] * b.shape[1]
    if rows > cap or cols > cap:
        raise SizeLimitError(f"tensor product of size {rows}x{cols} exceeds cap {cap}")
    return np.kron(a, b)


def tensor_all(mats: Sequence, cap: int = MAX_DENSE_DIM) -> np.ndarray:
    out = np.ones((1, 1), dtype=np.complex128)
    for m in mats:
        out = tensor(out, m, cap=cap)
    return out


def kron_states(states: Sequence) -> np.ndarray:
    out = np.ones(1, dtype=np.complex128)
    for s in states:
        out = np.kron(out, s)
    return out


def adjoint(a) -> np.ndarray:
    return as_cmatrix(a).conj().T


def hermitian_part(a) -> np.ndarray:
    return (a + a.conj().T) / 2


def is_unitary(a, tol=1e-8) -> bool:
    a = _as_square(a)
    return np.linalg.norm(a.conj().T @ a - np.eye(a.shape[0])) <= tol


class Eigensystem(NamedTuple):
    values: np.ndarray
    vectors: np.ndarray


def eig_hermitian(a) -> Eigensystem:
    """Eigenvalues in descending order with orthonormal eigenvector columns."""
    a = _as_square(a)
    w, v = np.linalg.eigh(hermitian_part(a))
    return Eigensystem(w[::-1], v[:, ::-1])


def eig_unitary(a, tol=1e-9) -> Eigensystem:
    # complex Schur form of a normal matrix is diagonal, and the Schur vectors are
    # orthonormal even inside degenerate eigenspaces (np.linalg.eig is not)
    a = _as_square(a)
    if not is_unitary(a, tol=max(tol, 1e-9) * np.sqrt(a.shape[0])):
        raise DomainError("eig_unitary requires a unitary matrix")
    t, z = scipy.linalg.schur(a, output="complex")
    return Eigensystem(np.diag(t).copy(), z)


def _axis_contract(tensor_, dims, party, bra, ket):
    """Contract row axis ``party`` with ``bra`` and column axis ``party`` with ``ket``."""
    m = len(dims)
    t = np.tensordot(bra.conj(), tensor_, axes=([0], [party]))
    # column axes shifted left by one after the row contraction
    t = np.tensordot(t, ket, axes=([m - 1 + party], [0]))
    return t


def contract_party(A: PartitionedOperator, party: int, state) -> PartitionedOperator:
    """Slot ``state`` into one party: entries <i, state| A |j, state> on the remaining parties."""
    if not 0 <= party < A.nparties:
        raise IndexError(f"party {party} out of range for {A.nparties} parties")
    state = np.asarray(state, dtype=np.complex128).reshape(-1)
    if state.size != A.dims[party]:
        raise ShapeError(f"state dim {state.size} != party dim {A.dims[party]}")
    rest = A.dims[:party] + A.dims[party + 1:]
    if not rest:
        val = state.conj() @ A.matrix @ state
        return PartitionedOperator(np.array([[val]]), (1,))
    t = A.matrix.reshape(A.dims + A.dims)
    t = _axis_contract(t, A.dims, party, state, state)
    d = int(np.prod(rest))
    return PartitionedOperator(t.reshape(d, d), rest)


def contract_party_density(A: PartitionedOperator, party: int, rho) -> PartitionedOperator:
    """Partial trace of A (I ⊗ rho) over one party; rho = |s><s| reduces to contract_party."""
    rho = as_cmatrix(rho)
    dp = A.dims[party]
    if rho.shape != (dp, dp):
        raise ShapeError(f"density shape {rho.shape} != party dim {dp}")
    rest = A.dims[:party] + A.dims[party + 1:]
    m = A.nparties
    t = A.matrix.reshape(A.dims + A.dims)
    # sum_{a,b} rho[b, a] A[.., a, .., .., b, ..]
    t = np.tensordot(t, rho.T, axes=([party, m + party], [0, 1]))
    if not rest:
        return PartitionedOperator(np.array([[complex(t)]]), (1,))
    d = int(np.prod(rest))
    return PartitionedOperator(t.reshape(d, d), rest)


class Compression(NamedTuple):
    matrix: np.ndarray
    frame: np.ndarray
    dropped: list


def orthonormal_frame(states: Sequence, tol=RANK_TOL):
    """Modified Gram-Schmidt with re-orthogonalization; returns (frame columns, dropped indices)."""
    cols, dropped = [], []
    for k, s in enumerate(states):
        v = np.asarray(s, dtype=np.complex128).reshape(-1).copy()
        for _ in range(2):
            for f in cols:
                v -= (f.conj() @ v) * f
        nrm = np.linalg.norm(v)
        if nrm <= tol:
            dropped.append(k)
            continue
        cols.append(v / nrm)
    if not cols:
        return None, dropped
    return np.stack(cols, axis=1), dropped


def compress(A, span_states: Sequence, tol=RANK_TOL) -> Compression:
    """Restrict A to span(span_states): B[j, k] = <f_j|A|f_k> over an orthonormal frame."""
    A = _as_square(A)
    if len(span_states) == 0:
        raise ValueError("compress needs at least one spanning state")
    frame, dropped = orthonormal_frame(span_states, tol=tol)
    if frame is None:
        raise ValueError("spanning states are all numerically zero")
    return Compression(frame.conj().T @ A @ frame, frame, dropped)


def _rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_unitary(d: int, seed=None) -> np.ndarray:
    """Haar-random unitary: QR of a complex Ginibre matrix with the R diagonal phases removed."""
    if d < 1:
        raise ValueError("dimension must be >= 1")
    rng = _rng(seed)
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def random_local_unitary(party_dims: Sequence[int], seed=None) -> np.ndarray:
    rng = _rng(seed)
    return tensor_all([random_unitary(d, rng) for d in party_dims], cap=np.inf)


def random_state(d: int, seed=None) -> np.ndarray:
    rng = _rng(seed)
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def random_density(d: int, seed=None, rank=None) -> np.ndarray:
    rng = _rng(seed)
    rank = d if rank is None else rank
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real
