"""The discrimination certificate and how to run it.

A scheme feeds the input product state through N parallel copies of

    W = U u_1 U u_2 ... u_{n-1} U

(n uses of the unknown U per copy, local unitaries u_j in between). U_1 and
U_2 are told apart with certainty when the two output states are orthogonal,
so the certificate's residual is |<in| (W_1^dag W_2)^{⊗N} |in>|.

Party-major layout: party k's entry in ``input`` is a vector on its N copies,
copy index fastest within a party. The unknown unitary acts copy by copy.
"""
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from ..errors import SizeLimitError, ValidationError
from ..localrange import ProductState
from ..matrixcore import PartitionedOperator, contract_party

KINDS = ("single_run", "parallel", "sequential_parallel", "elimination_tree")
MAX_STATE_DIM = 1 << 20


@dataclass(frozen=True, eq=False)
class DiscriminationScheme:
    kind: str
    dims: tuple
    copies: int
    sequential_depth: int
    interleaved_locals: tuple
    input: ProductState
    residual: float
    phase_note: Optional[float] = None
    branch: str = ""
    diagnostics: dict = field(default_factory=dict)

    @property
    def uses(self) -> int:
        return self.copies * self.sequential_depth

    def validate(self):
        bad = []
        if self.kind not in KINDS:
            bad.append("kind")
        if self.copies < 1:
            bad.append("copies")
        if self.sequential_depth < 1 or len(self.interleaved_locals) != self.sequential_depth - 1:
            bad.append("sequential_depth")
        d = int(np.prod(self.dims))
        if any(np.shape(u) != (d, d) for u in self.interleaved_locals):
            bad.append("interleaved_locals")
        if self.input.dims != tuple(dk ** self.copies for dk in self.dims):
            bad.append("input")
        if self.kind == "single_run" and (self.copies != 1 or self.sequential_depth != 1):
            bad.append("kind")
        if bad:
            raise ValidationError(f"inconsistent scheme fields: {bad}", bad)
        return self


def sequential_unitary(U, locals_: Sequence) -> np.ndarray:
    """U u_1 U u_2 ... u_{n-1} U."""
    U = np.asarray(U, dtype=np.complex128)
    W = U
    for u in locals_:
        W = W @ u @ U
    return W


def apply_copywise(A, dims, N: int, vec: np.ndarray) -> np.ndarray:
    """Apply A^{⊗N} to a party-major vector without forming A^{⊗N}."""
    m = len(dims)
    total = int(np.prod(dims)) ** N
    if total > MAX_STATE_DIM:
        raise SizeLimitError(f"state dimension {total} exceeds {MAX_STATE_DIM}")
    shape = tuple(d for d in dims for _ in range(N))
    t = vec.reshape(shape)
    At = np.asarray(A).reshape(tuple(dims) + tuple(dims))
    for j in range(N):
        axes = [k * N + j for k in range(m)]
        t = np.tensordot(At, t, axes=(list(range(m, 2 * m)), axes))
        # the m new leading axes go back to the copy-j slots
        t = np.moveaxis(t, list(range(m)), axes)
    return t.reshape(-1)


def copy_major_order(dims, N: int) -> list:
    m = len(dims)
    return [k * N + j for j in range(N) for k in range(m)]


def output_state(U, scheme: DiscriminationScheme) -> np.ndarray:
    """Final state (party-major) when the unknown unitary is U."""
    W = sequential_unitary(U, scheme.interleaved_locals)
    return apply_copywise(W, scheme.dims, scheme.copies, scheme.input.vector())


def copy_factors(x, d: int, N: int, tol: float = 1e-10):
    """Split an N-copy vector into N single-copy vectors, or None if it is entangled."""
    out = []
    t = np.asarray(x, dtype=np.complex128)
    for _ in range(N - 1):
        u, sv, vh = np.linalg.svd(t.reshape(d, -1), full_matrices=False)
        if sv.size > 1 and sv[1] > tol * sv[0]:
            return None
        out.append(u[:, 0] * sv[0])
        t = vh[0]
    out.append(t)
    return out


def overlap_copywise(A, dims, N: int, state: ProductState) -> complex:
    """<in| A^{⊗N} |in> for a party-product input.

    When every party but (at most) one is a product over its copies, those
    parties are contracted copy by copy and only the remaining party's
    N-copy vector is ever formed. Otherwise the full state is built.
    """
    dims = tuple(dims)
    factors = [copy_factors(x, d, N) for x, d in zip(state.party_states, dims)]
    loose = [k for k, f in enumerate(factors) if f is None]
    if len(loose) > 1:
        v = state.vector()
        return complex(np.vdot(v, apply_copywise(A, dims, N, v)))
    k = loose[0] if loose else 0
    op = PartitionedOperator(A, dims)
    t = state.party_states[k].reshape((dims[k],) * N)
    out = t
    for j in range(N):
        red = op
        for p in reversed(range(len(dims))):
            if p != k:
                red = contract_party(red, p, factors[p][j])
        out = np.moveaxis(np.tensordot(red.matrix, out, axes=([1], [j])), 0, j)
    return complex(np.vdot(t, out))


def scheme_overlap(U1, U2, scheme: DiscriminationScheme) -> complex:
    """<Phi_{U_1}|Phi_{U_2}> = <in| (W_1^dag W_2)^{⊗N} |in>, evaluated copy by copy."""
    W1 = sequential_unitary(U1, scheme.interleaved_locals)
    W2 = sequential_unitary(U2, scheme.interleaved_locals)
    return overlap_copywise(W1.conj().T @ W2, scheme.dims, scheme.copies, scheme.input)


def as_matrix(U):
    return U.matrix if isinstance(U, PartitionedOperator) else np.asarray(U, dtype=np.complex128)
