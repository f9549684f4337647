"""Independent re-check of a scheme's orthogonality claim."""
from typing import NamedTuple, Optional

import numpy as np

from ..errors import ValidationError
from ..localrange import local_value
from ..matrixcore import MAX_DENSE_DIM, PartitionedOperator
from ..oracle import dense_tensor_power
from .scheme import DiscriminationScheme, copy_major_order, scheme_overlap, sequential_unitary

AGREEMENT_TOL = 1e-10


class VerificationReport(NamedTuple):
    residual: float  # copy-by-copy evaluation
    dense_residual: Optional[float]  # explicit (W_1^dag W_2)^{⊗N}, when small enough
    disagreement: Optional[float]
    uses: int

    @property
    def consistent(self) -> bool:
        return self.disagreement is None or self.disagreement <= AGREEMENT_TOL

    def passed(self, tol: float = 1e-8) -> bool:
        return self.consistent and self.residual <= tol


def dense_overlap(U1, U2, scheme: DiscriminationScheme) -> complex:
    """Same overlap through dense Kronecker powers in copy-major order."""
    W1 = sequential_unitary(U1, scheme.interleaved_locals)
    W2 = sequential_unitary(U2, scheme.interleaved_locals)
    big = dense_tensor_power(W1.conj().T @ W2, scheme.copies)
    N, dims = scheme.copies, scheme.dims
    v = scheme.input.vector().reshape(tuple(d for d in dims for _ in range(N)))
    v = np.transpose(v, copy_major_order(dims, N)).reshape(-1)
    return complex(np.vdot(v, big @ v))


def verify_scheme(U1: PartitionedOperator, U2: PartitionedOperator, scheme: DiscriminationScheme,
                  dense: bool = True) -> VerificationReport:
    if U1.dims != U2.dims:
        raise ValidationError("unitaries have different party dims", ["dims"])
    if tuple(scheme.dims) != U1.dims:
        raise ValidationError(f"scheme dims {scheme.dims} do not match {U1.dims}", ["dims"])
    scheme.validate()
    ov = scheme_overlap(U1.matrix, U2.matrix, scheme)
    dense_res = gap = None
    if dense and U1.dim ** scheme.copies <= MAX_DENSE_DIM:
        dv = dense_overlap(U1.matrix, U2.matrix, scheme)
        dense_res, gap = abs(dv), abs(dv - ov)
    if scheme.kind == "single_run":
        A = PartitionedOperator(U1.matrix.conj().T @ U2.matrix, U1.dims)
        direct = abs(local_value(A, scheme.input))
        gap = max(gap or 0.0, abs(direct - abs(ov)))
    return VerificationReport(float(abs(ov)), dense_res, gap, scheme.uses)
