"""Perfect LOCC discrimination of two (or more) multipartite unitaries.

The planners return a certificate (input product state, copy count,
interleaved local unitaries) under which the outputs for U_1 and U_2 are
orthogonal, together with the verified residual overlap.
"""
from .errors import (
    ConvergenceError,
    DomainError,
    InternalContradiction,
    LoccError,
    PlannerFailure,
    SearchFailure,
    ShapeError,
    SizeLimitError,
    ValidationError,
)
from .localrange import ProductState, local_value, min_abs_local
from .matrixcore import PartitionedOperator
from .schemes import DiscriminationScheme, plan_discrimination, plan_multi, verify_scheme

__version__ = "0.1.0"
