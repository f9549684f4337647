from .dispatch import difference, plan_discrimination, trace_zero_plan, two_qubit_hermitian_plan
from .keylemma import (
    KeyLemmaPlan,
    KeyLemmaResult,
    keylemma_isotropic,
    keylemma_N,
    keylemma_state,
    keylemma_weights,
    tensor_bracket,
    tensor_overlap,
)
from .multi import EliminationOutcome, EliminationTree, plan_multi, simulate_elimination
from .parallel import choose_pivot, lattice_path, parallel_plan
from .scheme import DiscriminationScheme, apply_copywise, output_state, scheme_overlap, sequential_unitary
from .sequential import SequentialResult, sequential_search, trace_diagnostic
from .verify import VerificationReport, dense_overlap, verify_scheme
