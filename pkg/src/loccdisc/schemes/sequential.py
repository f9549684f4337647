"""Interleaved sequential search for Hermitian-up-to-phase pairs.

When D = U_1^dag U_2 = e^{i theta} H with H Hermitian, no lattice pivot
exists. Running the unknown unitary n times with local unitaries in between
gives W_1^dag W_2, which for a suitable interleaving is no longer Hermitian
up to phase. The interleavers are found by a seeded random search.
"""
from typing import NamedTuple

import numpy as np

from ..errors import DomainError, SearchFailure
from ..hermbasis import canonical_phase, hermiticity_defect
from ..matrixcore import PartitionedOperator, random_local_unitary
from .scheme import sequential_unitary

ACCEPT_DEFECT = 1e-6


class SequentialResult(NamedTuple):
    n: int
    locals: tuple
    W1: np.ndarray
    W2: np.ndarray
    diagnostics: dict


def trace_diagnostic(D, n: int) -> complex:
    """(tr D / d)^{n-1} tr D: the trace of W_1^dag W_2 averaged over local twirls."""
    d = D.shape[0]
    t = np.trace(D)
    return complex((t / d) ** (n - 1) * t)


def sequential_search(U1: PartitionedOperator, U2: PartitionedOperator, seed=0, n_max: int = 8,
                      starts: int = 64) -> SequentialResult:
    """Grow the interleaving one slot at a time until W_1^dag W_2 is not Hermitian up to phase.

    At depth n the candidates for the newest slot are the identity and
    ``starts`` Haar-random local unitaries; the one of largest Hermiticity
    defect is kept, so earlier slots never change.
    """
    if U1.dims != U2.dims:
        raise DomainError("unitaries must share party dimensions")
    D = U1.matrix.conj().T @ U2.matrix
    dec = canonical_phase(D)
    if dec is None:
        raise DomainError("U_1^dag U_2 is already non-Hermitian up to phase")
    if abs(np.trace(dec.hermitian)) <= 1e-10:
        raise DomainError("zero-trace pairs have a single-run scheme")
    d = D.shape[0]
    eye = np.eye(d, dtype=np.complex128)
    committed = []
    history = []
    for n in range(2, n_max + 1):
        rng = np.random.default_rng([int(seed), n])
        candidates = [eye] + [random_local_unitary(U1.dims, rng) for _ in range(starts)]
        defects = []
        for u in candidates:
            lc = committed + [u]
            W1 = sequential_unitary(U1.matrix, lc)
            W2 = sequential_unitary(U2.matrix, lc)
            defects.append(hermiticity_defect(W1.conj().T @ W2))
        j = int(np.argmax(defects))
        committed.append(candidates[j])
        W1 = sequential_unitary(U1.matrix, committed)
        W2 = sequential_unitary(U2.matrix, committed)
        Dn = W1.conj().T @ W2
        history.append({"n": n, "defect": defects[j], "identity_defect": defects[0], "choice": j,
                        "trace_diagnostic": trace_diagnostic(D, n), "trace": complex(np.trace(Dn))})
        scalar = abs(abs(np.trace(Dn)) - d) <= 1e-10
        if defects[j] > ACCEPT_DEFECT and canonical_phase(Dn) is None and not scalar:
            return SequentialResult(n, tuple(committed), W1, W2,
                                    {"history": history, "phase": dec.theta})
    raise SearchFailure(f"no non-Hermitian interleaving found up to n = {n_max}",
                        {"history": history, "phase": dec.theta, "seed": seed})
