"""JSON documents for operators and schemes.

Complex numbers are [re, im] pairs. Floats go through ``repr``, which is the
shortest decimal that round-trips, so a parsed scheme is bit-identical to the
one that was written.
"""
import json
from pathlib import Path

import numpy as np

from .errors import DomainError, ShapeError, ValidationError
from .localrange import ProductState
from .matrixcore import PartitionedOperator, is_unitary
from .schemes.scheme import DiscriminationScheme

UNITARY_TOL = 1e-8


def encode(x):
    """Recursively turn numpy/complex data into JSON-ready lists and floats."""
    if isinstance(x, dict):
        return {str(k): encode(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [encode(v) for v in x]
    if isinstance(x, np.ndarray):
        return encode(x.tolist())
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    if isinstance(x, (np.floating, np.integer, np.bool_)):
        return x.item()
    return x


def _complex_array(data, what):
    try:
        a = np.asarray(data, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise ShapeError(f"{what}: entries must be numbers or [re, im] pairs") from exc
    if a.ndim >= 1 and a.shape[-1] == 2 and a.ndim in (2, 3):
        return a[..., 0] + 1j * a[..., 1]
    raise ShapeError(f"{what}: expected [re, im] pairs, got array of shape {a.shape}")


def operator_to_doc(U: PartitionedOperator, name=None) -> dict:
    doc = {"dims": list(U.dims), "matrix": encode(U.matrix)}
    if name is not None:
        doc["name"] = name
    return doc


def operator_from_doc(doc: dict, unitary: bool = True) -> PartitionedOperator:
    if not isinstance(doc, dict) or "dims" not in doc or "matrix" not in doc:
        raise ValidationError("operator document needs 'dims' and 'matrix'", ["dims", "matrix"])
    M = _complex_array(doc["matrix"], "matrix")
    if M.ndim != 2:
        raise ShapeError("matrix must be a list of rows")
    U = PartitionedOperator(M, tuple(doc["dims"]))
    if unitary and not is_unitary(U.matrix, tol=UNITARY_TOL):
        err = np.linalg.norm(U.matrix.conj().T @ U.matrix - np.eye(U.dim))
        raise DomainError(f"operator {doc.get('name', '')!r} is not unitary: |U^dag U - I|_F = {err:.3e}")
    return U


def load_operator(path) -> PartitionedOperator:
    return operator_from_doc(json.loads(Path(path).read_text()))


def scheme_to_doc(s: DiscriminationScheme) -> dict:
    return {
        "kind": s.kind,
        "dims": list(s.dims),
        "copies": s.copies,
        "sequential_depth": s.sequential_depth,
        "uses": s.uses,
        "interleaved_locals": encode(list(s.interleaved_locals)),
        "input": encode(list(s.input.party_states)),
        "phase_note": s.phase_note,
        "residual": s.residual,
        "branch": s.branch,
        "diagnostics": encode(s.diagnostics),
    }


def scheme_from_doc(doc: dict) -> DiscriminationScheme:
    need = ["kind", "dims", "copies", "sequential_depth", "interleaved_locals", "input", "residual"]
    missing = [k for k in need if k not in doc]
    if missing:
        raise ValidationError(f"scheme document lacks {missing}", missing)
    try:
        party = tuple(_complex_array(v, "input") for v in doc["input"])
        if any(v.ndim != 1 for v in party):
            raise ShapeError("each party state must be a list of [re, im] pairs")
        state = ProductState(party)
    except (DomainError, ShapeError) as exc:
        raise ValidationError(f"bad input state: {exc}", ["input"]) from exc
    locs = tuple(_complex_array(u, "interleaved_locals") for u in doc["interleaved_locals"])
    s = DiscriminationScheme(
        kind=doc["kind"], dims=tuple(doc["dims"]), copies=int(doc["copies"]),
        sequential_depth=int(doc["sequential_depth"]), interleaved_locals=locs, input=state,
        residual=float(doc["residual"]), phase_note=doc.get("phase_note"),
        branch=doc.get("branch", ""), diagnostics=doc.get("diagnostics", {}))
    return s.validate()


def dumps(doc) -> str:
    return json.dumps(doc, indent=1)
