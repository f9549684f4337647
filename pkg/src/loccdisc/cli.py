"""locc-disc: analyze, plan and verify discrimination of two unitaries.

Exit codes: 0 success, 2 bad input, 3 planner or search failure, 4 failed verification.
"""
import argparse
import csv
import io as _io
import json
import os
import sys
from pathlib import Path

import numpy as np

from .errors import LoccError, PlannerFailure, SearchFailure
from .hermbasis import angle_gap, build_lattice, canonical_phase, generalized_paulis, hermitian_basis
from .io import dumps, encode, load_operator, scheme_from_doc, scheme_to_doc
from .localrange import min_abs_local, random_product_state, local_value
from .matrixcore import PartitionedOperator
from .numrange import range_boundary
from .schemes import difference, plan_discrimination, verify_scheme
from .schemes.dispatch import TRACE_ZERO_TOL

EXIT_OK, EXIT_INPUT, EXIT_PLANNER, EXIT_VERIFY = 0, 2, 3, 4


class InputError(Exception):
    pass


def _seed(value):
    if value is not None:
        return value
    env = os.environ.get("LOCC_DISC_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError as exc:
        raise InputError(f"LOCC_DISC_SEED must be an integer, got {env!r}") from exc


def _load(path):
    try:
        return load_operator(path)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _emit(text, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def analyze(U1, U2, seed=0) -> dict:
    """Classification report for a pair: which branch the planner would take and why."""
    A = difference(U1, U2)
    tr = complex(np.trace(A.matrix))
    dec = canonical_phase(A.matrix)
    rep = {"dims": list(A.dims), "trace": tr, "hermitian_up_to_phase": dec is not None,
           "phase": None if dec is None else dec.theta}
    if abs(tr) <= TRACE_ZERO_TOL:
        rep["verdict"] = "trace-zero; single-run available"
        return rep
    lm = min_abs_local(A, seed=seed)
    rep["min_abs_local"] = abs(lm.value)
    rep["min_abs_local_state"] = list(lm.state.party_states)
    try:
        lat = build_lattice(A)
        vals = lat.values.ravel()
        rep["lattice"] = {"points": int(vals.size),
                          "zeros": int(np.sum(np.abs(vals) <= 1e-10)),
                          "max_gap_from_origin": max(angle_gap(vals[0], z) for z in vals)}
    except LoccError:
        rep["lattice"] = None
    if abs(lm.value) <= 1e-8:
        rep["verdict"] = "isotropic product state found; single-run available"
    elif dec is None:
        rep["verdict"] = "non-Hermitian up to phase; parallel branch"
    elif A.dims == (2, 2):
        rep["verdict"] = "Hermitian up to phase on two qubits; single-run via local interval"
    else:
        rep["verdict"] = "Hermitian up to phase; sequential then parallel branch"
    return rep


def cmd_analyze(args):
    rep = analyze(_load(args.file1), _load(args.file2), seed=_seed(args.seed))
    if args.json:
        print(dumps(encode(rep)))
    else:
        for k in ("dims", "trace", "hermitian_up_to_phase", "phase", "min_abs_local", "lattice"):
            if k in rep:
                print(f"{k}: {rep[k]}")
        print(f"verdict: {rep['verdict']}")
    return EXIT_OK


def cmd_plan(args):
    U1, U2 = _load(args.file1), _load(args.file2)
    try:
        s = plan_discrimination(U1, U2, seed=_seed(args.seed), tol=args.tol, n_max=args.max_n)
    except (PlannerFailure, SearchFailure) as exc:
        print(f"planner failure: {exc}", file=sys.stderr)
        diag = getattr(exc, "diagnostics", {})
        if diag:
            print(dumps(encode({k: v for k, v in diag.items() if k != "scheme"})), file=sys.stderr)
        return EXIT_PLANNER
    _emit(dumps(scheme_to_doc(s)) + "\n", args.out)
    print(f"kind={s.kind} copies={s.copies} depth={s.sequential_depth} residual={s.residual!r}",
          file=sys.stderr if not args.out else sys.stdout)
    return EXIT_OK


def cmd_verify(args):
    try:
        doc = json.loads(Path(args.scheme).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"{args.scheme}: {exc}") from exc
    s = scheme_from_doc(doc)
    U1, U2 = _load(args.file1), _load(args.file2)
    rep = verify_scheme(U1, U2, s, dense=args.oracle)
    print(f"residual={rep.residual!r}")
    print(f"uses={rep.uses}")
    if rep.dense_residual is not None:
        print(f"dense_residual={rep.dense_residual!r} disagreement={rep.disagreement!r}")
    if args.oracle and s.kind == "single_run":
        from .oracle import grid_min_local

        A = PartitionedOperator(U1.matrix.conj().T @ U2.matrix, U1.dims)
        try:
            g = grid_min_local(A)
            print(f"grid_min_local={g.value!r} bound={g.lipschitz_bound!r}")
        except LoccError as exc:
            print(f"grid_min_local skipped: {exc}")
    ok = rep.passed(args.tol)
    print("PASS" if ok else "FAIL")
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_range(args):
    U = _load(args.file)
    if args.samples < 3:
        raise InputError("--samples must be at least 3")
    A = U.matrix
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["angle", "re", "im", "kind"])
    rs = range_boundary(A, args.samples)
    angles = np.linspace(0, 2 * np.pi, args.samples, endpoint=False)
    for a, z in zip(angles, rs.values):
        w.writerow([repr(float(a)), repr(float(z.real)), repr(float(z.imag)), "boundary"])
    if args.local:
        rng = np.random.default_rng(_seed(args.seed))
        for _ in range(args.local):
            z = local_value(U, random_product_state(U.dims, rng))
            w.writerow([repr(float(np.angle(z))), repr(z.real), repr(z.imag), "local_sample"])
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def _parse_dims(text):
    try:
        dims = [int(x) for x in text.split(",")]
    except ValueError as exc:
        raise InputError(f"--dims must be comma-separated integers, got {text!r}") from exc
    if not dims or any(d < 1 for d in dims):
        raise InputError(f"--dims entries must be positive, got {text!r}")
    return dims


def cmd_basis(args):
    dims = _parse_dims(args.dims)
    per_party = [hermitian_basis(d) for d in dims]
    total = int(np.prod([len(b) for b in per_party]))
    print(f"hermitian basis: {total} product states")
    for k, b in enumerate(per_party):
        for j, s in enumerate(b):
            print(f"party {k} state {j}: {np.array2string(s, precision=4)}")
    if np.prod(dims) ** 2 <= 4096:
        print(f"generalized paulis: {len(generalized_paulis(dims))}")
    else:
        print(f"generalized paulis: {int(np.prod(dims)) ** 2} (not listed)")
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="locc-disc", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="classify a pair of unitaries")
    a.add_argument("file1")
    a.add_argument("file2")
    a.add_argument("--seed", type=int)
    a.add_argument("--json", action="store_true")
    a.set_defaults(func=cmd_analyze)

    pl = sub.add_parser("plan", help="build a discrimination scheme")
    pl.add_argument("file1")
    pl.add_argument("file2")
    pl.add_argument("--seed", type=int)
    pl.add_argument("--tol", type=float, default=1e-8)
    pl.add_argument("--max-n", type=int, default=8)
    pl.add_argument("--out")
    pl.set_defaults(func=cmd_plan)

    v = sub.add_parser("verify", help="re-check a scheme file")
    v.add_argument("scheme")
    v.add_argument("file1")
    v.add_argument("file2")
    v.add_argument("--oracle", action="store_true", help="add dense-referee and grid checks")
    v.add_argument("--tol", type=float, default=1e-8)
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("range", help="CSV of numerical-range boundary and product-state samples")
    r.add_argument("file")
    r.add_argument("--samples", type=int, default=360)
    r.add_argument("--local", type=int, nargs="?", const=500, default=0,
                   help="number of random product-state samples (default 500 when given)")
    r.add_argument("--seed", type=int)
    r.add_argument("--out")
    r.set_defaults(func=cmd_range)

    b = sub.add_parser("basis", help="list Hermitian basis states and generalized Paulis")
    b.add_argument("--dims", required=True)
    b.set_defaults(func=cmd_basis)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, LoccError) as exc:
        if isinstance(exc, (PlannerFailure, SearchFailure)):
            print(f"planner failure: {exc}", file=sys.stderr)
            return EXIT_PLANNER
        msg = str(exc)
        if "identical" in msg:
            msg = f"identical up to phase: {msg}"
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
