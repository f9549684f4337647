"""Depth of the interleaved search for reflections I - 2|phi><phi| against the identity.

phi is drawn with Schmidt coefficients close to uniform so that no product
state is orthogonal to its image, which is the case the sequential stage exists for.

    python scripts/sequential_depth.py --dims 3,3 --count 20
"""
import argparse
import collections

import numpy as np

from loccdisc.errors import PlannerFailure
from loccdisc.matrixcore import PartitionedOperator, random_unitary
from loccdisc.schemes import plan_discrimination


def near_maximal(dims, rng, spread):
    da, db = dims
    k = min(da, db)
    lam = np.ones(k) + spread * rng.standard_normal(k)
    lam = np.abs(lam) / np.linalg.norm(lam)
    Ua, Ub = random_unitary(da, rng), random_unitary(db, rng)
    return sum(lam[j] * np.kron(Ua[:, j], Ub[:, j]) for j in range(k))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--dims", default="3,3")
    ap.add_argument("--count", type=int, default=20)
    ap.add_argument("--spread", type=float, default=0.05)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    dims = tuple(int(x) for x in args.dims.split(","))
    d = int(np.prod(dims))
    I = PartitionedOperator(np.eye(d), dims)
    out = collections.Counter()
    for i in range(args.count):
        rng = np.random.default_rng([args.seed, i])
        phi = near_maximal(dims, rng, args.spread)
        U = PartitionedOperator(np.eye(d) - 2 * np.outer(phi, phi.conj()), dims)
        try:
            s = plan_discrimination(I, U, seed=i)
            out[s.kind, s.sequential_depth, s.copies] += 1
        except PlannerFailure as exc:
            out["failure", exc.stage, 0] += 1
    print("kind,depth,copies,count")
    for key, n in sorted(out.items(), key=str):
        print(",".join(map(str, key)) + f",{n}")


if __name__ == "__main__":
    main()
