"""Which planner branch handles Haar-random pairs, and how many uses it needs.

    python scripts/branch_census.py --dims 2,2 --count 200 --seed 1
"""
import argparse
import collections
import time

import numpy as np

from loccdisc.matrixcore import PartitionedOperator, random_unitary
from loccdisc.schemes import plan_discrimination


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--dims", default="2,2")
    ap.add_argument("--count", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    dims = tuple(int(x) for x in args.dims.split(","))
    d = int(np.prod(dims))
    census = collections.Counter()
    worst = 0.0
    t0 = time.perf_counter()
    for i in range(args.count):
        rng = np.random.default_rng([args.seed, i])
        U1 = PartitionedOperator(random_unitary(d, rng), dims)
        U2 = PartitionedOperator(random_unitary(d, rng), dims)
        s = plan_discrimination(U1, U2, seed=i)
        census[s.diagnostics["stage"], s.uses] += 1
        worst = max(worst, s.residual)
    print(f"dims={dims} pairs={args.count} time={time.perf_counter() - t0:.1f}s worst residual={worst:.2e}")
    print("stage,uses,count")
    for (stage, uses), n in sorted(census.items()):
        print(f"{stage},{uses},{n}")


if __name__ == "__main__":
    main()
