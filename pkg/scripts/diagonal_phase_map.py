"""Minimum product-state |value| for two-qubit diagonal unitaries diag(1, e^{ia}, e^{ib}, e^{i(a+b)+ic}).

c = 0 is a product of single-qubit phase gates; a = b = pi/2, c = 0 is
diag(1, i, i, -1), whose gap is 0.5. Rows with a nonzero minimum need more than one
copy. Prints CSV rows a,b,c,min_abs_local,copies.

    python scripts/diagonal_phase_map.py --steps 9 > phase_map.csv
"""
import argparse

import numpy as np

from loccdisc.localrange import min_abs_local
from loccdisc.matrixcore import PartitionedOperator
from loccdisc.schemes import plan_discrimination


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--steps", type=int, default=7)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    I = PartitionedOperator(np.eye(4), (2, 2))
    grid = np.linspace(0, np.pi, args.steps)
    print("a,b,c,min_abs_local,copies")
    for a in map(float, grid):
        for b in map(float, grid):
            for c in (0.0, np.pi / 2, np.pi):
                U = np.diag(np.exp(1j * np.array([0, a, b, a + b + c])))
                if np.allclose(U, U[0, 0] * np.eye(4)):
                    continue
                op = PartitionedOperator(U, (2, 2))
                m = abs(min_abs_local(op, seed=args.seed, starts=8).value)
                s = plan_discrimination(I, op, seed=args.seed)
                print(f"{a!r},{b!r},{c!r},{m!r},{s.copies}")


if __name__ == "__main__":
    main()
