"""Brute-force referees. Planners never call into this module.

These are deliberately naive: dense Kronecker powers, exhaustive angle grids
over product states, and an exact planar convex hull.
"""
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence, Union

import numpy as np

from .errors import SizeLimitError
from .matrixcore import MAX_DENSE_DIM, PartitionedOperator, as_cmatrix
from .localrange import ProductState

MAX_GRID_BUDGET = 10 ** 8


def dense_tensor_power(A, N: int, cap: int = MAX_DENSE_DIM) -> np.ndarray:
    A = as_cmatrix(A)
    if A.shape[0] ** N > cap:
        raise SizeLimitError(f"dense tensor power of dimension {A.shape[0]}^{N} exceeds {cap}")
    out = np.ones((1, 1), dtype=np.complex128)
    for _ in range(N):
        out = np.kron(out, A)
    return out


@dataclass(frozen=True)
class GridSpec:
    """Points per angle parameter (one int, or one per party) and an evaluation budget."""

    resolution: Optional[Union[int, tuple]] = None
    budget: int = MAX_GRID_BUDGET

    def __post_init__(self):
        if self.budget > MAX_GRID_BUDGET:
            raise ValueError(f"grid budget is capped at {MAX_GRID_BUDGET}")


def _party_grid(d: int, r: int):
    """Grid of unit vectors in C^d: hyperspherical modulus angles and relative phases.

    Returns (states, max distance from any unit vector to the grid).
    """
    if d == 1:
        return np.ones((1, 1), dtype=np.complex128), 0.0
    mod = np.linspace(0, np.pi / 2, r)
    ph = np.linspace(0, 2 * np.pi, r, endpoint=False)
    grids = np.meshgrid(*([mod] * (d - 1) + [ph] * (d - 1)), indexing="ij")
    ang = [g.ravel() for g in grids[: d - 1]]
    phases = [g.ravel() for g in grids[d - 1:]]
    n = ang[0].size
    amp = np.ones((n, d))
    for j, a in enumerate(ang):
        amp[:, j] *= np.cos(a)
        amp[:, j + 1:] *= np.sin(a)[:, None]
    S = amp.astype(np.complex128)
    for j, p in enumerate(phases):
        S[:, j + 1] *= np.exp(1j * p)
    step_mod = (np.pi / 2) / (r - 1) if r > 1 else np.pi / 2
    step_ph = 2 * np.pi / r
    # each parameter moves the state at unit speed at most
    dist = (d - 1) * (step_mod / 2 + step_ph / 2)
    return S, dist


class GridMinimum(NamedTuple):
    value: float
    state: ProductState
    lipschitz_bound: float
    evaluations: int
    resolution: tuple


def grid_min_local(A: PartitionedOperator, spec: GridSpec = GridSpec()) -> GridMinimum:
    """Exhaustive scan of |<s|A|s>| over a product-state angle grid.

    The true minimum lies within ``lipschitz_bound`` = 2|A| * (grid covering
    radius) of the reported grid minimum.
    """
    dims = A.dims
    nparams = [2 * (d - 1) for d in dims]
    total = sum(nparams)
    if total > 6:
        raise SizeLimitError("grid oracle supports at most 6 angle parameters")
    res = spec.resolution
    if res is None:
        r = int(np.floor(spec.budget ** (1 / max(total, 1)) + 1e-9))
        res = tuple(r for _ in dims)
    elif isinstance(res, int):
        res = tuple(res for _ in dims)
    evals = int(np.prod([r ** p for r, p in zip(res, nparams)]))
    if evals > spec.budget:
        raise SizeLimitError(f"grid needs {evals} evaluations, budget {spec.budget}")
    grids = [_party_grid(d, r) for d, r in zip(dims, res)]
    S0 = grids[0][0]
    rest = [g[0] for g in grids[1:]]
    d0 = dims[0]
    drest = int(np.prod(dims[1:])) if len(dims) > 1 else 1
    A4 = A.matrix.reshape(d0, drest, d0, drest)
    # product vectors of the remaining parties
    V = np.ones((1, 1), dtype=np.complex128)
    for S in rest:
        V = np.einsum("ai,bj->abij", V, S).reshape(V.shape[0] * S.shape[0], -1)
    best = (np.inf, None, None)
    chunk = max(1, 2 ** 22 // max(1, S0.shape[0]))
    for start in range(0, V.shape[0], chunk):
        Vc = V[start:start + chunk]
        M = np.einsum("cj,ajbk,ck->cab", Vc.conj(), A4, Vc)
        T = M @ S0.T  # (c, d0, n0)
        vals = np.abs(np.einsum("ni,cin->cn", S0.conj(), T))
        k = np.unravel_index(int(np.argmin(vals)), vals.shape)
        if vals[k] < best[0]:
            best = (float(vals[k]), start + k[0], k[1])
    # unflatten the rest index into per-party grid indices
    idx_rest = np.unravel_index(best[1], [S.shape[0] for S in rest]) if rest else ()
    states = [S0[best[2]]] + [S[i] for S, i in zip(rest, idx_rest)]
    dist = sum(g[1] for g in grids)
    bound = 2 * np.linalg.norm(A.matrix, 2) * dist
    return GridMinimum(best[0], ProductState.normalized(states), float(bound), evals, tuple(res))


def _cross(o, a, b):
    return (a.real - o.real) * (b.imag - o.imag) - (a.imag - o.imag) * (b.real - o.real)


def convex_hull(points: Sequence[complex]) -> list:
    """Andrew's monotone chain; counterclockwise, collinear points dropped."""
    pts = sorted(set((float(np.real(p)), float(np.imag(p))) for p in points))
    pts = [complex(x, y) for x, y in pts]
    if len(pts) <= 2:
        return pts
    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _dist_to_segment(z, a, b):
    ab = b - a
    L = abs(ab) ** 2
    if L == 0:
        return abs(z - a)
    t = min(1.0, max(0.0, ((z - a) * np.conj(ab)).real / L))
    return abs(z - (a + t * ab))


def hull_membership(points: Sequence[complex], z: complex, slack: float = 1e-10) -> bool:
    hull = convex_hull(points)
    if len(hull) == 1:
        return abs(z - hull[0]) <= slack
    if len(hull) == 2:
        return _dist_to_segment(z, hull[0], hull[1]) <= slack
    for a, b in zip(hull, hull[1:] + hull[:1]):
        if _cross(a, b, z) < -slack * abs(b - a):
            return False
    return True


def hausdorff_distance(P: Sequence[complex], Q: Sequence[complex]) -> float:
    """Hausdorff distance between the convex hulls of two planar point sets."""
    hp, hq = convex_hull(P), convex_hull(Q)

    def edges(h):
        return [(h[0], h[0])] if len(h) == 1 else list(zip(h, h[1:] + h[:1]))

    def point_to_hull(z, h):
        if hull_membership(h, z, slack=0.0):
            return 0.0
        return min(_dist_to_segment(z, a, b) for a, b in edges(h))

    # for convex polygons the Hausdorff distance is attained at a vertex
    return max(max(point_to_hull(z, hq) for z in hp), max(point_to_hull(z, hp) for z in hq))
