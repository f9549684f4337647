"""Numerical range W(A) = {<x|A|x> : |x| = 1}.

Boundary points come from support directions: for an angle phi the top
eigenvector of the Hermitian part of exp(-i phi) A lands on the boundary of
W(A). Membership is tested against the support half-planes, and points inside
the range are realized constructively by combining states two at a time on the
Bloch sphere of their two-dimensional span.
"""
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.optimize

from .errors import ConvergenceError, DomainError, ShapeError
from .matrixcore import as_cmatrix, fix_gauge, orthonormal_frame

DEFAULT_DIRECTIONS = 720
VALUE_TOL = 1e-9

_PAULI = np.array([
    [[0, 1], [1, 0]],
    [[0, -1j], [1j, 0]],
    [[1, 0], [0, -1]],
], dtype=np.complex128)


def _square(A):
    A = as_cmatrix(A)
    if A.shape[0] != A.shape[1]:
        raise ShapeError(f"numerical range needs a square matrix, got {A.shape}")
    return A


def quad(A, x) -> complex:
    return complex(np.vdot(x, A @ x))


@dataclass(frozen=True, eq=False)
class RangeSamples:
    values: np.ndarray
    witnesses: np.ndarray  # one witness per row

    @classmethod
    def from_witnesses(cls, A, witnesses, values=None, tol=VALUE_TOL):
        A = _square(A)
        W = np.atleast_2d(np.asarray(witnesses, dtype=np.complex128))
        exact = np.einsum("ki,ij,kj->k", W.conj(), A, W)
        if values is None:
            values = exact
        values = np.asarray(values, dtype=np.complex128)
        bad = np.abs(values - exact) > tol * max(1.0, np.abs(A).max())
        if np.any(bad):
            raise DomainError(f"{int(bad.sum())} witnesses do not reproduce their values")
        return cls(values, W)

    def __len__(self):
        return len(self.values)


def support_directions(A, angles):
    """Top eigenpairs of Re(exp(-i phi) A) for each angle (batched)."""
    A = _square(A)
    ha = (A + A.conj().T) / 2
    ka = (A - A.conj().T) / 2j
    angles = np.asarray(angles, dtype=float)
    H = np.cos(angles)[:, None, None] * ha + np.sin(angles)[:, None, None] * ka
    w, v = np.linalg.eigh(H)
    return w[:, -1], v[:, :, -1]


def support_function(A, angles):
    A = _square(A)
    ha = (A + A.conj().T) / 2
    ka = (A - A.conj().T) / 2j
    angles = np.asarray(angles, dtype=float)
    H = np.cos(angles)[:, None, None] * ha + np.sin(angles)[:, None, None] * ka
    return np.linalg.eigvalsh(H)[:, -1]


def range_boundary(A, samples: int = DEFAULT_DIRECTIONS) -> RangeSamples:
    if samples < 3:
        raise ValueError("range_boundary needs at least 3 samples")
    A = _square(A)
    angles = 2 * np.pi * np.arange(samples) / samples
    _, vecs = support_directions(A, angles)
    return RangeSamples.from_witnesses(A, vecs)


@dataclass(frozen=True)
class RangeCertificate:
    inside: bool
    worst_angle: float
    violation: float  # max over directions of Re(e^{-i phi} z) - h(phi); <= tol when inside

    def __bool__(self):
        return self.inside


def in_range(A, z, tol: float = 1e-8, directions: int = DEFAULT_DIRECTIONS) -> RangeCertificate:
    """Half-plane test: z passes iff Re(e^{-i phi} z) <= h_A(phi) + tol on every sampled phi."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    angles = 2 * np.pi * np.arange(directions) / directions
    h = support_function(A, angles)
    gap = np.real(np.exp(-1j * angles) * z) - h
    k = int(np.argmax(gap))
    return RangeCertificate(bool(gap[k] <= tol), float(angles[k]), float(gap[k]))


def closest_to_origin(A, directions: int = DEFAULT_DIRECTIONS):
    """Point of W(A) of least modulus, with a witness state.

    Returns (value, witness, inside) where ``inside`` means the support test
    found 0 in W(A) (then ``value``/``witness`` are not meaningful).
    The distance from 0 to a convex set is max_phi -h(phi); the maximizing
    direction's support point is the nearest point.
    """
    A = _square(A)
    angles = 2 * np.pi * np.arange(directions) / directions
    h = support_function(A, angles)
    k = int(np.argmin(h))
    if h[k] >= 0:
        return 0j, None, True
    step = 2 * np.pi / directions
    res = scipy.optimize.minimize_scalar(
        lambda t: support_function(A, [t])[0],
        bounds=(angles[k] - step, angles[k] + step),
        method="bounded",
        options={"xatol": 1e-12},
    )
    t = res.x if res.fun <= h[k] else angles[k]
    _, v = support_directions(A, [t])
    x = fix_gauge(v[0])
    return quad(A, x), x, False


def _bloch_to_state(r):
    r = np.asarray(r, dtype=float)
    r = r / max(np.linalg.norm(r), 1e-300)
    if r[2] > -1 + 1e-14:
        x = np.array([1 + r[2], r[0] + 1j * r[1]]) / np.sqrt(2 * (1 + r[2]))
    else:
        x = np.array([0, 1], dtype=np.complex128)
    return x


def _state_to_bloch(x):
    x = np.asarray(x, dtype=np.complex128)
    x = x / np.linalg.norm(x)
    rho = np.outer(x, x.conj())
    return np.real(np.einsum("kij,ji->k", _PAULI, rho))


def bloch_solve(B2, target, prefer=None):
    """Unit x in C^2 with x^dag B2 x = target, or None if target is outside W(B2).

    On the Bloch sphere the quadratic form is affine: value = c0 + M r with M
    real 2x3. The solution set is the sphere cut by an affine line/plane; among
    solutions we return the one whose Bloch vector is closest to ``prefer``.
    """
    B2 = as_cmatrix(B2)
    c0 = np.trace(B2) / 2
    b = np.einsum("kij,ji->k", _PAULI, B2) / 2
    M = np.vstack([b.real, b.imag])
    rhs = np.array([(target - c0).real, (target - c0).imag])
    U, s, Vt = np.linalg.svd(M)
    scale = max(1.0, np.abs(B2).max())
    rank = int(np.sum(s > 1e-13 * scale))
    coef = U[:, :rank].T @ rhs
    if rank and np.linalg.norm(U[:, rank:].T @ rhs) > 1e-11 * scale:
        return None
    if not rank and np.linalg.norm(rhs) > 1e-11 * scale:
        return None
    rp = Vt[:rank].T @ (coef / s[:rank]) if rank else np.zeros(3)
    nrm2 = rp @ rp
    if nrm2 > 1 + 1e-9:
        return None
    null = Vt[rank:]
    pref = np.zeros(3) if prefer is None else np.asarray(prefer, dtype=float)
    n = null.T @ (null @ pref)
    if np.linalg.norm(n) < 1e-12:
        n = null[-1]
    n = n / np.linalg.norm(n)
    r = rp + np.sqrt(max(0.0, 1 - nrm2)) * n
    return _bloch_to_state(r)


def bloch_min_abs(B2):
    """Unit x in C^2 minimizing |x^dag B2 x|, in closed form; returns (value, x).

    With value = c0 + M r this is min |c0 + M r| over the Bloch ball, a
    three-dimensional trust-region problem. M has a null direction, so any
    ball point can be pushed to the sphere without changing the value.
    """
    B2 = as_cmatrix(B2)
    c0 = np.trace(B2) / 2
    b = np.einsum("kij,ji->k", _PAULI, B2) / 2
    M = np.vstack([b.real, b.imag])
    c = np.array([c0.real, c0.imag])
    U, s, Vt = np.linalg.svd(M)
    scale = max(1.0, np.abs(B2).max())
    rank = int(np.sum(s > 1e-13 * scale))
    g = U[:, :rank].T @ (-c)
    r_ls = Vt[:rank].T @ (g / s[:rank]) if rank else np.zeros(3)
    if r_ls @ r_ls <= 1:
        null = Vt[rank:][-1]
        r = r_ls + np.sqrt(max(0.0, 1 - r_ls @ r_ls)) * null
    else:
        # r(lam) = -(M^T M + lam)^{-1} M^T c on the unit sphere, lam > 0.
        # Newton on 1/|r(lam)| - 1 is monotone from lam = 0 (Moré-Sorensen).
        s_r = s[:rank]
        sig = [float(v) ** 2 for v in s_r]
        a2 = [float(v) ** 2 for v in s_r * g]
        lam = 0.0
        for _ in range(100):
            n2 = sum(ai / (si + lam) ** 2 for ai, si in zip(a2, sig))
            d3 = sum(ai / (si + lam) ** 3 for ai, si in zip(a2, sig))
            nrm = n2 ** 0.5
            phi = 1 / nrm - 1
            if abs(phi) < 1e-15:
                break
            lam -= phi * nrm ** 3 / d3
        r = Vt[:rank].T @ (s_r * g / (s_r ** 2 + lam))
    x = _bloch_to_state(r)
    return quad(B2, x), x


def combine_in_frame(B, coords, weights):
    """Pairwise-merge construction in frame coordinates.

    ``coords`` are unit vectors (rows) in the frame where ``B`` acts. Returns a
    unit vector in their span whose value is the weighted mean of their values,
    built by merging one state at a time inside a two-dimensional span.
    """
    B = as_cmatrix(B)
    coords = np.atleast_2d(np.asarray(coords, dtype=np.complex128))
    weights = np.asarray(weights, dtype=float)
    order = [k for k in range(len(weights)) if weights[k] > 0]
    cur = coords[order[0]] / np.linalg.norm(coords[order[0]])
    mass = weights[order[0]]
    for k in order[1:]:
        nxt = coords[k] / np.linalg.norm(coords[k])
        p = weights[k]
        ov = np.vdot(cur, nxt)
        perp = nxt - ov * cur
        pn = np.linalg.norm(perp)
        if pn <= 1e-10:
            mass += p
            continue
        E = np.stack([cur, perp / pn], axis=1)
        B2 = E.conj().T @ B @ E
        y = np.array([ov, pn])
        vcur, vnxt = quad(B2, np.array([1, 0])), quad(B2, y)
        target = (mass * vcur + p * vnxt) / (mass + p)
        # naive superposition sqrt(mass) cur + sqrt(p) nxt with nxt phase-aligned to cur
        ph = abs(ov) / ov if abs(ov) > 1e-14 else 1.0
        naive = np.array([np.sqrt(mass), 0]) + np.sqrt(p) * np.conj(ph) * y
        x2 = bloch_solve(B2, target, prefer=_state_to_bloch(naive))
        if x2 is None:
            # target sits on the segment between two points of W(B2), so only
            # rounding can land here; keep the better endpoint
            x2 = np.array([1, 0]) if abs(vcur - target) <= abs(vnxt - target) else y
        cur = E @ x2
        cur = cur / np.linalg.norm(cur)
        mass += p
    return cur


def multistart_solve(B, target, seed=0, starts: int = 64, tol=VALUE_TOL, initial=()):
    """Fallback: least-squares search for unit x with x^dag B x = target."""
    B = as_cmatrix(B)
    n = B.shape[0]
    rng = np.random.default_rng(seed)

    def unpack(y):
        x = y[:n] + 1j * y[n:]
        return x / np.linalg.norm(x)

    def resid(y):
        d = quad(B, unpack(y)) - target
        return [d.real, d.imag]

    best_x, best = None, np.inf
    seeds = [np.concatenate([np.real(x), np.imag(x)]) for x in initial]
    for k in range(starts):
        y0 = seeds[k] if k < len(seeds) else rng.standard_normal(2 * n)
        sol = scipy.optimize.least_squares(resid, y0, method="trf", xtol=1e-15, ftol=1e-15, gtol=1e-15)
        x = unpack(sol.x)
        r = abs(quad(B, x) - target)
        if r < best:
            best_x, best = x, r
        if best <= tol * 1e-3:
            break
    if best > tol:
        raise ConvergenceError("multistart search did not reach the target value", best)
    return best_x, best


def achieve_value(A, states: Sequence, weights: Sequence[float], seed=0, starts: int = 64) -> np.ndarray:
    """Unit vector in span(states) whose value equals sum_k p_k <psi_k|A|psi_k>."""
    A = as_cmatrix(A)
    weights = np.asarray(weights, dtype=float)
    if len(states) == 0:
        raise ValueError("achieve_value needs at least one state")
    if len(weights) != len(states):
        raise ValueError("one weight per state required")
    if np.any(weights < 0) or abs(weights.sum() - 1) > 1e-12:
        raise DomainError("weights must be a probability vector")
    states = [np.asarray(s, dtype=np.complex128) / np.linalg.norm(s) for s in states]
    target = sum(p * quad(A, s) for p, s in zip(weights, states))
    top = int(np.argmax(weights))
    if weights[top] == 1.0:
        return fix_gauge(states[top])
    frame, _ = orthonormal_frame(states)
    B = frame.conj().T @ A @ frame
    coords = np.array([frame.conj().T @ s for s in states])
    x = combine_in_frame(B, coords, weights)
    if abs(quad(B, x) - target) > VALUE_TOL:
        x, _ = multistart_solve(B, target, seed=seed, starts=starts, initial=[x])
    return fix_gauge(frame @ x)


def isotropic_vector(B, seed=0, starts: int = 64, tol=VALUE_TOL) -> np.ndarray:
    """Unit x with |x^dag B x| <= tol, given that 0 lies in W(B)."""
    B = _square(B)
    cert = in_range(B, 0, tol=1e-8)
    if not cert:
        raise DomainError(f"0 is not in the numerical range (violation {cert.violation:.3e})")
    n = B.shape[0]
    if n == 1:
        if abs(B[0, 0]) > tol:
            raise ConvergenceError("1x1 operator has nonzero value", abs(B[0, 0]))
        return np.ones(1, dtype=np.complex128)
    if n == 2:
        x = bloch_solve(B, 0, prefer=[1, 0, 0])
        if x is not None and abs(quad(B, x)) <= tol:
            return fix_gauge(x)
    x = _isotropic_from_hull(B)
    if x is None or abs(quad(B, x)) > tol:
        x, _ = multistart_solve(B, 0, seed=seed, starts=starts, tol=tol,
                                initial=[] if x is None else [x])
    return fix_gauge(x)


def _isotropic_from_hull(B, samples=(64, 720)):
    """Write 0 as a convex combination of boundary points, then realize it."""
    for S in samples:
        rs = range_boundary(B, S)
        z = rs.values
        res = scipy.optimize.linprog(
            np.zeros(len(z)),
            A_eq=np.vstack([z.real, z.imag, np.ones(len(z))]),
            b_eq=[0, 0, 1],
            bounds=(0, None),
            method="highs",
        )
        if res.status != 0:
            continue
        w = np.clip(res.x, 0, None)
        keep = w > 1e-14
        w = w[keep] / w[keep].sum()
        return achieve_value(B, list(rs.witnesses[keep]), w)
    return None
