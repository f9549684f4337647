"""Local numerical range: values <s|A|s> over product states s = s_1 ⊗ ... ⊗ s_m.

Everything here works party by party. Fixing all parties but one contracts A
to an operator M on that party, and the single-party problem is a question
about the ordinary numerical range W(M).
"""
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
import scipy.optimize

from .errors import ConvergenceError, DomainError, ShapeError
from .matrixcore import (
    PartitionedOperator,
    as_cmatrix,
    contract_party,
    contract_party_density,
    fix_gauge,
    kron_states,
    random_state,
)
from .numrange import achieve_value, bloch_min_abs, closest_to_origin, isotropic_vector, support_directions

SEESAW_DIRECTIONS = 180


@dataclass(frozen=True, eq=False)
class ProductState:
    """One normalized state per party.

    In parallel schemes a party's entry lives in that party's N-copy space and
    may be entangled across the copies.
    """

    party_states: tuple

    def __post_init__(self):
        states = []
        for s in self.party_states:
            s = np.asarray(s, dtype=np.complex128).reshape(-1)
            if abs(np.linalg.norm(s) - 1) > 1e-12:
                raise DomainError("party states must be normalized")
            states.append(s)
        object.__setattr__(self, "party_states", tuple(states))

    @classmethod
    def normalized(cls, states):
        return cls(tuple(np.asarray(s, dtype=np.complex128) / np.linalg.norm(s) for s in states))

    @property
    def dims(self):
        return tuple(s.size for s in self.party_states)

    def vector(self) -> np.ndarray:
        return kron_states(self.party_states)

    def gauge_fixed(self) -> "ProductState":
        return ProductState(tuple(fix_gauge(s) for s in self.party_states))

    def replace(self, party, state) -> "ProductState":
        states = list(self.party_states)
        states[party] = np.asarray(state, dtype=np.complex128) / np.linalg.norm(state)
        return ProductState(tuple(states))


def _check_dims(A: PartitionedOperator, s: ProductState):
    if s.dims != A.dims:
        raise ShapeError(f"product state dims {s.dims} do not match operator dims {A.dims}")


def conditional_operator(A: PartitionedOperator, s: ProductState, party: int) -> np.ndarray:
    """Operator on ``party`` obtained by fixing every other party to its state in ``s``."""
    op = A
    for k in reversed(range(A.nparties)):
        if k == party:
            continue
        op = contract_party(op, k, s.party_states[k])
    return op.matrix


def local_value(A: PartitionedOperator, s: ProductState) -> complex:
    _check_dims(A, s)
    op = A
    for k in reversed(range(A.nparties)):
        op = contract_party(op, k, s.party_states[k])
    return complex(op.matrix[0, 0])


def random_product_state(dims, seed=None) -> ProductState:
    rng = np.random.default_rng(seed) if not isinstance(seed, np.random.Generator) else seed
    return ProductState(tuple(random_state(d, rng) for d in dims))


class LocalMinimum(NamedTuple):
    value: complex
    state: ProductState
    starts: int
    sweeps: int


def _min_abs_update(M):
    """Unit x minimizing |x^dag M x|; returns (value, x)."""
    if M.shape[0] == 1:
        return complex(M[0, 0]), np.ones(1, dtype=np.complex128)
    if M.shape[0] == 2:
        return bloch_min_abs(M)
    val, x, inside = closest_to_origin(M, directions=SEESAW_DIRECTIONS)
    if inside:
        try:
            x = isotropic_vector(M)
            return complex(np.vdot(x, M @ x)), x
        except (ConvergenceError, DomainError):
            # 0 sits on the boundary within rounding; the support point is as good
            angles = 2 * np.pi * np.arange(SEESAW_DIRECTIONS) / SEESAW_DIRECTIONS
            h, vecs = support_directions(M, angles)
            x = vecs[int(np.argmin(h))]
            return complex(np.vdot(x, M @ x)), x
    return val, x


def _conditional(T, m, vecs, party):
    """Contract every party except ``party`` of the operator tensor T (rows then cols)."""
    t = T
    for k in reversed(range(m)):
        if k == party:
            continue
        # rows are axes 0..mm-1, cols mm..2mm-1 for the current tensor
        mm = t.ndim // 2
        t = np.tensordot(t, vecs[k], axes=([mm + k], [0]))
        t = np.tensordot(vecs[k].conj(), t, axes=([0], [k]))
    return t


def _seesaw_min(A, s, sweeps, tol, extrapolate=False):
    T = A.matrix.reshape(A.dims + A.dims)
    m = A.nparties
    vecs = list(s.party_states)
    val = local_value(A, s)
    used = 0
    last_gain = None
    for used in range(1, sweeps + 1):
        before = abs(val)
        for k in range(m):
            if A.dims[k] == 1:
                continue
            new_val, x = _min_abs_update(_conditional(T, m, vecs, k))
            if abs(new_val) <= abs(val):
                vecs[k] = x / np.linalg.norm(x)
                val = new_val
        gain = before - abs(val)
        if abs(val) <= tol or gain < 1e-12:
            break
        if extrapolate and last_gain and used >= 5 and gain < last_gain:
            # geometric tail: the run cannot descend more than gain * r / (1 - r)
            r = gain / last_gain
            if abs(val) - gain * r / (1 - r) > 0.5 * abs(val) and abs(val) > 1e-6:
                break
        last_gain = gain
    s = ProductState(tuple(vecs))
    return local_value(A, s), s, used


def min_abs_local(A: PartitionedOperator, seed=0, starts: int = 32, sweeps: int = 200,
                  initial: Sequence[ProductState] = (), stop_below: float = 1e-12,
                  extrapolate: bool = False) -> LocalMinimum:
    """Alternating per-party minimization of |<s|A|s>| from several starting product states.

    Each update solves the single-party problem exactly: an isotropic vector
    when 0 is in the conditional range, otherwise its point nearest to 0.
    Heuristic: the result is a local minimum, not a certified global one.

    ``extrapolate`` abandons a start once its geometrically shrinking gains
    project a limit above half its current value. This suits a zero/nonzero
    decision; the returned value is then only an upper bound on the run's limit.
    """
    rng = np.random.default_rng(seed)
    candidates = list(initial)
    best = None
    total = 0
    for j in range(starts + len(candidates)):
        s0 = candidates[j] if j < len(candidates) else random_product_state(A.dims, rng)
        val, s, used = _seesaw_min(A, s0, sweeps, stop_below, extrapolate)
        total += 1
        if best is None or abs(val) < abs(best[0]):
            best = (val, s, used)
        if abs(best[0]) <= stop_below:
            break
    val, s, used = best
    return LocalMinimum(val, s.gauge_fixed(), total, used)


def _is_hermitian(M, tol=1e-9):
    return np.linalg.norm(M - M.conj().T) <= tol * max(1.0, np.linalg.norm(M))


class HermitianInterval(NamedTuple):
    lo: float
    hi: float
    lo_state: ProductState
    hi_state: ProductState


def _seesaw_extreme(A, s, sign, sweeps):
    val = local_value(A, s).real
    for _ in range(sweeps):
        before = val
        for k in range(A.nparties):
            if A.dims[k] == 1:
                continue
            M = conditional_operator(A, s, k)
            w, v = np.linalg.eigh((M + M.conj().T) / 2)
            idx = -1 if sign > 0 else 0
            s = s.replace(k, v[:, idx])
            val = w[idx]
        if abs(val - before) < 1e-12:
            break
    return local_value(A, s).real, s


def hermitian_local_interval(A: PartitionedOperator, seed=0, starts: int = 32,
                             sweeps: int = 200) -> HermitianInterval:
    """Range [lo, hi] of the real form <s|A|s> over product states (see-saw, multistart)."""
    if not _is_hermitian(A.matrix):
        raise DomainError("hermitian_local_interval needs a Hermitian operator")
    rng = np.random.default_rng(seed)
    lo = hi = None
    for _ in range(starts):
        s0 = random_product_state(A.dims, rng)
        v, s = _seesaw_extreme(A, s0, +1, sweeps)
        if hi is None or v > hi[0]:
            hi = (v, s)
        v, s = _seesaw_extreme(A, s0, -1, sweeps)
        if lo is None or v < lo[0]:
            lo = (v, s)
    return HermitianInterval(lo[0], hi[0], lo[1].gauge_fixed(), hi[1].gauge_fixed())


def _slerp(a, b, t):
    ov = np.vdot(a, b)
    if abs(ov) > 1e-15:
        b = b * (np.conj(ov) / abs(ov))
    omega = np.arccos(min(1.0, abs(ov)))
    if omega < 1e-12:
        v = (1 - t) * a + t * b
    else:
        v = (np.sin((1 - t) * omega) * a + np.sin(t * omega) * b) / np.sin(omega)
    return v / np.linalg.norm(v)


def geodesic_path(s0: ProductState, s1: ProductState, t: float) -> ProductState:
    """Per-party great-circle interpolation with a shared parameter; product at every t."""
    return ProductState(tuple(_slerp(a, b, t) for a, b in zip(s0.party_states, s1.party_states)))


class HermitianIsotropic(NamedTuple):
    state: ProductState
    value: float
    path: str  # "endpoint", "geodesic" or "multistart"


def hermitian_local_isotropic(A: PartitionedOperator, seed=0, tol=1e-9,
                              interval: HermitianInterval = None) -> HermitianIsotropic:
    """Product state with <s|A|s> = 0 for Hermitian A whose local interval straddles 0."""
    if interval is None:
        interval = hermitian_local_interval(A, seed=seed)
    lo, hi, s_lo, s_hi = interval
    if not (lo <= tol and hi >= -tol):
        raise DomainError(f"local interval [{lo:.3e}, {hi:.3e}] does not contain 0")
    if abs(lo) <= tol:
        return HermitianIsotropic(s_lo, lo, "endpoint")
    if abs(hi) <= tol:
        return HermitianIsotropic(s_hi, hi, "endpoint")

    def f(t):
        return local_value(A, geodesic_path(s_lo, s_hi, t)).real

    try:
        t = scipy.optimize.brentq(f, 0.0, 1.0, xtol=1e-15, rtol=1e-15, maxiter=500)
        s = geodesic_path(s_lo, s_hi, t).gauge_fixed()
        v = local_value(A, s).real
        if abs(v) <= tol:
            return HermitianIsotropic(s, v, "geodesic")
    except ValueError:
        pass
    res = min_abs_local(A, seed=seed, initial=[s_lo, s_hi])
    if abs(res.value) > tol:
        raise ConvergenceError("no isotropic product state found", abs(res.value))
    return HermitianIsotropic(res.state, res.value.real, "multistart")


def _check_density(rho, d):
    rho = as_cmatrix(rho)
    if rho.shape != (d, d):
        raise DomainError(f"density matrix shape {rho.shape}, party dim {d}")
    if np.linalg.norm(rho - rho.conj().T) > 1e-10:
        raise DomainError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1) > 1e-10:
        raise DomainError("density matrix does not have unit trace")
    w = np.linalg.eigvalsh((rho + rho.conj().T) / 2)
    if w[0] < -1e-10:
        raise DomainError("density matrix is not positive semidefinite")
    return (rho + rho.conj().T) / 2


def product_density_value(A: PartitionedOperator, rhos) -> complex:
    op = A
    for k in reversed(range(A.nparties)):
        op = contract_party_density(op, k, rhos[k])
    return complex(op.matrix[0, 0])


def purify_product_value(A: PartitionedOperator, rhos: Sequence, seed=0) -> ProductState:
    """Pure product state reproducing tr(A rho_1 ⊗ ... ⊗ rho_m).

    Party by party, the mixed state is replaced by a pure state in the span of
    its eigenvectors that gives the same value on the conditional operator.
    """
    if len(rhos) != A.nparties:
        raise DomainError("one density matrix per party required")
    rhos = [_check_density(r, d) for r, d in zip(rhos, A.dims)]
    states = []
    for k in range(A.nparties):
        op = A
        for j in reversed(range(A.nparties)):
            if j == k:
                continue
            op = contract_party_density(op, j, rhos[j])
        M = op.matrix
        w, v = np.linalg.eigh(rhos[k])
        keep = w > 1e-15
        w, v = w[keep], v[:, keep]
        w = w / w.sum()
        vals = np.einsum("ij,ik,kj->j", v.conj(), M, v)
        target = np.dot(w, vals)
        hit = np.flatnonzero(np.abs(vals - target) <= 1e-13 * max(1.0, np.abs(M).max()))
        # an eigenvector that already has the right value needs no superposition
        psi = v[:, hit[0]] if hit.size else achieve_value(M, list(v.T), w, seed=seed)
        rhos[k] = np.outer(psi, psi.conj())
        states.append(psi)
    return ProductState(tuple(states)).gauge_fixed()
