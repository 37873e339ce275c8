"""Adaptive DOP853 integration of the Hamiltonian flow, vectorized over orbits.

Every orbit keeps its own time and step size; a batch only shares the loop
that advances all active orbits by one attempted step.  All combinations of
stages are written as explicit elementwise sums, so an orbit's arithmetic
does not depend on which other orbits share its batch.
"""

from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.integrate._ivp import dop853_coefficients as _dop

from ..errors import DomainError
from ..model.physics import ModelState, hamiltonian, vector_field

_A = _dop.A[:_dop.N_STAGES, :_dop.N_STAGES]
_B = _dop.B
_C = _dop.C[:_dop.N_STAGES]
_E3 = _dop.E3
_E5 = _dop.E5
_NS = _dop.N_STAGES
SAFETY, MIN_FACTOR, MAX_FACTOR = 0.9, 0.2, 10.0

FATES = ("ran-to-tmax", "escaped", "breakdown")


@dataclass
class IntegratorConfig:
    """Tolerances, horizon and escape rules for the flow."""

    rtol: float = 1e-10
    atol: float = 1e-12
    t_max: float = 1000.0
    max_step: float = 0.5
    escape_radius: float = 20.0
    floor: float = 1e-8
    max_steps: int = 2_000_000

    def __post_init__(self):
        if self.rtol <= 0 or self.atol <= 0:
            raise DomainError("tolerances must be positive")
        if self.max_step <= 0 or self.t_max < 0:
            raise DomainError("max_step must be positive and t_max nonnegative")

    def to_dict(self):
        return asdict(self)


@dataclass
class OrbitFate:
    fate: str
    time: float
    detail: str = ""


def _f(Y, lam):
    A, B, PA, PB = Y[:, 0], Y[:, 1], Y[:, 2], Y[:, 3]
    B2 = B * B
    B3 = B2 * B
    out = np.empty_like(Y)
    out[:, 0] = PB / (4 * B) - A * PA / (4 * B2)
    out[:, 1] = PA / (4 * B)
    out[:, 2] = PA * PA / (8 * B2) - 2 + 3 * A * A / (2 * B2) + 2 * lam * B2
    out[:, 3] = PA * PB / (4 * B2) - A * PA * PA / (4 * B3) - A ** 3 / B3 + 4 * lam * A * B
    return out


def _combine(coeffs, K, upto):
    """sum_j coeffs[j] K[j] for j < upto, elementwise and in fixed order."""
    acc = np.zeros_like(K[0])
    for j in range(upto):
        c = coeffs[j]
        if c != 0.0:
            acc = acc + c * K[j]
    return acc


def dop853_step(Y, F0, h, lam):
    """One DOP853 step for rows of ``Y`` with per-row steps ``h``.

    Returns (Y_new, F_new, K) with K the list of 13 stage derivatives.
    """
    hc = h[:, None]
    K = [F0]
    for s in range(1, _NS):
        K.append(_f(Y + hc * _combine(_A[s], K, s), lam))
    Yn = Y + hc * _combine(_B, K, _NS)
    Fn = _f(Yn, lam)
    K.append(Fn)
    return Yn, Fn, K


def _error_norm(K, h, scale):
    e5 = _combine(_E5, K, _NS + 1) / scale
    e3 = _combine(_E3, K, _NS + 1) / scale
    n5 = e5[:, 0] ** 2 + e5[:, 1] ** 2 + e5[:, 2] ** 2 + e5[:, 3] ** 2
    n3 = e3[:, 0] ** 2 + e3[:, 1] ** 2 + e3[:, 2] ** 2 + e3[:, 3] ** 2
    denom = n5 + 0.01 * n3
    denom = np.where(denom > 0, denom, 1.0)
    return np.abs(h) * n5 / np.sqrt(denom * 4.0)


def _initial_step(Y, F0, lam, cfg):
    """Hairer's starting step heuristic, row by row (order 8)."""
    scale = cfg.atol + np.abs(Y) * cfg.rtol
    d0 = np.sqrt(np.sum((Y / scale) ** 2, axis=1) / 4)
    d1 = np.sqrt(np.sum((F0 / scale) ** 2, axis=1) / 4)
    h0 = np.where((d0 < 1e-5) | (d1 < 1e-5), 1e-6, 0.01 * d0 / np.where(d1 > 0, d1, 1.0))
    Y1 = Y + h0[:, None] * F0
    F1 = _f(Y1, lam)
    d2 = np.sqrt(np.sum(((F1 - F0) / scale) ** 2, axis=1) / 4) / h0
    big = np.maximum(d1, d2)
    h1 = np.where(big <= 1e-15, np.maximum(1e-6, h0 * 1e-3), (0.01 / np.where(big > 0, big, 1.0)) ** (1 / 8))
    return np.minimum(np.minimum(100 * h0, h1), cfg.max_step)


@dataclass
class BatchResult:
    """Per-orbit output of :func:`integrate_batch`."""

    fates: list
    final: np.ndarray
    t_final: np.ndarray
    drift: np.ndarray
    brackets: list
    steps: list = None
    n_steps: np.ndarray = None


def integrate_batch(Y0, lam, cfg=None, record=False, brackets=True, t_end=None, direction=1.0):
    """Integrate rows of ``Y0`` (states (A, B, P_A, P_B)) until fate or ``t_end``.

    ``brackets`` collects accepted steps over which P_B changes sign from
    negative to nonnegative, as (orbit, t0, y0, h).  ``record`` keeps every
    accepted step (t, y) per orbit.  ``direction = -1`` integrates backward.
    """
    cfg = cfg or IntegratorConfig()
    lam = float(lam)
    Y = np.array(Y0, dtype=float).reshape(-1, 4)
    n = Y.shape[0]
    t_end = cfg.t_max if t_end is None else float(t_end)
    t = np.zeros(n)
    fates = [None] * n
    H0 = hamiltonian(Y, lam)
    drift = np.zeros(n)
    steps = [[(0.0, Y[i].copy())] for i in range(n)] if record else None
    found = []
    nsteps = np.zeros(n, dtype=int)
    active = np.arange(n)
    for i in range(n):
        if Y[i, 1] <= cfg.floor or Y[i, 0] <= cfg.floor:
            fates[i] = OrbitFate("breakdown", 0.0, "initial state below floor")
    active = np.array([i for i in active if fates[i] is None], dtype=int)
    if t_end == 0 or active.size == 0:
        for i in active:
            fates[i] = OrbitFate("ran-to-tmax", 0.0)
        return BatchResult(fates, Y, t, drift, found, steps, nsteps)
    F = _f(Y, lam)
    h = np.zeros(n)
    h[active] = _initial_step(Y[active], F[active], lam, cfg)
    while active.size:
        Ya, Fa, ha = Y[active], F[active], h[active]
        ha = np.minimum(ha, t_end - t[active])
        with np.errstate(all="ignore"):
            Yn, Fn, K = dop853_step(Ya, Fa, ha * direction, lam)
            scale = cfg.atol + np.maximum(np.abs(Ya), np.abs(Yn)) * cfg.rtol
            err = _error_norm(K, ha, scale)
        ok = np.isfinite(err) & (err <= 1.0)
        with np.errstate(all="ignore"):
            fac = np.where(err == 0, MAX_FACTOR,
                           np.minimum(MAX_FACTOR, SAFETY * np.where(np.isfinite(err), err, 1e300) ** (-1 / 8)))
        fac = np.where(ok, fac, np.maximum(MIN_FACTOR, np.minimum(fac, 1.0)))
        new_h = np.minimum(ha * fac, cfg.max_step)
        still = []
        for k, i in enumerate(active):
            if not ok[k]:
                h[i] = new_h[k]
                if h[i] < 1e-14 * max(1.0, abs(t[i])):
                    fates[i] = OrbitFate("breakdown", float(t[i]), "step size underflow")
                    continue
                still.append(i)
                continue
            y0, y1 = Ya[k], Yn[k]
            if brackets and y0[3] < 0.0 <= y1[3]:
                found.append((int(i), float(t[i]), y0.copy(), float(ha[k])))
            t_new = t[i] + ha[k]
            nsteps[i] += 1
            Y[i], F[i], t[i], h[i] = y1, Fn[k], t_new, new_h[k]
            if record:
                steps[i].append((float(t_new), y1.copy()))
            if not np.all(np.isfinite(y1)):
                fates[i] = OrbitFate("breakdown", float(t_new), "non-finite state")
                continue
            if y1[0] <= cfg.floor or y1[1] <= cfg.floor:
                fates[i] = OrbitFate("breakdown", float(t_new), "scale factor below floor")
                continue
            if np.max(np.abs(y1)) > cfg.escape_radius:
                fates[i] = OrbitFate("escaped", float(t_new))
                continue
            drift[i] = max(drift[i], abs(float(hamiltonian(y1, lam)) - float(H0[i])))
            if t_new >= t_end:
                fates[i] = OrbitFate("ran-to-tmax", float(t_new))
                continue
            if nsteps[i] >= cfg.max_steps:
                fates[i] = OrbitFate("breakdown", float(t_new), "step budget exhausted")
                continue
            still.append(i)
        active = np.array(still, dtype=int)
    return BatchResult(fates, Y, t, drift, found, steps, nsteps)


# ----------------------------------------------------------------------
# single orbits and crossings
# ----------------------------------------------------------------------
@dataclass
class Trajectory:
    """Accepted steps of one orbit; :meth:`at` re-steps from the nearest step start."""

    lam: float
    t: np.ndarray
    y: np.ndarray
    fate: OrbitFate
    drift: float
    config: IntegratorConfig = field(default_factory=IntegratorConfig)

    def at(self, tq):
        """State at time ``tq`` within the run."""
        if not (self.t[0] <= tq <= self.t[-1]):
            raise DomainError("time outside the integrated interval")
        i = int(np.searchsorted(self.t, tq, side="right") - 1)
        i = min(i, len(self.t) - 1)
        tau = tq - self.t[i]
        if tau == 0:
            return self.y[i].copy()
        return restep(self.y[i], tau, self.lam)

    def states(self):
        return [ModelState.from_array(v) for v in self.y]


def restep(y0, tau, lam):
    """One DOP853 step of length ``tau`` from ``y0``."""
    Y = np.asarray(y0, dtype=float).reshape(1, 4)
    Yn, _, _ = dop853_step(Y, _f(Y, float(lam)), np.array([float(tau)]), float(lam))
    return Yn[0]


def integrate_orbit(state0, lam, config=None, t_end=None, direction=1.0):
    """Integrate one orbit and keep every accepted step."""
    cfg = config or IntegratorConfig()
    y0 = state0.as_array() if isinstance(state0, ModelState) else np.asarray(state0, dtype=float)
    if y0[1] == 0:
        raise DomainError("B = 0 is outside the domain of the Hamiltonian")
    res = integrate_batch(y0[None, :], lam, cfg, record=True, brackets=False, t_end=t_end,
                          direction=direction)
    ts = np.array([s[0] for s in res.steps[0]])
    ys = np.array([s[1] for s in res.steps[0]])
    return Trajectory(float(lam), ts, ys, res.fates[0], float(res.drift[0]), cfg)


@dataclass
class SectionRecord:
    ic_index: int
    crossing_index: int
    t: float
    A: float
    P_A: float
    B: float
    P_B: float = 0.0
    PB_dot: float = 0.0


def refine_crossing(y0, t0, h, lam, tol=1e-12, max_iter=60):
    """Locate P_B = 0 inside the step (t0, t0 + h) by Newton on re-steps.

    Returns (t, y) with y the re-stepped state, or None if it did not converge.
    """
    lam = float(lam)
    lo, hi = 0.0, h
    p_lo = y0[3]
    y_hi = restep(y0, h, lam)
    p_hi = y_hi[3]
    if p_hi == 0.0:
        return t0 + h, y_hi
    tau = h * p_lo / (p_lo - p_hi)
    for _ in range(max_iter):
        y = restep(y0, tau, lam)
        p = y[3]
        if abs(p) <= tol:
            return t0 + tau, y
        if p < 0:
            lo = tau
        else:
            hi = tau
        dp = _f(y[None, :], lam)[0, 3]
        nxt = tau - p / dp if dp != 0 else 0.5 * (lo + hi)
        if not (lo < nxt < hi):
            nxt = 0.5 * (lo + hi)
        if nxt == tau:
            break
        tau = nxt
    y = restep(y0, tau, lam)
    return (t0 + tau, y) if abs(y[3]) <= tol else None


def crossings_from_brackets(brackets, lam, tangential=1e-10, tol=1e-12):
    """Refined section records (per orbit, ordered in time) and ambiguous brackets."""
    per = {}
    ambiguous = []
    for i, t0, y0, h in brackets:
        r = refine_crossing(y0, t0, h, lam, tol)
        if r is None:
            ambiguous.append((i, t0, "refinement did not converge"))
            continue
        tc, yc = r
        pbdot = float(vector_field(yc, float(lam))[3])
        if not pbdot > tangential:
            ambiguous.append((i, tc, "tangential crossing"))
            continue
        per.setdefault(i, []).append((tc, yc, pbdot))
    records = []
    for i in sorted(per):
        for k, (tc, yc, pbdot) in enumerate(sorted(per[i], key=lambda r: r[0])):
            records.append(SectionRecord(i, k, float(tc), float(yc[0]), float(yc[2]), float(yc[1]),
                                         float(yc[3]), pbdot))
    return records, ambiguous


def detect_crossings(trajectory, config=None, ic_index=0):
    """Section records P_B = 0, P_B' > 0 of a stored trajectory."""
    br = []
    for k in range(len(trajectory.t) - 1):
        y0, y1 = trajectory.y[k], trajectory.y[k + 1]
        if y0[3] < 0.0 <= y1[3]:
            br.append((ic_index, float(trajectory.t[k]), y0, float(trajectory.t[k + 1] - trajectory.t[k])))
    records, _ = crossings_from_brackets(br, trajectory.lam)
    return records


def energy_drift(trajectory):
    H = hamiltonian(trajectory.y, trajectory.lam)
    return float(np.max(np.abs(H - H[0])))


__all__ = ["IntegratorConfig", "OrbitFate", "Trajectory", "SectionRecord", "BatchResult", "FATES",
           "integrate_batch", "integrate_orbit", "detect_crossings", "refine_crossing",
           "crossings_from_brackets", "restep", "dop853_step", "energy_drift"]

