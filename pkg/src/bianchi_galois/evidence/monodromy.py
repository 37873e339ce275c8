"""Monodromy increments of the second-VE integrals I_1, I_2 around closed loops."""

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from ..contour import EPS, BranchTracker, Path, adaptive_segment, circle, piece_integral_gl
from ..errors import PathError
from ..algebra import Polynomial
from ..model.second_ve import second_ve_source

# (x, C1, C2) exponents of the algebraic prefactor and multiple of mu V
_INTEGRANDS = {"I1": ((-4.25, -0.5, -0.5), 1), "I2": ((-4.25, -0.5, -0.5), 3)}


@dataclass
class MonodromyReport:
    """Increments gamma = I(end) - I(start) after continuation once around ``loop``.

    ``multiplier1``/``multiplier2`` are the ratios of continued to initial
    integrand at the base point only.  Around a root of C1 the continuation
    also sends V to (period - V), so the continued integrand is not a
    constant multiple of the original one.
    """

    loop: list
    enclosed: list
    gamma1: complex
    gamma2: complex
    error1: float
    error2: float
    multiplier1: complex
    multiplier2: complex
    settings: dict = field(default_factory=dict)

    def significant(self, factor=10.0):
        """True if some increment exceeds ``factor`` times its error bound."""
        return abs(self.gamma1) > factor * self.error1 or abs(self.gamma2) > factor * self.error2

    def below_bound(self):
        return abs(self.gamma1) <= self.error1 and abs(self.gamma2) <= self.error2

    def to_dict(self):
        d = asdict(self)
        for k in ("gamma1", "gamma2", "multiplier1", "multiplier2"):
            z = complex(getattr(self, k))
            d[k] = [z.real, z.imag]
        d["loop"] = [[complex(z).real, complex(z).imag] for z in self.loop]
        d["significant_10x"] = self.significant()
        return d


def singular_set(suite):
    """Named singular points of the integrands: 0, roots of C1, zeros of C2."""
    pts = [("0", 0j)]
    for k, r in enumerate(suite.rho):
        pts.append((f"rho{k}", complex(getattr(r, "approx", r))))
    for k, r in enumerate(np.roots(suite.C2.numeric_coeffs())):
        pts.append((f"c2_{k}", complex(r)))
    return pts


def _winding(path, z0):
    v = path.vertices - z0
    return int(round(float(np.sum(np.angle(v[1:] / v[:-1]))) / (2 * math.pi)))


def default_loops(suite, segments=64):
    """Circles of radius 1/4 of the minimal pairwise distance around 0 and each root of C1.

    Also returns a loop of the same radius enclosing nothing (centre shifted
    perpendicular to the real axis by twice the radius from the first root).
    """
    centers = [0j] + [complex(getattr(r, "approx", r)) for r in suite.rho]
    dmin = min(abs(a - b) for i, a in enumerate(centers) for b in centers[i + 1:])
    radius = dmin / 4
    loops = {"0": circle(0j, radius, segments)}
    for k, c in enumerate(centers[1:]):
        loops[f"rho{k}"] = circle(c, radius, segments)
    loops["empty"] = circle(centers[1] + 2j * radius, radius / 2, segments)
    return loops, radius


def monodromy_increments(suite, loop, candidate=None, source="printed", margin=1e-3, rtol=1e-10,
                         max_piece=None):
    """Continue I_1, I_2 once around ``loop`` from its first vertex.

    Integrands ``P(sqrt x) x^{-17/4} C1^{-1/2} C2^{-1/2} exp(k mu V)`` with
    k = 1 (I_1) and k = 3 (I_2); V = int sqrt(x)/(C2 sqrt C1) from the base
    point.  Each branch piece is integrated by adaptive Gauss-Kronrod; V
    inside the integrand is a fixed 20-point Gauss-Legendre rule from the
    piece start and its accumulated error is propagated into the bound.
    """
    if not isinstance(loop, Path):
        loop = Path(loop, closed=True)
    pts = singular_set(suite)
    d = loop.min_distance([p for _, p in pts])
    if d < margin:
        raise PathError(f"loop passes within {d:.3g} of a singular point (margin {margin})")
    cand = suite.mu_candidate(candidate)
    mu = cand.mu()
    src = second_ve_source(suite)
    coeffs = np.array([complex(c[0]) + complex(c[1]) * mu + complex(c[2]) * mu * mu
                       for c in src.coefficients(source)])[::-1]
    tr = BranchTracker(loop, [Polynomial.x(), suite.C1, suite.C2], max_piece=max_piece)

    def w_piece(i):
        return lambda z: np.exp(0.5 * tr.logs_in_piece(i, z) @ np.array([1.0, -1.0, -2.0]))

    V = [0j]
    errV = 0.0
    for i in range(tr.pieces):
        a, b = tr.z[i], tr.z[i + 1]
        v20 = piece_integral_gl(w_piece(i), a, b, 20)
        v30 = piece_integral_gl(w_piece(i), a, b, 30)
        V.append(V[-1] + v30)
        errV += abs(v30 - v20) + 50 * EPS * abs(v30)
    V = np.array(V)

    totals, errors, mults = {}, {}, {}
    for name, (ex, k) in _INTEGRANDS.items():
        total, err, absint = 0j, 0.0, 0.0
        for i in range(tr.pieces):
            wp = w_piece(i)

            def f(z, i=i, wp=wp):
                z = np.asarray(z, dtype=complex)
                lg = tr.logs_in_piece(i, z)
                Vz = V[i] + piece_integral_gl(wp, np.full(z.shape, tr.z[i]), z, 20)
                pre = np.exp(lg @ np.array(ex))
                return np.polyval(coeffs, np.exp(0.5 * lg[..., 0])) * pre * np.exp(k * mu * Vz)

            q = adaptive_segment(f, tr.z[i], tr.z[i + 1], rtol=rtol)
            total += q.value
            err += q.bound
            absint += q.abs_integral
        # perturbing V by dV scales the integrand by exp(k mu dV)
        err += abs(k * mu) * errV * absint
        totals[name], errors[name] = total, err
        dlog = tr.logs[-1] - tr.logs[0]
        mults[name] = complex(np.exp(dlog @ np.array(ex) + k * mu * (V[-1] - V[0])))
    enclosed = [n for n, p in pts if _winding(loop, p) != 0]
    settings = {"source": source, "rtol": rtol, "pieces": tr.pieces, "margin": margin,
                "mu_squared": str(cand.mu_squared), "V_error": errV, "V_period": [V[-1].real, V[-1].imag]}
    return MonodromyReport(list(loop.vertices), enclosed, totals["I1"], totals["I2"], errors["I1"],
                           errors["I2"], mults["I1"], mults["I2"], settings)


__all__ = ["MonodromyReport", "monodromy_increments", "default_loops", "singular_set"]
