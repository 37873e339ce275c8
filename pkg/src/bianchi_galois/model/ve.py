"""Variational equations along the Taub family and their closed-form solutions."""

import cmath
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..algebra import AlgebraicPoint, Polynomial, RationalFunction, rational_roots
from ..algebra.roots import deflate
from ..contour import BranchTracker, Path, piece_integral_gl
from ..errors import DegenerateCubicError, DomainError, PathError
from .physics import ModelParams

X = Polynomial.x()


def c1_poly(lam, E):
    return Polynomial([2 * E, -3, 0, 4 * lam])


def c2_poly(lam, E):
    return Polynomial([4 * E, 210, 0, 35 * lam])


@dataclass(frozen=True)
class MuCandidate:
    """A candidate value for mu^2 (mu = i sqrt(magnitude)), stored as mu^2 < 0."""

    label: str
    magnitude: Fraction

    @property
    def mu_squared(self):
        return -self.magnitude

    def mu(self, sign=1):
        return sign * 1j * float(self.magnitude) ** 0.5


@dataclass
class VESuite:
    """Exact data of the normal variational equation at fixed (lambda, E)."""

    params: ModelParams
    C1: Polynomial
    C2: Polynomial
    p: RationalFunction
    q: RationalFunction
    g: RationalFunction
    discriminant: Fraction
    rho: list
    mu_squared_candidates: list
    resolved: MuCandidate = None
    notes: list = field(default_factory=list)

    @property
    def lam(self):
        return self.params.lam

    @property
    def energy(self):
        return self.params.energy

    def singular_points(self):
        """Finite singular points 0 and the roots of C1 (numeric)."""
        pts = [0.0]
        for r in self.rho:
            pts.append(r.approx if isinstance(r, AlgebraicPoint) else complex(r))
        return pts

    def avoid_points(self):
        """Singular points plus the zeros of C2 (branch points of sqrt C2)."""
        return self.singular_points() + list(np.roots(self.C2.numeric_coeffs()))

    def mu_candidate(self, which=None):
        if which is None:
            return self.resolved or self.mu_squared_candidates[0]
        if isinstance(which, MuCandidate):
            return which
        return self.mu_squared_candidates[which]

    def g_printed(self):
        """The invariant-form coefficient as a closed expression in lambda, E."""
        lam, E = self.lam, self.energy
        num = Polynomial([5 * E * E, -222 * E, 315, 128 * E * lam, -552 * lam, 0, 128 * lam * lam])
        return RationalFunction(num, 4 * X * X * self.C1 * self.C1)


def _locate_roots(C1):
    rr = rational_roots(C1)
    if len(rr) == 3:
        return sorted(rr)
    rest = deflate(C1, rr).monic() if rr else C1.monic()
    return sorted(rr) + AlgebraicPoint.all_roots(rest)


def build_ve_suite(params):
    """Exact VE data; raises for Delta = 0 and flags lambda = 0 or E = 0."""
    if not isinstance(params, ModelParams):
        params = ModelParams(*params)
    lam, E = params.lam, params.energy
    if lam == 0 or E == 0:
        raise DomainError("the VE construction needs lambda != 0 and E != 0")
    disc = params.discriminant
    if disc == 0:
        raise DegenerateCubicError("4 E^2 lambda = 1: C1 has a repeated root")
    C1, C2 = c1_poly(lam, E), c2_poly(lam, E)
    p = RationalFunction(Polynomial([E, -3, 0, 8 * lam]), X * C1)
    q = RationalFunction(Polynomial([-E, 27, 0, -8 * lam]), X * X * C1)
    g = p * p * Fraction(1, 4) + p.derivative() * Fraction(1, 2) - q
    base = E * E * lam
    cands = [MuCandidate("486(E^2 lambda + 2450)", 486 * (base + 2450)),
             MuCandidate("486(6 E^2 lambda + 2450)", 486 * (6 * base + 2450)),
             MuCandidate("1944(E^2 lambda + 2450)", 1944 * (base + 2450))]
    return VESuite(params, C1, C2, p, q, g, disc, _locate_roots(C1), cands)


# ----------------------------------------------------------------------
# numerical evaluation along a path
# ----------------------------------------------------------------------
def _rf(f):
    return lambda z: f.evaluate(z)


class VEPath:
    """Branch-continued data of the closed forms along a declared path.

    The branch of every fractional power is fixed by the principal value at
    the path's first vertex and continued along the path.  ``n_samples``
    points equally spaced in arclength (endpoints included) are exact
    piece boundaries, and the integrals

    * ``V = int sqrt(x) / (C2 sqrt(C1)) dx`` (exponent of the closed forms)
    * ``J = int sqrt(x) / C1^{3/2} dx`` (second algebraic basis solution)

    are accumulated piece by piece with 20- and 30-point Gauss-Legendre
    rules (their difference is kept as an error estimate).
    """

    def __init__(self, suite, path, n_samples=50, margin=1e-3, fraction=0.25):
        if not isinstance(path, Path):
            path = Path(path)
        self.suite = suite
        self.path = path
        s_samples = np.linspace(0.0, path.length, n_samples)
        self.tracker = BranchTracker(path, [X, suite.C1, suite.C2], margin=0.0,
                                     fraction=fraction, breakpoints=s_samples)
        d = path.min_distance(suite.avoid_points())
        if d < margin:
            raise PathError(f"path passes within {d:.3g} of a singular point (margin {margin})")
        self.margin = margin
        self.sample_index = [self.tracker.index_of(s) for s in s_samples]
        self._accumulate()

    # multivalued building blocks -------------------------------------
    def power(self, logs, ex, e1, e2):
        """``x^ex C1^e1 C2^e2`` on the continued branch."""
        return np.exp(ex * logs[..., 0] + e1 * logs[..., 1] + e2 * logs[..., 2])

    def _accumulate(self):
        tr = self.tracker
        V = [0j]
        J = [0j]
        errV = errJ = 0.0
        for i in range(tr.pieces):
            za, zb = tr.z[i], tr.z[i + 1]

            def w(z, i=i):
                return self.power(tr.logs_in_piece(i, z), 0.5, -0.5, -1.0)

            def j(z, i=i):
                return self.power(tr.logs_in_piece(i, z), 0.5, -1.5, 0.0)

            v20, v30 = piece_integral_gl(w, za, zb, 20), piece_integral_gl(w, za, zb, 30)
            j20, j30 = piece_integral_gl(j, za, zb, 20), piece_integral_gl(j, za, zb, 30)
            V.append(V[-1] + v30)
            J.append(J[-1] + j30)
            errV += abs(v30 - v20)
            errJ += abs(j30 - j20)
        self.V = np.array(V)
        self.J = np.array(J)
        self.error = {"V": errV, "J": errJ}

    def V_in_piece(self, i, z):
        """V at points ``z`` on piece ``i`` (fixed GL rule from the piece start)."""
        tr = self.tracker
        z = np.asarray(z, dtype=complex)

        def w(t):
            return self.power(tr.logs_in_piece(i, t), 0.5, -0.5, -1.0)

        return self.V[i] + piece_integral_gl(w, np.full(z.shape, tr.z[i]), z, 20)

    @property
    def samples(self):
        return self.tracker.z[self.sample_index]

    def sample_logs(self):
        return self.tracker.logs[self.sample_index]

    def sample_V(self):
        return self.V[self.sample_index]

    def sample_J(self):
        return self.J[self.sample_index]


def _eval(f, z):
    return np.asarray(f.evaluate(z), dtype=complex)


@dataclass
class XiValues:
    z: np.ndarray
    xi: np.ndarray
    d1: np.ndarray
    d2: np.ndarray
    mu: complex


def xi_eval(suite, vepath, sign=1, mu=None):
    """``xi_{1,2} = (C1/x)^{1/4} sqrt(C2) exp(+-mu V)`` and two derivatives.

    ``mu`` defaults to ``+i sqrt(magnitude)`` of the resolved (or first)
    candidate; ``sign`` = +1 gives xi_1 and -1 gives xi_2.  Derivatives are
    exact differentiations of the closed form; only V comes from quadrature.
    """
    if mu is None:
        mu = suite.mu_candidate().mu()
    elif isinstance(mu, MuCandidate):
        mu = mu.mu()
    m = sign * mu
    z = vepath.samples
    logs = vepath.sample_logs()
    V = vepath.sample_V()
    u = vepath.power(logs, -0.25, 0.25, 0.5)
    w = vepath.power(logs, 0.5, -0.5, -1.0)
    C1, C2 = suite.C1, suite.C2
    l1 = RationalFunction(C1.derivative(), C1)
    l2 = RationalFunction(C2.derivative(), C2)
    inv_x = RationalFunction(Polynomial.constant(1), X)
    Lu = l1 * Fraction(1, 4) - inv_x * Fraction(1, 4) + l2 * Fraction(1, 2)
    Lw = inv_x * Fraction(1, 2) - l1 * Fraction(1, 2) - l2
    lu, dlu, lw = _eval(Lu, z), _eval(Lu.derivative(), z), _eval(Lw, z)
    xi = u * np.exp(m * V)
    h = lu + m * w
    dh = dlu + m * w * lw
    return XiValues(z, xi, h * xi, (dh + h * h) * xi, mu)


def psi_basis_eval(suite, vepath, mu=None):
    """The four first-VE basis solutions as (psi, zeta) with two derivatives.

    Returns a dict ``{i: (psi, psi', psi'', zeta, zeta', zeta'')}`` for
    i = 1..4 at the sample points of ``vepath``.  The relations
    ``zeta_1 = psi_1``, ``zeta_2 = psi_2``, ``zeta_{3,4} = -psi_{3,4}/2``
    are built in.
    """
    if mu is None:
        mu = suite.mu_candidate().mu()
    elif isinstance(mu, MuCandidate):
        mu = mu.mu()
    z = vepath.samples
    logs = vepath.sample_logs()
    C1, C2 = suite.C1, suite.C2
    l1 = RationalFunction(C1.derivative(), C1)
    l2 = RationalFunction(C2.derivative(), C2)
    inv_x = RationalFunction(Polynomial.constant(1), X)
    out = {}
    # psi_1 = (C1/x)^{1/2}
    p1 = vepath.power(logs, -0.5, 0.5, 0.0)
    L1 = l1 * Fraction(1, 2) - inv_x * Fraction(1, 2)
    a, da = _eval(L1, z), _eval(L1.derivative(), z)
    p1d, p1dd = a * p1, (da + a * a) * p1
    out[1] = (p1, p1d, p1dd, p1, p1d, p1dd)
    # psi_2 = psi_1 * J, J' = x^{1/2} C1^{-3/2}
    J = vepath.sample_J()
    jp = vepath.power(logs, 0.5, -1.5, 0.0)
    LJ = inv_x * Fraction(1, 2) - l1 * Fraction(3, 2)
    jpp = _eval(LJ, z) * jp
    p2 = p1 * J
    p2d = p1d * J + p1 * jp
    p2dd = p1dd * J + 2 * p1d * jp + p1 * jpp
    out[2] = (p2, p2d, p2dd, p2, p2d, p2dd)
    # psi_{3,4} = (2/3) (C2/x)^{1/2} exp(-+ mu V)
    V = vepath.sample_V()
    w = vepath.power(logs, 0.5, -0.5, -1.0)
    Lw = _eval(inv_x * Fraction(1, 2) - l1 * Fraction(1, 2) - l2, z)
    L3 = l2 * Fraction(1, 2) - inv_x * Fraction(1, 2)
    b, db = _eval(L3, z), _eval(L3.derivative(), z)
    base = (2.0 / 3.0) * vepath.power(logs, -0.5, 0.0, 0.5)
    for i, s in ((3, -1), (4, 1)):
        m = s * mu
        f = base * np.exp(m * V)
        h = b + m * w
        dh = db + m * w * Lw
        fd, fdd = h * f, (dh + h * h) * f
        out[i] = (f, fd, fdd, -f / 2, -fd / 2, -fdd / 2)
    return out


def ave_residual(suite, vepath, basis=None):
    """Max relative residual of the algebraic first-VE system per basis element."""
    basis = basis or psi_basis_eval(suite, vepath)
    lam, E = suite.lam, suite.energy
    z = vepath.samples
    C1 = suite.C1
    pt = _eval(suite.p, z)
    a_psi = _eval(RationalFunction(Polynomial([E, -18, 0, 8 * lam]), X * X * C1), z)
    a_zeta = _eval(RationalFunction(Polynomial([E, -9, 0, 8 * lam]), X * X * C1), z)
    c18 = _eval(RationalFunction(Polynomial.constant(18), X * C1), z)
    c9 = _eval(RationalFunction(Polynomial.constant(9), X * C1), z)
    out = {}
    for i, (ps, psd, psdd, ze, zed, zedd) in basis.items():
        r1 = psdd - (-pt * psd + a_psi * ps + c18 * ze)
        r2 = zedd - (-pt * zed + a_zeta * ze + c9 * ps)
        scale = np.maximum(np.abs(psdd) + np.abs(pt * psd) + np.abs(a_psi * ps) + np.abs(c18 * ze), 1e-300)
        scale2 = np.maximum(np.abs(zedd) + np.abs(pt * zed) + np.abs(a_zeta * ze) + np.abs(c9 * ps), 1e-300)
        out[i] = float(max(np.max(np.abs(r1) / scale), np.max(np.abs(r2) / scale2)))
    return out


__all__ = ["VESuite", "MuCandidate", "VEPath", "XiValues", "build_ve_suite", "c1_poly", "c2_poly",
           "xi_eval", "psi_basis_eval", "ave_residual"]
