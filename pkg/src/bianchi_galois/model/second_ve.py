"""Source term of the second variational equation and the polynomial P(sqrt x).

Coefficients of ``P(t) = sum a_k t^k`` (``t = sqrt x``) live in Q[mu]; a
coefficient is a tuple ``(c0, c1, c2)`` meaning ``c0 + c1 mu + c2 mu^2``.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .ve import c1_poly, c2_poly

F = Fraction


def _mu(c0=0, c1=0, c2=0):
    return (F(c0), F(c1), F(c2))


def printed_coefficients(lam, E):
    """The published a_0..a_18 instantiated at (lambda, E), as Q[mu] tuples."""
    lam, E = F(lam), F(E)
    a = {
        18: _mu(F(-31850, 3) * lam ** 3),
        17: _mu(),
        16: _mu(4900 * lam ** 3),
        15: _mu(0, -560 * lam ** 2),
        14: _mu(F(104125, 2) * lam ** 2),
        13: _mu(0, F(-1960, 3) * lam ** 2),
        12: _mu((-2835 * E + 96775) * lam * lam, 0, F(-8, 3) * lam),
        11: _mu(0, -2940 * lam),
        10: _mu(1120 * lam ** 2 * E + 1771350 * lam, 0, F(64, 3) * lam),
        9: _mu(0, -344 * lam * (E + F(2975, 172))),
        8: _mu((21560 * E + 632100) * lam, 0, 2),
        7: _mu(0, F(-364, 3) * lam * E + 2520),
        6: _mu(-232 * lam * E * E + 15400 * lam + 6460650, 0, F(-4, 3) - 8),
        5: _mu(0, -1632 * E - 12180),
        4: _mu(64 * lam * E * E + 231420 * E + 1367100, 0, F(8, 3) * E),
        3: _mu(0, -32 * E * (E + 16)),
        2: _mu(1784 * E * E + 52080 * E),
        1: _mu(0, F(-16, 3) * E * E),
        0: _mu(F(-16, 3) * E * E * (E - 93)),
    }
    return [a[k] for k in range(19)]


# ----------------------------------------------------------------------
# bivariate (t, mu) polynomials as dicts {(i, j): coeff}
# ----------------------------------------------------------------------
def _badd(*ps):
    out = {}
    for p in ps:
        for k, v in p.items():
            out[k] = out.get(k, 0) + v
    return {k: v for k, v in out.items() if v}


def _bmul(p, q):
    out = {}
    for (i1, j1), v1 in p.items():
        for (i2, j2), v2 in q.items():
            k = (i1 + i2, j1 + j2)
            out[k] = out.get(k, 0) + v1 * v2
    return {k: v for k, v in out.items() if v}


def _bscale(p, s):
    return {k: v * s for k, v in p.items() if v * s}


def _in_x(coeffs):
    """Polynomial in x (low degree first) as a (t, mu) polynomial, x = t^2."""
    return {(2 * i, 0): F(c) for i, c in enumerate(coeffs) if c}


def three_term_coefficients(lam, E):
    """(A, B, C) with ``f~ = A eta^2 + B eta'^2 + C eta eta'`` (x-polynomials, low first)."""
    lam, E = F(lam), F(E)
    A = [-F(14, 3) * E, F(459, 3), 0, -F(52, 3) * lam]
    B1 = [-4 * E, 2 * E + 12, -3, -32 * lam, 4 * lam]
    B = [0] + [-F(2, 3) * c for c in B1]
    C = [F(4, 3) * E, -F(2, 3) * (14 * E + 99), 14, F(8, 3) * lam, -F(56, 3) * lam]
    return A, B, C


def expand_P(lam, E):
    """Independent expansion of ``C2^2 f~/eta^2`` under the published eta' rule.

    ``eta'/eta = (x C2' - C2 + 2 mu x^{3/2}) / (2 x C2)``.  Returns the
    coefficient list a_0..a_n in Q[mu] (tuples padded to length 3).
    Raises ArithmeticError if the result is not a polynomial in sqrt(x).
    """
    lam, E = F(lam), F(E)
    A, B, C = three_term_coefficients(lam, E)
    C2 = c2_poly(lam, E)
    c2 = [C2.coeff(k) for k in range(4)]
    dc2 = [C2.derivative().coeff(k) for k in range(3)]
    T_C2 = _in_x(c2)
    # N = x C2' - C2 + 2 mu t^3
    N = _badd(_in_x([0] + dc2), _bscale(T_C2, -1), {(3, 1): F(2)})
    # x P = x C2^2 A + (B/x) N^2 / 4 + C C2 N / 2
    B_over_x = _in_x(B[1:])
    xP = _badd(_bmul(_bmul(_in_x([0, 1]), _bmul(T_C2, T_C2)), _in_x(A)),
               _bscale(_bmul(B_over_x, _bmul(N, N)), F(1, 4)),
               _bscale(_bmul(_bmul(_in_x(C), T_C2), N), F(1, 2)))
    low = [k for k in xP if k[0] < 2]
    if low:
        raise ArithmeticError(f"expansion is not divisible by x: leftover terms {low}")
    P = {(i - 2, j): v for (i, j), v in xP.items()}
    deg = max(i for i, _ in P) if P else 0
    jmax = max(j for _, j in P) if P else 0
    if jmax > 2:
        raise ArithmeticError("mu degree exceeds 2")
    return [tuple(P.get((k, j), F(0)) for j in range(3)) for k in range(deg + 1)]


def compare_coefficients(derived, printed):
    """Per-index comparison rows ``(k, derived, printed, equal)``."""
    n = max(len(derived), len(printed))
    zero = (F(0),) * 3
    rows = []
    for k in range(n):
        d = derived[k] if k < len(derived) else zero
        p = printed[k] if k < len(printed) else zero
        rows.append((k, d, p, tuple(d) == tuple(p)))
    return rows


def render_mu(c):
    """Text for ``c0 + c1 mu + c2 mu^2``."""
    parts = []
    for v, s in zip(c, ("", "*mu", "*mu^2")):
        if v:
            parts.append(f"({v}){s}" if s else f"{v}")
    return " + ".join(parts) if parts else "0"


def mu_eval(c, mu):
    return complex(c[0]) + complex(c[1]) * mu + complex(c[2]) * mu * mu


@dataclass
class SecondVESource:
    """Printed and derived P coefficients plus numeric f~ evaluators."""

    lam: Fraction
    energy: Fraction
    printed: list
    derived: list

    def coefficients(self, source="printed"):
        if source == "printed":
            return self.printed
        if source == "derived":
            return self.derived
        raise ValueError(f"unknown coefficient source {source!r}")

    def P_values(self, sqrt_x, mu, source="printed", shift=0.0):
        """``P(sqrt x)`` at the given values of ``sqrt x`` (plus ``shift``)."""
        coeffs = [mu_eval(c, mu) for c in self.coefficients(source)]
        return np.polyval(coeffs[::-1], np.asarray(sqrt_x, dtype=complex)) + shift

    def three_term(self, x, eta, deta):
        """``f~ = A eta^2 + B eta'^2 + C eta eta'`` numerically."""
        A, B, C = three_term_coefficients(self.lam, self.energy)
        x = np.asarray(x, dtype=complex)
        ev = lambda c: np.polyval([float(v) for v in c[::-1]], x)  # noqa: E731
        return ev(A) * eta * eta + ev(B) * deta * deta + ev(C) * eta * deta

    def eta_ratio_published(self, x, sqrt_x, mu):
        """``eta'/eta`` under the published rule ``(x C2' - C2 + 2 mu x^{3/2})/(2 x C2)``."""
        C2 = c2_poly(self.lam, self.energy)
        x = np.asarray(x, dtype=complex)
        c2 = C2.evaluate(x)
        return (x * C2.derivative().evaluate(x) - c2 + 2 * mu * x * sqrt_x) / (2 * x * c2)


def second_ve_source(suite):
    """Printed coefficients, independent expansion and f~ evaluators for ``suite``."""
    lam, E = suite.lam, suite.energy
    return SecondVESource(lam, E, printed_coefficients(lam, E), expand_P(lam, E))


__all__ = ["SecondVESource", "printed_coefficients", "expand_P", "compare_coefficients",
           "three_term_coefficients", "render_mu", "mu_eval", "second_ve_source", "c1_poly"]
