"""Dense univariate polynomials with exact coefficients."""

import math
from fractions import Fraction
from functools import reduce

import numpy as np

from .scalars import GaussianRational, QuadraticSurd, exact, is_real, parts, render_scalar, to_complex

#: Degree of the zero polynomial.  ``-inf`` keeps ``deg(f*g) = deg f + deg g``
#: valid and compares below every integer; it is never produced by ``len - 1``.
ZERO_DEGREE = -math.inf


class Polynomial:
    """Polynomial ``sum c[k] x**k`` with exact coefficients, low degree first.

    Trailing zeros are stripped on construction, so the leading coefficient
    is nonzero unless the polynomial is zero.
    """

    __slots__ = ("_c", "_num")

    def __init__(self, coeffs=()):
        c = [exact(v) for v in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self._c = tuple(c)
        self._num = None

    @classmethod
    def _raw(cls, coeffs):
        # coeffs already exact; strip only
        p = cls.__new__(cls)
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        p._c = tuple(c)
        p._num = None
        return p

    @classmethod
    def x(cls):
        return cls._raw((Fraction(0), Fraction(1)))

    @classmethod
    def constant(cls, c):
        return cls((c,))

    @classmethod
    def from_roots(cls, roots):
        out = cls.constant(1)
        for r in roots:
            out = out * cls._raw((-exact(r), Fraction(1)))
        return out

    # -- basic queries -------------------------------------------------
    @property
    def coeffs(self):
        return self._c

    @property
    def degree(self):
        return len(self._c) - 1 if self._c else ZERO_DEGREE

    @property
    def leading(self):
        return self._c[-1] if self._c else Fraction(0)

    def is_zero(self):
        return not self._c

    def is_constant(self):
        return len(self._c) <= 1

    def is_real(self):
        return all(is_real(c) for c in self._c)

    def coeff(self, k):
        return self._c[k] if 0 <= k < len(self._c) else Fraction(0)

    def __bool__(self):
        return bool(self._c)

    def __len__(self):
        return len(self._c)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self._c == other._c
        try:
            return self._c == Polynomial.constant(other)._c
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash(self._c)

    # -- arithmetic ----------------------------------------------------
    @staticmethod
    def _lift(v):
        if isinstance(v, Polynomial):
            return v
        return Polynomial.constant(v)

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            try:
                other = Polynomial.constant(other)
            except TypeError:
                return NotImplemented
        a, b = self._c, other._c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, v in enumerate(b):
            out[k] = out[k] + v
        return Polynomial._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw([-v for v in self._c])

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            try:
                other = Polynomial.constant(other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            try:
                s = exact(other)
            except TypeError:
                return NotImplemented
            if s == 0:
                return Polynomial()
            return Polynomial._raw([v * s for v in self._c])
        a, b = self._c, other._c
        if not a or not b:
            return Polynomial()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, u in enumerate(a):
            if u == 0:
                continue
            for j, v in enumerate(b):
                out[i + j] += u * v
        return Polynomial._raw(out)

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial powers must be nonnegative integers")
        out, base = Polynomial.constant(1), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def scale(self, s):
        return self * s

    def __divmod__(self, other):
        other = self._lift(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        r = list(self._c)
        db = len(other._c) - 1
        lead = other._c[-1]
        inv = 1 / lead
        if len(r) - 1 < db:
            return Polynomial(), Polynomial._raw(r)
        q = [Fraction(0)] * (len(r) - db)
        for k in range(len(r) - 1, db - 1, -1):
            c = r[k]
            if c == 0:
                continue
            f = c * inv
            q[k - db] = f
            for j, v in enumerate(other._c):
                r[k - db + j] -= f * v
        return Polynomial._raw(q), Polynomial._raw(r[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other):
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticError("inexact polynomial division")
        return q

    def monic(self):
        if self.is_zero():
            return self
        inv = 1 / self._c[-1]
        return Polynomial._raw([v * inv for v in self._c])

    def derivative(self):
        return Polynomial._raw([k * v for k, v in enumerate(self._c)][1:])

    def compose(self, other):
        other = self._lift(other)
        out = Polynomial()
        for v in reversed(self._c):
            out = out * other + v
        return out

    def shift(self, c):
        """Return ``p(x + c)``."""
        return self.compose(Polynomial((c, 1)))

    def reversed(self, n=None):
        """Coefficients reversed relative to degree ``n`` (default: own degree)."""
        if n is None:
            n = len(self._c) - 1
        c = list(self._c) + [Fraction(0)] * max(0, n + 1 - len(self._c))
        return Polynomial._raw(c[: n + 1][::-1])

    # -- evaluation ----------------------------------------------------
    def __call__(self, z):
        """Exact Horner evaluation (exact ``z``) or floating evaluation."""
        if isinstance(z, (int, Fraction, GaussianRational, QuadraticSurd)):
            acc = Fraction(0)
            for v in reversed(self._c):
                acc = acc * z + v
            return acc
        return self.evaluate(z)

    def numeric_coeffs(self):
        """Coefficients high degree first as a numpy array (float or complex)."""
        if self._num is None:
            if self.is_real():
                arr = np.array([to_complex(c).real for c in reversed(self._c)], dtype=float)
            else:
                arr = np.array([to_complex(c) for c in reversed(self._c)], dtype=complex)
            if arr.size == 0:
                arr = np.zeros(1)
            self._num = arr
        return self._num

    def evaluate(self, z):
        return np.polyval(self.numeric_coeffs(), z)

    # -- content / rendering -------------------------------------------
    def integer_form(self):
        """(scale, integer coefficient list) with ``scale * self`` primitive over Z.

        Only for real polynomials.
        """
        if not self.is_real():
            raise ValueError("integer form needs rational coefficients")
        if self.is_zero():
            return Fraction(1), []
        den = reduce(math.lcm, (Fraction(c).denominator for c in self._c), 1)
        ints = [int(Fraction(c) * den) for c in self._c]
        g = reduce(math.gcd, ints)
        if ints[-1] < 0:
            g = -g
        return Fraction(den, g), [v // g for v in ints]

    def __repr__(self):
        return f"Polynomial({render_poly(self)!r})"

    def __str__(self):
        return render_poly(self)


def render_poly(p, var="x"):
    """Expanded rendering, descending degree, parseable by the grammar."""
    if p.is_zero():
        return "0"
    out = []
    for k in range(p.degree, -1, -1):
        c = p.coeff(k)
        if c == 0:
            continue
        if isinstance(c, QuadraticSurd):
            neg, mag = False, f"({render_scalar(c)})"
            re = im = None
        else:
            re, im = parts(c)
        if re is None:
            pass
        elif im == 0:
            neg = re < 0
            mag = render_scalar(-re if neg else re)
        elif re == 0:
            neg = im < 0
            mag = render_scalar(GaussianRational(0, -im if neg else im))
        else:
            neg = False
            mag = f"({render_scalar(c)})"
        if k == 0:
            term = mag
        else:
            mono = var if k == 1 else f"{var}^{k}"
            term = mono if mag == "1" else f"{mag}*{mono}"
        if not out:
            out.append(("-" if neg else "") + term)
        else:
            out.append((" - " if neg else " + ") + term)
    return "".join(out)


def poly_gcd(a, b):
    """Monic gcd (zero if both are zero)."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_xgcd(a, b):
    """Return (g, s, t) with ``s*a + t*b = g`` and g monic."""
    r0, r1 = a, b
    s0, s1 = Polynomial.constant(1), Polynomial()
    t0, t1 = Polynomial(), Polynomial.constant(1)
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    inv = 1 / r0.leading
    return r0 * inv, s0 * inv, t0 * inv


def poly_lcm(a, b):
    if a.is_zero() or b.is_zero():
        return Polynomial()
    return (a * b).exact_div(poly_gcd(a, b)).monic()


def squarefree_decomposition(p):
    """Yun's algorithm: monic square-free ``s_k`` with ``monic(p) = prod s_k**k``.

    Returns a dict ``{k: s_k}`` containing only nonconstant factors.
    """
    if p.degree < 1:
        return {}
    p = p.monic()
    out = {}
    dp = p.derivative()
    a = poly_gcd(p, dp)
    b = p.exact_div(a)
    c = dp.exact_div(a)
    d = c - b.derivative()
    k = 1
    while b.degree >= 1:
        a = poly_gcd(b, d)
        if a.degree >= 1:
            out[k] = a
        b = b.exact_div(a)
        c = d.exact_div(a)
        d = c - b.derivative()
        k += 1
    return out


def squarefree_part(p):
    out = Polynomial.constant(1)
    for s in squarefree_decomposition(p).values():
        out = out * s
    return out
