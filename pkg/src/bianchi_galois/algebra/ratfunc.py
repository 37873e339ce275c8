"""Rational functions over the exact scalars."""

from fractions import Fraction

import numpy as np

from .poly import Polynomial, poly_gcd, render_poly
from .scalars import GaussianRational, QuadraticSurd, exact


class RationalFunction:
    """Normalized quotient ``num/den``: monic denominator, coprime parts.

    Instances are immutable; every constructor path normalizes.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if not isinstance(num, Polynomial):
            num = Polynomial.constant(num)
        if den is None:
            den = Polynomial.constant(1)
        elif not isinstance(den, Polynomial):
            den = Polynomial.constant(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            self.num, self.den = Polynomial(), Polynomial.constant(1)
            return
        g = poly_gcd(num, den)
        if g.degree > 0:
            num, den = num.exact_div(g), den.exact_div(g)
        lead = den.leading
        if lead != 1:
            inv = 1 / lead
            num, den = num * inv, den * inv
        self.num, self.den = num, den

    @classmethod
    def _trusted(cls, num, den):
        f = cls.__new__(cls)
        f.num, f.den = num, den
        return f

    @classmethod
    def x(cls):
        return cls._trusted(Polynomial.x(), Polynomial.constant(1))

    @classmethod
    def constant(cls, c):
        return cls(Polynomial.constant(c))

    @staticmethod
    def _lift(v):
        if isinstance(v, RationalFunction):
            return v
        if isinstance(v, Polynomial):
            return RationalFunction._trusted(v, Polynomial.constant(1))
        return RationalFunction(Polynomial.constant(exact(v)))

    def is_zero(self):
        return self.num.is_zero()

    def is_polynomial(self):
        return self.den.degree == 0

    def __eq__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other):
        try:
            o = self._lift(other)
        except TypeError:
            return NotImplemented
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction._trusted(-self.num, self.den)

    def __sub__(self, other):
        try:
            o = self._lift(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = self._lift(other)
        except TypeError:
            return NotImplemented
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return RationalFunction.constant(1) / (self ** -k)
        return RationalFunction._trusted(self.num ** k, self.den ** k)

    def derivative(self):
        n, d = self.num, self.den
        return RationalFunction(n.derivative() * d - n * d.derivative(), d * d)

    # -- evaluation ----------------------------------------------------
    def __call__(self, z):
        if isinstance(z, (int, Fraction, GaussianRational, QuadraticSurd)):
            dv = self.den(z)
            if dv == 0:
                raise ZeroDivisionError("evaluation at a pole")
            return self.num(z) / dv
        return self.evaluate(z)

    def evaluate(self, z):
        """Floating evaluation, vectorized over numpy arrays."""
        z = np.asarray(z)
        return np.polyval(self.num.numeric_coeffs(), z) / np.polyval(self.den.numeric_coeffs(), z)

    # -- rendering -----------------------------------------------------
    def __str__(self):
        return render(self)

    def __repr__(self):
        return f"RationalFunction({render(self)!r})"


def normalize(f):
    """Canonical form of ``f`` (a no-op for already built instances)."""
    return RationalFunction(f.num, f.den)


def derivative(f):
    return RationalFunction._lift(f).derivative()


def render(f):
    """Canonical string: expanded numerator and denominator, descending degree."""
    n = render_poly(f.num)
    if f.den.degree == 0:
        return n
    return f"({n})/({render_poly(f.den)})"
