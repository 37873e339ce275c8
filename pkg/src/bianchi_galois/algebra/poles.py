"""Singular-point analysis: pole sites, Laurent data, local exponents."""

import math
from dataclasses import dataclass
from fractions import Fraction

from ..errors import UnsupportedOrderError
from .poly import Polynomial, squarefree_decomposition
from .ratfunc import RationalFunction
from .roots import (AlgebraicNumber, AlgebraicPoint, ZeroDivisorSplit, deflate,
                    rational_roots, split_by_rational_value)
from .scalars import GaussianRational, QuadraticSurd, is_real, parts, render_scalar, to_complex


class _Infinity:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "Infinity"

    __str__ = __repr__

    def __reduce__(self):
        return (_Infinity, ())


Infinity = _Infinity()


@dataclass(frozen=True, eq=False)
class PoleSite:
    """A singular point of a rational function.

    ``location`` is an exact scalar, an :class:`AlgebraicPoint` or
    :data:`Infinity`.  ``b`` is the coefficient of the order-2 Laurent term
    (zero at simple poles, ``None`` when the order exceeds 2 at a finite
    point).  ``residue`` is filled for simple poles.  ``factor`` is the
    square-free polynomial whose roots share this site's data (``x - c`` for
    a rational point).
    """

    location: object
    order: object
    b: object
    factor: Polynomial = None
    residue: object = None

    @property
    def is_infinity(self):
        return self.location is Infinity

    @property
    def is_algebraic(self):
        return isinstance(self.location, AlgebraicPoint)

    @property
    def approx(self):
        if self.is_infinity:
            return complex("inf")
        if self.is_algebraic:
            return self.location.approx
        return to_complex(self.location)

    def label(self):
        if self.is_infinity:
            return "infinity"
        if self.is_algebraic:
            return f"root{self.location.index}[{self.factor}]"
        return render_scalar(self.location)

    def __eq__(self, other):
        if not isinstance(other, PoleSite):
            return NotImplemented
        return self.label() == other.label() and self.order == other.order

    def __hash__(self):
        return hash((self.label(), self.order))


def _x_minus(c):
    return Polynomial((-c, 1))


def _value_at_class(poly, factor):
    """``poly`` mod ``factor`` as an exact scalar (linear factor) or class value."""
    if factor.degree == 1:
        return poly(-factor.coeff(0))
    return AlgebraicNumber(poly, factor)


def _order2_and_residue(f, factor, k):
    """b (order-2 coefficient) and residue data at roots of ``factor`` of multiplicity k."""
    rest = f.den.exact_div(factor ** k)
    fp = factor.derivative()
    if k == 1:
        num = _value_at_class(f.num, factor)
        den = _value_at_class(fp * rest, factor)
        return Fraction(0), _divide(num, den)
    if k == 2:
        num = _value_at_class(f.num, factor)
        den = _value_at_class(fp * fp * rest, factor)
        return _divide(num, den), None
    return None, None


def _divide(a, b):
    if isinstance(b, AlgebraicNumber):
        if not isinstance(a, AlgebraicNumber):
            a = AlgebraicNumber(Polynomial.constant(a), b.modulus)
        return a / b
    if isinstance(a, AlgebraicNumber):
        return a / b
    return a / b


def _settle(v):
    if isinstance(v, AlgebraicNumber) and v.is_rational():
        return v.rational_value()
    return v


def _site_sort_key(s):
    if s.is_infinity:
        return (2, 0, 0, "")
    if s.is_algebraic:
        z = s.location.approx
        return (1, z.real, z.imag, str(s.factor))
    re, im = parts(s.location)
    return (0, float(re), float(im), "")


def _finite_sites(f):
    sites = []
    for k, s in sorted(squarefree_decomposition(f.den).items()):
        rr = rational_roots(s)
        for c in rr:
            lin = _x_minus(c)
            b, res = _order2_and_residue(f, lin, k)
            sites.append(PoleSite(c, k, b, lin, res))
        rest = deflate(s, rr).monic() if rr else s
        if rest.degree < 1:
            continue
        pending = [rest]
        while pending:
            h = pending.pop()
            try:
                b, res = _order2_and_residue(f, h, k)
            except ZeroDivisorSplit as z:
                g = z.factor.monic()
                pending += [g, h.exact_div(g).monic()]
                continue
            key = b if k == 2 else res
            pieces = [(h, key)]
            if isinstance(key, AlgebraicNumber):
                pieces = []
                for fac, val in split_by_rational_value(key):
                    pieces.append((fac, val if val is not None else AlgebraicNumber(key.rep, fac)))
            for fac, val in pieces:
                val = _settle(val)
                for pt in AlgebraicPoint.all_roots(fac):
                    if k == 2:
                        sites.append(PoleSite(pt, k, val, fac, None))
                    elif k == 1:
                        sites.append(PoleSite(pt, k, Fraction(0), fac, val))
                    else:
                        sites.append(PoleSite(pt, k, None, fac, None))
    return sites


def order_at_infinity(f):
    if f.is_zero():
        return math.inf
    return f.den.degree - f.num.degree


def coefficient_at_infinity(f, power=-2):
    """Coefficient of ``x**power`` in the expansion of ``f`` at infinity."""
    if f.is_zero():
        return Fraction(0)
    m = order_at_infinity(f)
    idx = -power - m
    if idx < 0:
        return Fraction(0)
    nrev = f.num.reversed()
    drev = f.den.reversed()
    # power series division nrev / drev up to index idx
    q = []
    d0inv = 1 / drev.coeff(0)
    for j in range(idx + 1):
        acc = nrev.coeff(j)
        for i in range(j):
            acc = acc - q[i] * drev.coeff(j - i)
        q.append(acc * d0inv)
    return q[idx]


def singular_profile(f):
    """All poles of ``f`` (finite and at infinity) with order and b data.

    Finite orders come from the square-free factorization of the
    denominator; rational points are exact, the rest are
    :class:`AlgebraicPoint` instances grouped by a defining factor on which
    the Laurent datum is constant.  The final entry is always Infinity with
    order ``deg(den) - deg(num)`` (``math.inf`` for the zero function).
    """
    sites = _finite_sites(f)
    sites.sort(key=_site_sort_key)
    m = order_at_infinity(f)
    b_inf = coefficient_at_infinity(f, -2) if m != math.inf else Fraction(0)
    res_inf = None
    if m == 1:
        res_inf = coefficient_at_infinity(f, -1)
    sites.append(PoleSite(Infinity, m, b_inf, None, res_inf))
    return sites


def laurent_coefficient(f, site):
    """Order-2 coefficient at a double pole, residue at a simple pole, b at infinity."""
    if site.is_infinity:
        return coefficient_at_infinity(f, -2)
    if site.order > 2:
        raise UnsupportedOrderError(
            f"pole of order {site.order} at {site.label()}: Laurent data limited to order <= 2")
    if site.is_algebraic:
        b, res = _order2_and_residue(f, site.factor, site.order)
    else:
        b, res = _order2_and_residue(f, _x_minus(site.location), site.order)
    return _settle(res if site.order == 1 else b)


# ----------------------------------------------------------------------
# Local exponents
# ----------------------------------------------------------------------
def _isqrt_exact(n):
    if n < 0:
        return None
    r = math.isqrt(n)
    return r if r * r == n else None


def rational_sqrt(q):
    """Exact square root of a rational (or Gaussian rational), or None."""
    q_re, q_im = parts(q)
    if q_im == 0:
        if q_re < 0:
            s = rational_sqrt(-q_re)
            return None if s is None else GaussianRational(0, s)
        a = _isqrt_exact(q_re.numerator)
        b = _isqrt_exact(q_re.denominator)
        if a is None or b is None:
            return None
        return Fraction(a, b)
    # (u + v i)^2 = a + b i  ->  u^2 = (a + |q|)/2
    norm = q_re * q_re + q_im * q_im
    mod = rational_sqrt(norm)
    if mod is None or not is_real(mod):
        return None
    u = rational_sqrt((q_re + mod) / 2)
    if u is None or not is_real(u) or u == 0:
        return None
    v = q_im / (2 * u)
    return GaussianRational(u, v)


class AlgebraicSurd:
    """``a + c*sqrt(D)`` with ``D`` an :class:`AlgebraicNumber` (class-wide radicand).

    Supports only the ring operations needed to check exponent relations.
    """

    __slots__ = ("a", "c", "D")

    def __init__(self, a, c, D):
        self.a, self.c, self.D = a, c, D

    def __add__(self, o):
        if isinstance(o, AlgebraicSurd):
            return _asurd(self.a + o.a, self.c + o.c, self.D)
        return _asurd(self.a + o, self.c, self.D)

    __radd__ = __add__

    def __mul__(self, o):
        if isinstance(o, AlgebraicSurd):
            return _asurd(self.a * o.a + self.D * (self.c * o.c), self.a * o.c + o.a * self.c, self.D)
        return _asurd(self.a * o, self.c * o, self.D)

    __rmul__ = __mul__

    def __neg__(self):
        return AlgebraicSurd(-self.a, -self.c, self.D)

    def __repr__(self):
        return f"({self.a} + {self.c}*sqrt({self.D}))"


def _asurd(a, c, D):
    if c == 0:
        return _settle(a)
    return AlgebraicSurd(a, c, D)


@dataclass(frozen=True)
class AlphaPair:
    plus: object
    minus: object
    rational: bool
    sqrt_disc: object


def sqrt_discriminant(b):
    """``sqrt(1 + 4b)``: exact scalar, :class:`QuadraticSurd`, or :class:`AlgebraicSurd`."""
    if isinstance(b, AlgebraicNumber):
        if b.is_rational():
            b = b.rational_value()
        else:
            return AlgebraicSurd(Fraction(0), Fraction(1), 1 + 4 * b)
    d = 1 + 4 * b
    s = rational_sqrt(d)
    if s is not None:
        return s
    if is_real(d):
        return QuadraticSurd.sqrt_of(d)
    return AlgebraicSurd(Fraction(0), Fraction(1), d)


def in_base_field(v):
    """True for rationals and Gaussian rationals."""
    return isinstance(v, (Fraction, GaussianRational, int))


def alpha_exponents(b):
    """Local exponents ``(1 +- sqrt(1+4b))/2`` with an exact rationality flag.

    ``rational`` is True when both exponents lie in the coefficient field of
    ``b`` (Q, or Q(i) for Gaussian data); for an algebraic ``b`` of degree
    > 1 it is always False.
    """
    s = sqrt_discriminant(b)
    half = Fraction(1, 2)
    if isinstance(s, AlgebraicSurd):
        return AlphaPair(AlgebraicSurd(half, half, s.D), AlgebraicSurd(half, -half, s.D), False, s)
    plus, minus = half + half * s, half - half * s
    flag = in_base_field(plus) and (is_real(plus) or not is_real(b))
    return AlphaPair(plus, minus, flag, s)
