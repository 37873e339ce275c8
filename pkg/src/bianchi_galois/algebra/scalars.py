"""Exact scalars: rationals with an optional adjoined imaginary unit.

Real values are kept as plain :class:`fractions.Fraction`; only values with a
nonzero imaginary part are wrapped in :class:`GaussianRational`.  Every
arithmetic result passes through :func:`exact` so the representation stays
canonical.
"""

from fractions import Fraction
from numbers import Rational


def _frac(v):
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (int, Rational)):
        return Fraction(v)
    raise TypeError(f"not an exact rational: {v!r}")


class GaussianRational:
    """Exact number ``real + imag*i`` with rational parts."""

    __slots__ = ("real", "imag")

    def __init__(self, real=0, imag=0):
        self.real = _frac(real)
        self.imag = _frac(imag)

    @staticmethod
    def _coerce(v):
        if isinstance(v, GaussianRational):
            return v.real, v.imag
        if isinstance(v, (int, Rational)):
            return Fraction(v), Fraction(0)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return exact_pair(self.real + o[0], self.imag + o[1])

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return exact_pair(self.real - o[0], self.imag - o[1])

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return exact_pair(o[0] - self.real, o[1] - self.imag)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.real, self.imag
        c, d = o
        return exact_pair(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        c, d = o
        n = c * c + d * d
        if n == 0:
            raise ZeroDivisionError("division by zero")
        a, b = self.real, self.imag
        return exact_pair((a * c + b * d) / n, (b * c - a * d) / n)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(*o) / self

    def __neg__(self):
        return GaussianRational(-self.real, -self.imag)

    def __pos__(self):
        return self

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return 1 / (self ** -k)
        out, base = Fraction(1), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.real == o[0] and self.imag == o[1]

    def __hash__(self):
        if self.imag == 0:
            return hash(self.real)
        return hash((self.real, self.imag))

    def __complex__(self):
        return complex(float(self.real), float(self.imag))

    def conjugate(self):
        return exact_pair(self.real, -self.imag)

    def __repr__(self):
        return f"GaussianRational({self.real}, {self.imag})"

    def __str__(self):
        return render_scalar(self)


def _squarefree_kernel(n):
    """(k, m) with n = k * m**2 and k square-free (sign kept in k)."""
    sign = -1 if n < 0 else 1
    n = abs(n)
    m = 1
    k = 1
    p = 2
    while p * p <= n:
        while n % (p * p) == 0:
            n //= p * p
            m *= p
        if n % p == 0:
            n //= p
            k *= p
        p += 1 if p == 2 else 2
    return sign * k * n, m


class MixedSurdError(TypeError):
    """Operands live in different quadratic fields."""


class QuadraticSurd:
    """Exact element ``a + c*sqrt(D)`` of Q(sqrt(D)), D a square-free integer.

    ``D`` is never 0 or 1; ``D = -1`` is represented by
    :class:`GaussianRational` instead.  Results with ``c = 0`` collapse to
    plain rationals.
    """

    __slots__ = ("a", "c", "D")

    def __init__(self, a, c, D):
        self.a, self.c, self.D = Fraction(a), Fraction(c), int(D)

    @classmethod
    def sqrt_of(cls, q):
        """``sqrt(q)`` for a rational q that is not a rational square."""
        q = Fraction(q)
        k, m = _squarefree_kernel(q.numerator * q.denominator)
        coef = Fraction(m, q.denominator)
        return make_surd(Fraction(0), coef, k)

    def _co(self, o):
        if isinstance(o, QuadraticSurd):
            if o.D != self.D:
                raise MixedSurdError(f"sqrt({self.D}) and sqrt({o.D})")
            return o.a, o.c
        if isinstance(o, GaussianRational):
            if o.imag != 0:
                raise MixedSurdError("Gaussian and quadratic surd")
            return o.real, Fraction(0)
        if isinstance(o, (int, Rational)):
            return Fraction(o), Fraction(0)
        return None

    def __add__(self, o):
        x = self._co(o)
        if x is None:
            return NotImplemented
        return make_surd(self.a + x[0], self.c + x[1], self.D)

    __radd__ = __add__

    def __sub__(self, o):
        x = self._co(o)
        if x is None:
            return NotImplemented
        return make_surd(self.a - x[0], self.c - x[1], self.D)

    def __rsub__(self, o):
        x = self._co(o)
        if x is None:
            return NotImplemented
        return make_surd(x[0] - self.a, x[1] - self.c, self.D)

    def __mul__(self, o):
        x = self._co(o)
        if x is None:
            return NotImplemented
        a, c = x
        return make_surd(self.a * a + self.c * c * self.D, self.a * c + self.c * a, self.D)

    __rmul__ = __mul__

    def inverse(self):
        n = self.a * self.a - self.c * self.c * self.D
        return make_surd(self.a / n, -self.c / n, self.D)

    def __truediv__(self, o):
        x = self._co(o)
        if x is None:
            return NotImplemented
        return self * QuadraticSurd(x[0], x[1], self.D).inverse() if x[1] else \
            make_surd(self.a / x[0], self.c / x[0], self.D)

    def __rtruediv__(self, o):
        x = self._co(o)
        if x is None:
            return NotImplemented
        return self.inverse() * x[0]

    def __neg__(self):
        return QuadraticSurd(-self.a, -self.c, self.D)

    def __pos__(self):
        return self

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** -k
        out, base = Fraction(1), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, o):
        if isinstance(o, QuadraticSurd):
            return (self.a, self.c, self.D) == (o.a, o.c, o.D)
        if isinstance(o, (int, Rational, GaussianRational)):
            return False  # c != 0 by construction
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.c, self.D))

    def __complex__(self):
        import cmath
        return float(self.a) + float(self.c) * cmath.sqrt(self.D)

    def __repr__(self):
        return f"QuadraticSurd({self.a}, {self.c}, {self.D})"

    def __str__(self):
        return render_scalar(self)


def make_surd(a, c, D):
    if c == 0:
        return Fraction(a)
    if D == -1:
        return GaussianRational(a, c)
    return QuadraticSurd(a, c, D)


def exact_pair(re, im):
    """Canonical exact scalar from rational parts."""
    if im == 0:
        return Fraction(re)
    return GaussianRational(re, im)


def exact(v):
    """Coerce ``v`` to the canonical exact representation."""
    if isinstance(v, QuadraticSurd):
        return v
    if isinstance(v, GaussianRational):
        return exact_pair(v.real, v.imag)
    if isinstance(v, (int, Rational)):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    raise TypeError(f"cannot represent {v!r} exactly")


def parts(v):
    """(real, imag) rational parts of an exact scalar."""
    if isinstance(v, GaussianRational):
        return v.real, v.imag
    return Fraction(v), Fraction(0)


def is_real(v):
    if isinstance(v, QuadraticSurd):
        return v.D > 0
    return not isinstance(v, GaussianRational) or v.imag == 0


def to_complex(v):
    if isinstance(v, QuadraticSurd):
        return complex(v)
    re, im = parts(v)
    return complex(float(re), float(im))


def _render_frac(q):
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def render_scalar(v):
    """Text accepted back by the expression parser (surds render as sqrt(D))."""
    if isinstance(v, QuadraticSurd):
        cs = "" if v.c == 1 else ("-" if v.c == -1 else f"{_render_frac(v.c)}*")
        sq = f"{cs}sqrt({v.D})"
        if v.a == 0:
            return sq
        return f"{_render_frac(v.a)}{'' if sq.startswith('-') else '+'}{sq}"
    re, im = parts(v)
    if im == 0:
        return _render_frac(re)
    if im == 1:
        ims = "i"
    elif im == -1:
        ims = "-i"
    else:
        ims = f"{_render_frac(im)}*i"
    if re == 0:
        return ims
    sign = "-" if im < 0 else "+"
    ims = ims.lstrip("-")
    return f"{_render_frac(re)}{sign}{ims}"
