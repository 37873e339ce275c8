"""Rational-root extraction, certified root isolation and algebraic numbers.

Numeric root approximations come from :func:`mpmath.polyroots`; everything
that decides a case (rationality, equality of points) is then confirmed
exactly or by an explicit inclusion certificate.
"""

import math
from fractions import Fraction
from functools import reduce

import mpmath

from .poly import Polynomial, poly_gcd, poly_xgcd, squarefree_part
from .scalars import GaussianRational, exact_pair, is_real, parts


def _gauss_int_form(p):
    """Scale p so all coefficients are Gaussian integers; return int pairs."""
    den = 1
    for c in p.coeffs:
        re, im = parts(c)
        den = math.lcm(den, re.denominator, im.denominator)
    out = []
    for c in p.coeffs:
        re, im = parts(c)
        out.append((int(re * den), int(im * den)))
    return out


def approximate_roots(p, dps=50):
    """All complex roots of ``p`` (with multiplicity) as mpmath numbers."""
    if p.degree < 1:
        return []
    coeffs = []
    for c in reversed(p.coeffs):
        re, im = parts(c)
        coeffs.append(mpmath.mpc(mpmath.mpf(re.numerator) / re.denominator,
                                 mpmath.mpf(im.numerator) / im.denominator))
    with mpmath.workdps(dps):
        if p.degree == 1:
            return [-coeffs[1] / coeffs[0]]
        steps = 200
        while True:
            try:
                return list(mpmath.polyroots(coeffs, maxsteps=steps, extraprec=4 * dps))
            except mpmath.libmp.libhyper.NoConvergence:
                steps *= 4
                if steps > 50000:
                    raise


def _digits(p):
    big = max((abs(a) + abs(b) for a, b in _gauss_int_form(p)), default=1)
    return len(str(big))


def rational_roots(p):
    """Distinct roots of ``p`` lying in the coefficient field (Q or Q(i)).

    Candidates are ``round(a_n * z) / a_n`` for numeric roots ``z`` of the
    square-free part with integral coefficients; every candidate is
    confirmed by exact evaluation.
    """
    if p.degree < 1:
        return []
    sf = squarefree_part(p)
    ints = _gauss_int_form(sf)
    an = GaussianRational(*ints[-1]) if ints[-1][1] else Fraction(ints[-1][0])
    an_c = complex(*ints[-1])
    dps = 30 + 2 * _digits(sf)
    real_field = sf.is_real()
    found = []
    for z in approximate_roots(sf, dps):
        w = complex(z) * an_c
        # exact candidate from the high-precision value
        with mpmath.workdps(dps):
            wz = z * mpmath.mpc(ints[-1][0], ints[-1][1])
            gr, gi = int(mpmath.nint(wz.real)), int(mpmath.nint(wz.imag))
        if real_field:
            gi_candidates = [0] if abs(w.imag) < 0.5 + 1e-9 else []
        else:
            gi_candidates = [gi]
        for gi_c in gi_candidates:
            cand = exact_pair(Fraction(gr), Fraction(gi_c)) / an
            if real_field and not is_real(cand):
                continue
            if sf(cand) == 0 and cand not in found:
                found.append(cand)
    return sorted(found, key=lambda c: (parts(c)[0], parts(c)[1]))


def deflate(p, roots):
    q = p
    for r in roots:
        q = q.exact_div(Polynomial((-r, 1)))
    return q


# ----------------------------------------------------------------------
# Algebraic numbers in K[t]/(f)
# ----------------------------------------------------------------------
class ZeroDivisorSplit(ArithmeticError):
    """Inversion hit a zero divisor; ``factor`` is a nontrivial factor of f."""

    def __init__(self, factor):
        super().__init__("zero divisor in K[t]/(f)")
        self.factor = factor


class AlgebraicNumber:
    """Element ``rep(t)`` of ``K[t]/(modulus)`` for square-free monic modulus.

    Represents the same polynomial expression evaluated at every root of the
    modulus, i.e. a whole conjugate class at once.
    """

    __slots__ = ("rep", "modulus")

    def __init__(self, rep, modulus):
        if not isinstance(rep, Polynomial):
            rep = Polynomial.constant(rep)
        self.modulus = modulus
        self.rep = rep % modulus

    def _wrap(self, rep):
        return AlgebraicNumber(rep, self.modulus)

    def _other(self, o):
        if isinstance(o, AlgebraicNumber):
            if o.modulus != self.modulus:
                raise ValueError("moduli differ")
            return o.rep
        return Polynomial.constant(o)

    def __add__(self, o):
        return self._wrap(self.rep + self._other(o))

    __radd__ = __add__

    def __sub__(self, o):
        return self._wrap(self.rep - self._other(o))

    def __rsub__(self, o):
        return self._wrap(self._other(o) - self.rep)

    def __mul__(self, o):
        return self._wrap(self.rep * self._other(o))

    __rmul__ = __mul__

    def __neg__(self):
        return self._wrap(-self.rep)

    def inverse(self):
        g, s, _ = poly_xgcd(self.rep, self.modulus)
        if g.degree != 0:
            raise ZeroDivisorSplit(g)
        return self._wrap(s)

    def __truediv__(self, o):
        if isinstance(o, AlgebraicNumber):
            return self * o.inverse()
        return self * (1 / Fraction(o) if not isinstance(o, GaussianRational) else 1 / o)

    def is_rational(self):
        return self.rep.degree <= 0

    def rational_value(self):
        return self.rep.coeff(0)

    def __eq__(self, o):
        if isinstance(o, AlgebraicNumber):
            return self.modulus == o.modulus and self.rep == o.rep
        return self.is_rational() and self.rational_value() == o

    def __hash__(self):
        return hash((self.rep, self.modulus))

    def values(self, roots):
        return [complex(self.rep.evaluate(complex(r))) for r in roots]

    def __repr__(self):
        return f"AlgebraicNumber({self.rep} mod {self.modulus})"


def char_poly_of(a):
    """Characteristic polynomial of multiplication by ``a`` (Faddeev-LeVerrier)."""
    f = a.modulus
    n = f.degree
    basis_images = []
    t = Polynomial.x()
    for k in range(n):
        img = (a.rep * t ** k) % f
        basis_images.append([img.coeff(i) for i in range(n)])
    # column k = image of t^k
    M = [[basis_images[k][i] for k in range(n)] for i in range(n)]
    ident = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    coeffs = [Fraction(1)]
    Mk = [row[:] for row in ident]
    ck = Fraction(1)
    for k in range(1, n + 1):
        AM = [[sum(M[i][l] * Mk[l][j] for l in range(n)) for j in range(n)] for i in range(n)]
        ck = -sum(AM[i][i] for i in range(n)) / k
        coeffs.append(ck)
        Mk = [[AM[i][j] + (ck if i == j else 0) for j in range(n)] for i in range(n)]
    # coeffs are for lambda^n, lambda^{n-1}, ..., lambda^0
    return Polynomial(list(reversed(coeffs)))


def split_by_rational_value(a):
    """Split the modulus of ``a`` into factors on which ``a`` is constant.

    Returns a list of ``(factor, value)`` where ``value`` is the exact
    rational value of ``a`` on all roots of ``factor``, or ``None`` for the
    remaining factor on which ``a`` takes no value in the base field.
    """
    f = a.modulus
    if a.is_rational():
        return [(f, a.rational_value())]
    out = []
    rest = f
    for beta in rational_roots(char_poly_of(a)):
        g = poly_gcd(rest, a.rep - beta)
        if g.degree >= 1:
            out.append((g, beta))
            rest = rest.exact_div(g)
    if rest.degree >= 1:
        out.append((rest.monic(), None))
    return out


# ----------------------------------------------------------------------
# Certified isolation
# ----------------------------------------------------------------------
def _mpf_fraction(v):
    sign, man, exp, _ = mpmath.mpf(v)._mpf_
    if not man:
        return Fraction(0)
    return (-1) ** sign * Fraction(int(man)) * (Fraction(2) ** exp)


def isolate_roots(f, dps=40):
    """Disjoint inclusion disks for the roots of square-free ``f``.

    Uses the Braess-Hadeler bound ``r_i = n |f(z_i)| / |a_n prod_{j!=i}(z_i-z_j)|``:
    when these disks are pairwise disjoint each contains exactly one root.
    Precision is doubled until disjointness holds.

    Returns a list of ``(center, radius)`` sorted by (real, imag) as mpmath
    values.
    """
    n = f.degree
    if n < 1:
        return []
    lead = f.leading
    re, im = parts(lead)
    while True:
        with mpmath.workdps(dps):
            zs = approximate_roots(f, dps)
            an = mpmath.mpc(mpmath.mpf(re.numerator) / re.denominator,
                            mpmath.mpf(im.numerator) / im.denominator)
            coeffs = []
            for c in reversed(f.coeffs):
                cr, ci = parts(c)
                coeffs.append(mpmath.mpc(mpmath.mpf(cr.numerator) / cr.denominator,
                                         mpmath.mpf(ci.numerator) / ci.denominator))
            out = []
            for i, z in enumerate(zs):
                val = mpmath.polyval(coeffs, z)
                prod = an
                for j, w in enumerate(zs):
                    if j != i:
                        prod *= (z - w)
                r = n * abs(val) / abs(prod)
                # pad for rounding in the evaluation itself
                r = 2 * r + mpmath.mpf(10) ** (-(dps - 5)) * (1 + abs(z))
                out.append((z, r))
            ok = all(abs(out[i][0] - out[j][0]) > out[i][1] + out[j][1]
                     for i in range(n) for j in range(i + 1, n))
        if ok:
            return sorted(out, key=lambda zr: (float(zr[0].real), float(zr[0].imag)))
        dps *= 2
        if dps > 2000:
            raise ArithmeticError("root isolation failed to separate roots")


class AlgebraicPoint:
    """One root of an irreducible-or-square-free factor, with an isolating box.

    Attributes
    ----------
    factor : Polynomial
        Monic square-free defining polynomial over the base field.
    index : int
        Position among the factor's roots sorted by (real, imag).
    rect : tuple of Fraction
        ``(re_lo, re_hi, im_lo, im_hi)``, containing exactly this root.
    """

    __slots__ = ("factor", "index", "rect", "_center", "_dps")

    def __init__(self, factor, index, center, radius, dps):
        self.factor = factor
        self.index = index
        cr = _mpf_fraction(center.real)
        ci = _mpf_fraction(center.imag)
        r = _mpf_fraction(radius)
        self.rect = (cr - r, cr + r, ci - r, ci + r)
        self._center = center
        self._dps = dps

    @classmethod
    def all_roots(cls, factor, dps=40):
        return [cls(factor, k, z, r, dps) for k, (z, r) in enumerate(isolate_roots(factor, dps))]

    @property
    def approx(self):
        return complex(self._center)

    def refine(self, dps):
        """Return the same point with a box computed at ``dps`` digits."""
        z, r = isolate_roots(self.factor, dps)[self.index]
        return AlgebraicPoint(self.factor, self.index, z, r, dps)

    def width(self):
        return self.rect[1] - self.rect[0]

    def overlaps(self, other):
        a, b = self.rect, other.rect
        return not (a[1] < b[0] or b[1] < a[0] or a[3] < b[2] or b[3] < a[2])

    def __eq__(self, other):
        if not isinstance(other, AlgebraicPoint):
            return NotImplemented
        return self.factor == other.factor and self.overlaps(other)

    def __hash__(self):
        return hash(self.factor)

    def __repr__(self):
        return f"AlgebraicPoint(root {self.index} of {self.factor}, ~{self.approx:.12g})"
