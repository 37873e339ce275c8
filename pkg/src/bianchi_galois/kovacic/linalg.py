"""Small exact and modular linear algebra for undetermined-coefficient searches."""

from fractions import Fraction

from ..algebra import Polynomial, RationalFunction, poly_lcm

#: Default modulus for certified-negative rank filters (a Mersenne prime).
PRIME = (1 << 61) - 1


def nullspace(rows, ncols):
    """Basis of the right kernel of a matrix over an exact field.

    ``rows`` is a list of coefficient lists.  Returns a list of vectors.
    """
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][fc]
        basis.append(v)
    return basis


def solve_affine(rows, rhs, ncols):
    """One solution of ``rows @ v = rhs`` or None if inconsistent."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    ker = nullspace(aug, ncols + 1)
    for v in ker:
        if v[ncols] != 0:
            s = -1 / v[ncols]
            return [a * s for a in v[:ncols]]
    # kernel vectors with last entry 0 cannot fix the affine part;
    # combine: the affine solution exists iff some kernel vector has nonzero tail
    return None


def monic_polynomial_solution(operator, d):
    """Monic degree-``d`` polynomial P with ``operator(P) == 0``, or None.

    ``operator`` maps a :class:`Polynomial` to a :class:`RationalFunction` and
    must be linear.  The images of ``x**j`` are brought to a common
    denominator and the coefficient equations are solved exactly.
    """
    images = [RationalFunction._lift(operator(Polynomial([0] * j + [1]))) for j in range(d + 1)]
    den = Polynomial.constant(1)
    for im in images:
        den = poly_lcm(den, im.den)
    nums = [im.num * den.exact_div(im.den) for im in images]
    size = max((n.degree for n in nums if not n.is_zero()), default=-1) + 1
    if size <= 0:
        return Polynomial([0] * d + [1])
    rows = [[nums[j].coeff(k) for j in range(d)] for k in range(size)]
    rhs = [-nums[d].coeff(k) for k in range(size)]
    if d == 0:
        return Polynomial.constant(1) if all(v == 0 for v in rhs) else None
    sol = solve_affine(rows, rhs, d)
    if sol is None:
        return None
    return Polynomial(sol + [1])


# ----------------------------------------------------------------------
# modular helpers
# ----------------------------------------------------------------------
def to_mod(q, p=PRIME):
    q = Fraction(q)
    den = q.denominator % p
    if den == 0:
        raise ZeroDivisionError("denominator divisible by the modulus")
    return q.numerator % p * pow(den, -1, p) % p


def poly_mod(poly, p=PRIME):
    return [to_mod(c, p) for c in poly.coeffs]


def rank_mod(rows, ncols, p=PRIME):
    m = [list(r) for r in rows]
    rank = 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][c] % p), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][c], -1, p)
        m[rank] = [v * inv % p for v in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][c]:
                f = m[i][c]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[rank])]
        rank += 1
        if rank == len(m):
            break
    return rank


def padd(a, b, p=PRIME):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, v in enumerate(b):
        out[i] = (out[i] + v) % p
    return out


def pmul(a, b, p=PRIME):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, u in enumerate(a):
        if u:
            for j, v in enumerate(b):
                out[i + j] += u * v
    return [v % p for v in out]


def pscale(a, s, p=PRIME):
    return [v * s % p for v in a]


def pderiv(a, p=PRIME):
    return [k * v % p for k, v in enumerate(a)][1:]


def ptrim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a
