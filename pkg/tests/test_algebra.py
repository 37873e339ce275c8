"""Exact polynomial / rational-function algebra, parser and pole data."""

from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from bianchi_galois.algebra import (AlgebraicPoint, GaussianRational, Polynomial, RationalFunction,
                                    alpha_exponents, derivative, laurent_coefficient, normalize,
                                    parse_expression, render, singular_profile)
from bianchi_galois.errors import ParseError

X = sp.Symbol("x")
F = Fraction


def to_sympy(f):
    def poly(p):
        return sum(sp.Rational(c.numerator, c.denominator) * X ** k for k, c in enumerate(p.coeffs))
    return poly(f.num) / poly(f.den)


def from_ints(cs):
    return Polynomial([F(c) for c in cs])


small_poly = st.lists(st.integers(-5, 5), min_size=1, max_size=9).map(from_ints)
nonzero_poly = small_poly.filter(lambda p: not p.is_zero())
ratfunc = st.builds(RationalFunction, small_poly, nonzero_poly)


# ---------------------------------------------------------------- parser
def test_parse_cancels_common_factor():
    f = parse_expression("(x^2-1)/(x-1)")
    assert f.num == Polynomial([1, 1]) and f.den == Polynomial([1])


def test_parse_reference_cubic():
    f = parse_expression("(3/7)*x^3 - 3*x + 18/7")
    lam, E = F(3, 28), F(9, 7)
    assert f.den == Polynomial([1])
    assert f.num == Polynomial([2 * E, -3, 0, 4 * lam])


def test_parse_error_offset():
    with pytest.raises(ParseError) as err:
        parse_expression("x^")
    assert err.value.offset == 2


def test_parse_division_by_zero_polynomial():
    with pytest.raises((ZeroDivisionError, ParseError, ValueError)):
        parse_expression("1/(x-x)")


def test_parse_gaussian_unit():
    f = parse_expression("i*i")
    assert f == RationalFunction(Polynomial([-1]))


@given(ratfunc)
def test_render_roundtrip(f):
    assert parse_expression(render(f)) == f


# ---------------------------------------------------------------- normalize
def test_normalize_examples():
    f = normalize(RationalFunction(Polynomial([2, 2]), Polynomial([2])))
    assert f.num == Polynomial([1, 1]) and f.den == Polynomial([1])
    g = normalize(RationalFunction(Polynomial([-1, 0, 1]), Polynomial([1, -2, 1])))
    assert g == RationalFunction(Polynomial([1, 1]), Polynomial([-1, 1]))
    assert normalize(g) == g


@given(ratfunc)
def test_normalized_denominator_monic_and_coprime(f):
    if f.is_zero():
        return
    assert f.den.leading == 1
    assert sp.gcd(sp.Poly(to_sympy(RationalFunction(f.num)), X), sp.Poly(to_sympy(RationalFunction(f.den)), X)).degree() == 0


@given(ratfunc, ratfunc)
def test_sum_and_product_match_sympy(f, g):
    assert sp.cancel(to_sympy(f + g) - (to_sympy(f) + to_sympy(g))) == 0
    assert sp.cancel(to_sympy(f * g) - to_sympy(f) * to_sympy(g)) == 0


# ---------------------------------------------------------------- derivative
def test_derivative_examples():
    x2 = RationalFunction(Polynomial([0, 0, 1]))
    assert derivative(x2) == RationalFunction(Polynomial([0, 2]))
    inv = RationalFunction(Polynomial([1]), Polynomial([0, 1]))
    assert derivative(inv) == RationalFunction(Polynomial([-1]), Polynomial([0, 0, 1]))


@given(ratfunc, ratfunc)
def test_product_rule(f, g):
    assert derivative(f * g) == derivative(f) * g + f * derivative(g)


@given(ratfunc)
def test_derivative_matches_sympy(f):
    assert sp.cancel(to_sympy(derivative(f)) - sp.diff(to_sympy(f), X)) == 0


# ---------------------------------------------------------------- poles
def test_profile_reference_g(ref_suite):
    prof = singular_profile(ref_suite.g)
    finite = [s for s in prof if not s.is_infinity]
    assert sorted(s.location for s in finite) == [-3, 0, 1, 2]
    assert all(s.order == 2 for s in prof)


def test_profile_simple_examples():
    prof = singular_profile(parse_expression("1/x"))
    assert [(s.location, s.order) for s in prof if not s.is_infinity] == [(0, 1)]
    assert prof[-1].order == 1
    prof = singular_profile(parse_expression("x"))
    assert len(prof) == 1 and prof[-1].is_infinity and prof[-1].order == -1


def test_profile_irrational_poles_are_algebraic():
    prof = singular_profile(parse_expression("1/(x^2-2)^2"))
    finite = [s for s in prof if not s.is_infinity]
    assert len(finite) == 2 and all(isinstance(s.location, AlgebraicPoint) for s in finite)
    a, b = finite[0].location, finite[1].location
    assert not a.overlaps(b)
    assert sorted(round(s.approx.real, 12) for s in finite) == [round(-2 ** 0.5, 12), round(2 ** 0.5, 12)]


def test_laurent_reference(ref_suite):
    prof = singular_profile(ref_suite.g)
    zero = next(s for s in prof if not s.is_infinity and s.location == 0)
    assert laurent_coefficient(ref_suite.g, zero) == F(5, 16)
    assert laurent_coefficient(ref_suite.g, prof[-1]) == 2


def test_laurent_simple_pole_residue():
    f = parse_expression("1/(x-1)")
    site = singular_profile(f)[0]
    assert laurent_coefficient(f, site) == 1


@given(st.lists(st.integers(-4, 4), min_size=1, max_size=3, unique=True), st.lists(st.integers(-6, 6), min_size=1, max_size=4))
def test_derivative_raises_pole_orders(poles, num):
    den = Polynomial([1])
    for c in poles:
        den = den * Polynomial([-c, 1])
    f = RationalFunction(from_ints(num), den)
    if f.is_zero():
        return
    before = {s.location: s.order for s in singular_profile(f) if not s.is_infinity}
    after = {s.location: s.order for s in singular_profile(derivative(f)) if not s.is_infinity}
    for loc, order in before.items():
        assert after[loc] == order + 1


@given(st.lists(st.integers(-4, 4), min_size=2, max_size=4, unique=True), st.lists(st.integers(-6, 6), min_size=1, max_size=2))
def test_residues_sum_to_zero(poles, num):
    den = Polynomial([1])
    for c in poles:
        den = den * Polynomial([-c, 1])
    f = RationalFunction(from_ints(num), den)
    if f.is_zero() or f.den.degree < f.num.degree + 2:
        return
    total = sum(laurent_coefficient(f, s) for s in singular_profile(f) if not s.is_infinity)
    assert total == 0


# ---------------------------------------------------------------- exponents
def test_alpha_examples():
    a = alpha_exponents(F(5, 16))
    assert (a.plus, a.minus, a.rational) == (F(5, 4), F(-1, 4), True)
    a = alpha_exponents(F(2))
    assert (a.plus, a.minus) == (2, -1)
    a = alpha_exponents(F(0))
    assert (a.plus, a.minus) == (1, 0)
    assert alpha_exponents(F(1)).rational is False


@given(st.fractions(min_value=-10, max_value=10, max_denominator=50))
def test_alpha_vieta(b):
    a = alpha_exponents(b)
    assert a.plus + a.minus == 1
    assert a.plus * a.minus == -b


def test_gaussian_scalar_exact():
    z = GaussianRational(F(1, 2), F(3))
    assert z * z == GaussianRational(F(1, 4) - 9, F(3))
