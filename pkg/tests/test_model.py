"""Hamiltonian flow, Taub family, VE data and the second-VE polynomial."""

from fractions import Fraction as F

import numpy as np
import pytest
import sympy as sp
from hypothesis import assume, given
from hypothesis import strategies as st

from bianchi_galois.algebra import alpha_exponents, singular_profile
from bianchi_galois.errors import DegenerateCubicError, DomainError
from bianchi_galois.model import (ModelParams, ModelState, ave_residual, build_ve_suite,
                                  c1_poly, c2_poly, einstein_point, gamma_constraint, hamiltonian,
                                  jacobian, linearize, taub_acceleration, taub_energy, taub_state,
                                  vector_field)
from bianchi_galois.model.second_ve import (compare_coefficients, expand_P, printed_coefficients,
                                            three_term_coefficients)

from conftest import ENERGY, LAM

A_, B_, PA_, PB_, L_ = sp.symbols("A B P_A P_B lam")
H_SYM = PA_ * PB_ / (4 * B_) - A_ * PA_ ** 2 / (8 * B_ ** 2) + 2 * A_ - A_ ** 3 / (2 * B_ ** 2) - 2 * L_ * A_ * B_ ** 2
FLOW_SYM = [sp.diff(H_SYM, PA_), sp.diff(H_SYM, PB_), -sp.diff(H_SYM, A_), -sp.diff(H_SYM, B_)]
FLOW_FN = sp.lambdify((A_, B_, PA_, PB_, L_), FLOW_SYM)
JAC_FN = sp.lambdify((A_, B_, PA_, PB_, L_), sp.Matrix(FLOW_SYM).jacobian([A_, B_, PA_, PB_]))

pos = st.floats(0.2, 4.0)
mom = st.floats(-3.0, 3.0)
lams = st.floats(-0.5, 0.5)


# ---------------------------------------------------------------- Hamiltonian flow
def test_hamiltonian_example():
    assert hamiltonian((1.0, 2.0, 3.0, 4.0), 0.5) == pytest.approx(3 * 4 / 8 - 9 / 32 + 2 - 1 / 8 - 4)


def test_hamiltonian_rejects_b_zero():
    with pytest.raises(DomainError):
        hamiltonian((1.0, 0.0, 0.0, 0.0), 0.1)


@given(pos, pos, mom, mom, lams)
def test_vector_field_matches_symbolic_derivatives(A, B, PA, PB, lam):
    got = vector_field((A, B, PA, PB), lam)
    want = FLOW_FN(A, B, PA, PB, lam)
    assert np.allclose(got, want, rtol=1e-12, atol=1e-12)


@given(pos, pos, mom, mom, lams)
def test_jacobian_matches_symbolic(A, B, PA, PB, lam):
    assert np.allclose(jacobian((A, B, PA, PB), lam), np.array(JAC_FN(A, B, PA, PB, lam), float),
                       rtol=1e-11, atol=1e-11)


def test_vector_field_vectorised():
    Y = np.array([[1.0, 2.0, 0.3, -0.1], [0.7, 1.1, -0.4, 0.2]])
    out = vector_field(Y, 0.1)
    for row, y in zip(out, Y):
        assert np.allclose(row, vector_field(tuple(y), 0.1))


# ---------------------------------------------------------------- Einstein point
def test_einstein_point_exact_and_stationary():
    e = einstein_point(F(1, 4))
    assert e == ModelState(F(1), F(1), F(0), F(0))
    assert all(v == 0 for v in vector_field(e, F(1, 4)))


def test_einstein_point_float():
    e = einstein_point(0.1)
    assert e.A == pytest.approx(1 / np.sqrt(0.4))
    assert max(abs(v) for v in vector_field(e, 0.1)) <= 1e-12


def test_einstein_point_needs_positive_lambda():
    with pytest.raises(DomainError):
        einstein_point(0)


@pytest.mark.parametrize("lam", [0.1, 0.25, 1.0])
def test_saddle_center(lam):
    lin = linearize(einstein_point(lam), lam)
    assert lin.kind == "saddle-center"
    e = einstein_point(lam)
    want = np.linalg.eigvals(np.array(JAC_FN(e.A, e.B, 0.0, 0.0, lam), float))
    assert np.allclose(sorted(want, key=lambda z: (z.real, z.imag)),
                       sorted(lin.eigenvalues, key=lambda z: (z.real, z.imag)), atol=1e-12)


# ---------------------------------------------------------------- Taub plane
@given(st.floats(0.1, 5.0), st.floats(-2.0, 2.0), lams)
def test_taub_energy_is_restricted_hamiltonian(x, xdot, lam):
    assert taub_energy(x, xdot, lam) == pytest.approx(hamiltonian(taub_state(x, xdot), lam), rel=1e-12, abs=1e-12)


@given(st.floats(0.1, 5.0), st.floats(-2.0, 2.0), lams)
def test_taub_plane_invariant_and_acceleration(x, xdot, lam):
    s = taub_state(x, xdot)
    dA, dB, dPA, dPB = vector_field(s, lam)
    assert dA == pytest.approx(xdot, abs=1e-12) and dB == pytest.approx(xdot, abs=1e-12)
    assert dPB == pytest.approx(2 * dPA, rel=1e-12, abs=1e-12)
    # A'' from the flow equals the reduced acceleration
    Addot = jacobian(s, lam)[0] @ np.array([dA, dB, dPA, dPB])
    assert Addot == pytest.approx(taub_acceleration(x, xdot, lam), rel=1e-10, abs=1e-10)


def test_taub_exact_values():
    assert taub_energy(F(1), F(1, 2), F(1, 4)) == F(6, 4) + F(3, 2) - F(1, 2)
    assert gamma_constraint(F(2), F(0), F(0), F(3)) == 0
    with pytest.raises(DomainError):
        taub_energy(0.0, 1.0, 0.1)
    with pytest.raises(DomainError):
        gamma_constraint(-1.0, 0.0, 0.1, 1.0)


# ---------------------------------------------------------------- VE data
def test_discriminant_matches_sympy():
    x = sp.Symbol("x")
    lam, E = sp.Rational(3, 28), sp.Rational(9, 7)
    d = sp.discriminant(4 * lam * x ** 3 - 3 * x + 2 * E, x) / (4 * lam) ** 4
    assert ModelParams(F(3, 28), F(9, 7)).discriminant == F(str(d))


def test_reference_suite(ref_suite):
    assert ref_suite.rho == [-3, 1, 2]
    assert ref_suite.g == ref_suite.g_printed()
    assert ref_suite.p(F(4)) == F(103, 168)


def test_suite_domain_errors():
    with pytest.raises(DomainError):
        build_ve_suite((0, 1))
    with pytest.raises(DomainError):
        build_ve_suite((F(1, 10), 0))
    with pytest.raises(DegenerateCubicError):
        build_ve_suite((F(1, 4), 1))


def test_g_from_p_q_matches_sympy(ref_suite):
    x = sp.Symbol("x")
    lam, E = sp.Rational(3, 28), sp.Rational(9, 7)
    C1 = 4 * lam * x ** 3 - 3 * x + 2 * E
    p = (8 * lam * x ** 3 - 3 * x + E) / (x * C1)
    q = (-8 * lam * x ** 3 + 27 * x - E) / (x ** 2 * C1)
    g = sp.cancel(p ** 2 / 4 + sp.diff(p, x) / 2 - q)
    ours = ref_suite.g
    assert sp.cancel(g - sum(sp.Rational(str(c)) * x ** k for k, c in enumerate(ours.num.coeffs))
                     / sum(sp.Rational(str(c)) * x ** k for k, c in enumerate(ours.den.coeffs))) == 0


admissible = st.tuples(st.fractions(F(-2), F(2), max_denominator=12),
                       st.fractions(F(-3), F(3), max_denominator=12))


@given(admissible)
def test_laurent_anchors_random_instances(le):
    lam, E = le
    assume(lam != 0 and E != 0 and 4 * E * E * lam != 1)
    s = build_ve_suite((lam, E))
    prof = singular_profile(s.g)
    zero = [p for p in prof if not p.is_infinity and p.location == 0][0]
    assert zero.order == 2 and zero.b == F(5, 16)
    assert prof[-1].order == 2 and prof[-1].b == 2
    others = [p for p in prof if not p.is_infinity and p is not zero]
    assert len(others) == 3
    assert all(p.b == F(-3, 16) for p in others)
    a0, ainf = alpha_exponents(zero.b), alpha_exponents(prof[-1].b)
    assert (a0.plus, a0.minus) == (F(5, 4), F(-1, 4))
    assert (ainf.plus, ainf.minus) == (2, -1)
    # Vieta on the roots of C1
    roots = np.array(s.singular_points()[1:], dtype=complex)
    assert abs(roots.sum()) <= 1e-9 * max(1, np.abs(roots).max())
    assert np.prod(roots) == pytest.approx(-2 * float(E) / (4 * float(lam)), rel=1e-9)


def test_first_ve_basis_residual(ref_suite, ref_path):
    res = ave_residual(ref_suite, ref_path)
    assert max(res.values()) <= 1e-10


def test_wrong_mu_breaks_basis(ref_suite, ref_path):
    from bianchi_galois.model import psi_basis_eval
    bad = psi_basis_eval(ref_suite, ref_path, ref_suite.mu_squared_candidates[1])
    res = ave_residual(ref_suite, ref_path, bad)
    assert res[3] > 1e-4 and res[1] <= 1e-10


# ---------------------------------------------------------------- second VE polynomial
def sympy_expansion(lam, E):
    """C2^2 f~/eta^2 with eta'/eta = (x C2' - C2 + 2 mu x^{3/2})/(2 x C2), in t = sqrt x."""
    t, mu = sp.symbols("t mu")
    x = t ** 2
    A, B, C = (sum(sp.Rational(str(c)) * x ** k for k, c in enumerate(cs))
               for cs in three_term_coefficients(lam, E))
    lamr, Er = sp.Rational(str(lam)), sp.Rational(str(E))
    C2 = 35 * lamr * x ** 3 + 210 * x + 4 * Er
    dC2 = 105 * lamr * x ** 2 + 210
    ratio = (x * dC2 - C2 + 2 * mu * t ** 3) / (2 * x * C2)
    return sp.Poly(sp.expand(sp.cancel(C2 ** 2 * (A + B * ratio ** 2 + C * ratio))), t, mu)


@pytest.mark.parametrize("le", [(F(3, 28), F(9, 7)), (F(1, 10), F(1, 4)), (F(-2, 5), F(7, 3))])
def test_expansion_matches_sympy(le):
    ours = expand_P(*le)
    poly = sympy_expansion(*le)
    for (k, j), v in zip(poly.monoms(), poly.coeffs()):
        assert ours[k][j] == F(str(v))
    count = sum(1 for c in ours for v in c if v != 0)
    assert count == len(poly.coeffs())


def test_reference_coefficients():
    d = expand_P(F(LAM), F(ENERGY))
    p = printed_coefficients(F(LAM), F(ENERGY))
    rows = compare_coefficients(d, p)
    assert [k for k, _, _, eq in rows if eq] == [1, 17]
    assert d[18] == (F(-6525, 112), 0, 0)
    assert d[17] == (0, 0, 0)
    assert p[18][0] == F(-31850, 3) * F(LAM) ** 3


def test_c_polys_reference():
    assert c1_poly(F(LAM), F(ENERGY)).coeffs == (F(18, 7), -3, 0, F(3, 7))
    assert c2_poly(F(LAM), F(ENERGY)).coeffs == (F(36, 7), 210, 0, F(15, 4))
