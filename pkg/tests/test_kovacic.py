"""Kovacic decision procedure: corpus, Schwarz list, reference operator, properties."""

import time
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bianchi_galois.algebra import Polynomial, RationalFunction, parse_expression
from bianchi_galois.kovacic import (GALOIS_LABELS, KovacicInput, OmegaBranch, case2_identity, case3,
                                    case3_exponent_set, case3_family_exhaustive, necessary_conditions,
                                    run)
from bianchi_galois.model import c2_poly

from conftest import ENERGY, LAM


def riemann_r(l, m, n):
    """Normal-form r with exponent differences l, m, n at 0, 1, infinity."""
    a = (l * l - 1) / 4
    b = (m * m - 1) / 4
    c = (n * n - 1) / 4 - a - b
    return f"({a})/x^2 + ({b})/(x-1)^2 + ({c})/(x*(x-1))"


def ring(count=16, radius=2.7, centre=0.5):
    t = (np.arange(count) + 0.3) / count * 2 * np.pi
    return centre + radius * np.exp(1j * t)


# ---------------------------------------------------------------- corpus
def test_zero_is_case1():
    rep = run("0")
    assert rep.outcome == "case1" and rep.galois_label == GALOIS_LABELS[1]


def test_three_quarters_over_x_squared_gives_x_three_halves():
    rep = run("3/(4*x^2)")
    assert rep.outcome == "case1"
    assert rep.solution["powers"] == {"0": "3/2"}
    assert rep.solution["prefactor_polynomial"] == "1"
    # substitute xi = x^{3/2}
    x = np.linspace(0.5, 3.0, 25)
    res = np.abs(0.75 * x ** -0.5 - 0.75 / x ** 2 * x ** 1.5) / np.abs(x ** 1.5)
    assert res.max() <= 1e-10


def test_inverse_square_case1_and_case2_attempt():
    rep = run("1/x^2", exhaustive=True)
    assert rep.outcome == "case1"
    att = rep.attempt(2)
    assert att.succeeded and att.degree == 0
    assert att.theta == parse_expression("1/x")
    assert case2_identity(att.theta, parse_expression("1/x^2")).is_zero()


def test_airy_full_sl2():
    rep = run("x")
    assert rep.outcome == "all-failed" and rep.galois_label == "full SL(2)"


def test_unsupported_is_reported_not_guessed():
    rep = run("(x^2+1)/x^2")
    assert rep.outcome == "unsupported" and rep.galois_label is None and rep.notes


@pytest.mark.parametrize("triple,outcome,first_n", [
    ((F(1, 2), F(1, 3), F(1, 3)), "case3", 4),
    ((F(1, 2), F(1, 3), F(1, 4)), "case3", 6),
    ((F(1, 2), F(1, 3), F(1, 5)), "case3", 12),
    ((F(1, 2), F(1, 2), F(1, 3)), "case2", None),
    ((F(1, 3), F(1, 4), F(1, 5)), "all-failed", None),
])
def test_schwarz_list(triple, outcome, first_n):
    rep = run(riemann_r(*triple))
    assert rep.outcome == outcome
    if first_n:
        ok = [a.n for a in rep.attempts if a.case_id == 3 and a.succeeded]
        assert min(ok) == first_n


@pytest.mark.parametrize("triple", [(F(1, 2), F(1, 3), F(1, 3)), (F(1, 2), F(1, 3), F(1, 4)),
                                    (F(1, 2), F(1, 2), F(1, 3))])
def test_omega_solves_riccati(triple):
    g = parse_expression(riemann_r(*triple))
    rep = run(g)
    assert OmegaBranch(rep.omega_data).riccati_residual(g, ring()) <= 1e-8


# ---------------------------------------------------------------- necessary conditions
@pytest.mark.parametrize("r,admissible", [
    ("x", set()),
    ("1/x^3", {2}),
    ("1/x^2", {1, 2, 3}),
    ("1/x", set()),
    ("1/(x*(x-1))", {1, 3}),
    ("1/x^4", {1}),
    ("1/x^4 + 1/x", set()),
])
def test_necessary_conditions(r, admissible):
    ok, notes = necessary_conditions(KovacicInput(parse_expression(r)))
    assert ok == admissible
    assert set(notes) == {1, 2, 3} - admissible


def test_case3_zero_set():
    want = [F(k) for k in (-3, 0, 3, 6, 9, 12, 15)]
    assert case3_exponent_set(2, F(5, 16), 12) == want
    assert case3_exponent_set(2, F(5, 16), 6) == want


# ---------------------------------------------------------------- reference operator
def test_reference_decision(ref_report, ref_suite):
    rep = ref_report
    assert rep.outcome == "case2" and rep.galois_label == "infinite dihedral"
    assert rep.attempt(1).status == "failed"
    c2 = rep.attempt(2)
    monic = c2_poly(F(LAM), F(ENERGY))
    monic = monic * (1 / monic.leading)
    assert c2.degree == 3 and c2.witness_polynomial == monic
    assert c2.theta == parse_expression("(x^3 - 3)/(x^4 - 7*x^2 + 6*x)")
    assert c2.checks["quadratic_variant"] == "standard"


def test_reference_case3_witness_is_square(ref_report):
    c2 = ref_report.attempt(2)
    c3 = ref_report.attempt(3, 4)
    assert c3.succeeded
    assert c3.witness_polynomial == c2.witness_polynomial * c2.witness_polynomial


def test_reference_riccati(ref_report, ref_suite):
    zs = ring(24, 5.0, 0.0)
    assert OmegaBranch(ref_report.omega_data).riccati_residual(ref_suite.g, zs) <= 1e-8


def test_one_three_two_order_same_decision(ref_suite):
    assert run(ref_suite.g, order="paper").outcome == "case2"


def test_reference_runtime(ref_suite):
    t0 = time.perf_counter()
    run(ref_suite.g, exhaustive=True)
    assert time.perf_counter() - t0 < 5.0


def test_json_deterministic(ref_suite):
    assert run(ref_suite.g).to_json() == run(ref_suite.g).to_json()


# ---------------------------------------------------------------- properties
differences = st.sampled_from([F(1, 2), F(1, 3), F(2, 3), F(1, 4), F(3, 4), F(1, 5), F(2, 5), F(1, 6)])


@settings(max_examples=15)
@given(differences, differences, differences)
def test_case3_class_search_matches_family_search(l, m, n):
    inp = KovacicInput(parse_expression(riemann_r(l, m, n)))
    for att in case3(inp):
        if att.status == "excluded":
            continue
        assert att.succeeded == (case3_family_exhaustive(inp, att.n) is not None)


@settings(max_examples=15)
@given(differences, differences, differences)
def test_success_yields_riccati_solution(l, m, n):
    g = parse_expression(riemann_r(l, m, n))
    rep = run(g)
    if rep.omega_data is None:
        return
    # degree-12 omega polynomials are ill-conditioned in doubles
    assert OmegaBranch(rep.omega_data, dps=40).riccati_residual(g, ring(6)) <= 1e-20
