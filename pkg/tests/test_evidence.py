"""Numerical evidence: residuals, constants, identities, second VE and monodromy."""

from fractions import Fraction as F

import numpy as np
import pytest

from bianchi_galois.algebra import parse_expression
from bianchi_galois.contour import Path, circle
from bianchi_galois.errors import PathError
from bianchi_galois.evidence import (DEFAULT_THRESHOLDS, default_loops, default_path, galois_identities,
                                     monodromy_increments, omega_p_check, printed_wronskian,
                                     resolve_constants, residual_check, second_ve_equivalence,
                                     singular_set)
from bianchi_galois.model import VEPath, build_ve_suite


def random_instances(count=5, seed=20261016):
    """Admissible (lambda, E) with small denominators."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        lam = F(int(rng.integers(-20, 21)), int(rng.integers(1, 30)))
        E = F(int(rng.integers(-30, 31)), int(rng.integers(1, 12)))
        if lam == 0 or E == 0 or 4 * E * E * lam == 1:
            continue
        out.append((lam, E))
    return out


RANDOM = random_instances()


# ---------------------------------------------------------------- generic harness
def test_residual_check_trivial_solution():
    z = np.linspace(1, 2, 50)
    rep = residual_check(lambda s: (s, np.zeros_like(s)), parse_expression("0"), z)
    assert rep.passed and rep.max_residual == 0.0
    assert rep.threshold == DEFAULT_THRESHOLDS["residual"]


def test_residual_check_detects_wrong_equation():
    z = np.linspace(1, 2, 50)
    rep = residual_check(lambda s: (s, np.zeros_like(s)), parse_expression("1/x^2"), z, threshold=1e-8)
    assert not rep.passed and rep.max_residual == pytest.approx(1.0)
    assert rep.to_dict()["threshold"] == 1e-8


def test_path_too_close_raises(ref_suite):
    with pytest.raises(PathError):
        VEPath(ref_suite, Path([0.5, 1.0 + 1e-5j, 1.5]))


# ---------------------------------------------------------------- constants
def test_unique_mu_candidate(ref_resolution):
    res = ref_resolution
    assert res.verdict == "resolved"
    assert res.candidate.label == "486(E^2 lambda + 2450)"
    assert sum(r.passed for r in res.reports) == 1
    assert res.reports[0].max_residual <= 1e-8
    assert min(r.max_residual for r in res.reports[1:]) > DEFAULT_THRESHOLDS["reject"]


def test_wronskian(ref_resolution, ref_suite):
    w = ref_resolution.wronskian
    assert w["passed"]
    assert w["constancy"] <= 1e-8 and w["value_error"] <= 1e-6
    assert abs(printed_wronskian(ref_suite)) == pytest.approx(2182.46, rel=1e-5)


def test_all_thresholds_visible(ref_resolution):
    d = ref_resolution.to_dict()
    assert all("threshold" in r for r in d["candidates"])
    assert "constancy_threshold" in d["wronskian"]


@pytest.mark.parametrize("le", RANDOM, ids=[f"{a}_{b}" for a, b in RANDOM])
def test_random_instances_single_candidate_and_identities(le):
    suite = build_ve_suite(le)
    vp = VEPath(suite, default_path(suite))
    res = resolve_constants(suite, vp)
    assert res.verdict == "resolved" and res.candidate.label == "486(E^2 lambda + 2450)"
    assert res.wronskian["passed"]
    for rep in galois_identities(res.suite, vp):
        assert rep.max_residual <= 1e-8, rep.quantity


# ---------------------------------------------------------------- identities
def test_reference_identities(ref_resolution, ref_path):
    reps = galois_identities(ref_resolution.suite, ref_path)
    assert len(reps) == 3 and all(r.passed for r in reps)


def test_third_identity_sign_free(ref_resolution, ref_path):
    s = ref_resolution.suite
    flipped = galois_identities(s, ref_path, s.resolved)
    assert flipped[2].max_residual <= 1e-8


# ---------------------------------------------------------------- second VE
@pytest.fixture(scope="module")
def second_ve(ref_resolution, ref_path):
    return second_ve_equivalence(ref_resolution.suite, ref_path)


def test_second_ve_equivalence(second_ve):
    main = second_ve[0]
    assert main.passed and main.max_residual <= 1e-8


def test_printed_polynomial_not_equivalent(second_ve):
    assert second_ve[0].details["printed_coefficients"] > 1e-3


def test_sensitivity_control_plus_one(second_ve):
    # literal control: replacing P by P + 1 must move the residual above 1e-3
    assert second_ve[0].details["plus_one"] > 1e-3


def test_omega_p(second_ve):
    rep = second_ve[1]
    assert rep.passed and rep.max_residual <= 1e-6


def test_omega_p_printed_source(ref_resolution, ref_path):
    assert omega_p_check(ref_resolution.suite, ref_path, source="printed").max_residual <= 1e-6


# ---------------------------------------------------------------- monodromy
@pytest.fixture(scope="module")
def loops(ref_suite):
    return default_loops(ref_suite)


def test_default_loop_geometry(ref_suite, loops):
    lp, radius = loops
    assert radius == pytest.approx(0.25)
    assert set(lp) == {"0", "rho0", "rho1", "rho2", "empty"}
    names = {n for n, _ in singular_set(ref_suite)}
    assert {"0", "rho0", "rho1", "rho2"} <= names


def test_empty_loop_below_bound(ref_resolution, loops):
    rep = monodromy_increments(ref_resolution.suite, loops[0]["empty"])
    assert rep.enclosed == [] and rep.below_bound()


def test_loop_around_one_significant(ref_resolution, loops):
    rep = monodromy_increments(ref_resolution.suite, loops[0]["rho1"])
    assert rep.enclosed == ["rho1"]
    assert rep.significant(10.0)


def test_reversed_loop_retraces_to_zero(ref_resolution, loops):
    # going around and straight back: gamma(L) + gamma_{branch after L}(L^-1) = 0
    s = ref_resolution.suite
    verts = list(loops[0]["rho1"].vertices)
    fwd = monodromy_increments(s, loops[0]["rho1"])
    there_and_back = monodromy_increments(s, Path(verts + verts[::-1][1:], closed=True))
    assert abs(there_and_back.gamma1) <= there_and_back.error1 + 1e-12 * abs(fwd.gamma1)
    assert abs(there_and_back.gamma2) <= there_and_back.error2 + 1e-12 * abs(fwd.gamma2)
    assert abs(fwd.gamma1) > 1e6 * there_and_back.error1


def test_empty_loop_reversal_negates(ref_resolution, loops):
    s = ref_resolution.suite
    verts = list(loops[0]["empty"].vertices)
    fwd = monodromy_increments(s, loops[0]["empty"])
    rev = monodromy_increments(s, Path(verts[::-1], closed=True))
    assert abs(fwd.gamma1 + rev.gamma1) <= fwd.error1 + rev.error1
    assert abs(fwd.gamma2 + rev.gamma2) <= fwd.error2 + rev.error2
    assert abs(fwd.multiplier1 - 1) <= 1e-9


def test_concatenation_with_trivial_loop(ref_resolution, loops):
    # appending a loop that encloses nothing leaves the increment unchanged
    s = ref_resolution.suite
    a = list(loops[0]["rho1"].vertices)
    base = a[0]
    b = [base, base + 0.1 - 0.05j, base + 0.2, base + 0.1 + 0.05j, base]
    ga = monodromy_increments(s, loops[0]["rho1"])
    gab = monodromy_increments(s, Path(a + b[1:], closed=True))
    assert abs(gab.gamma1 - ga.gamma1) <= ga.error1 + gab.error1
    assert abs(gab.gamma2 - ga.gamma2) <= ga.error2 + gab.error2


def test_concatenated_loops_additive_on_trivial_branch(ref_resolution):
    # two loops enclosing nothing: plain additivity
    s = ref_resolution.suite
    base = 1.5 + 0.5j
    a = [base, 1.7 + 0.5j, 1.6 + 0.7j]
    b = [base, 1.4 + 0.7j, 1.3 + 0.5j]
    ga, gb = (monodromy_increments(s, Path(v, closed=True)) for v in (a, b))
    gab = monodromy_increments(s, Path(a + [base] + b[1:], closed=True))
    assert abs(gab.gamma1 - ga.gamma1 - gb.gamma1) <= ga.error1 + gb.error1 + gab.error1


def test_halving_tolerance_converges(ref_resolution, loops):
    s = ref_resolution.suite
    coarse = monodromy_increments(s, loops[0]["rho1"], rtol=1e-9)
    fine = monodromy_increments(s, loops[0]["rho1"], rtol=5e-10)
    assert abs(fine.gamma1 - coarse.gamma1) <= coarse.error1
    assert abs(fine.gamma2 - coarse.gamma2) <= coarse.error2


def test_loop_margin(ref_suite):
    with pytest.raises(PathError):
        monodromy_increments(ref_suite, circle(1.0, 1e-4, 16))


def test_report_json(ref_resolution, loops):
    d = monodromy_increments(ref_resolution.suite, loops[0]["empty"]).to_dict()
    assert set(d) >= {"gamma1", "gamma2", "error1", "error2", "settings", "significant_10x"}
