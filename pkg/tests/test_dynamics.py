"""Adaptive integrator, fates, section crossings, initial conditions and outputs."""

import hashlib

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import solve_ivp

from bianchi_galois.dynamics import (CSV_HEADER, GridSpec, IntegratorConfig, csv_text, detect_crossings,
                                     emit, energy_drift, energy_trend, integrate_batch, integrate_orbit,
                                     read_csv, section_batch, solve_ic, svg_text)
from bianchi_galois.errors import DomainError, InfeasibleICError
from bianchi_galois.model import einstein_point, hamiltonian, taub_acceleration, taub_state, vector_field

LAM = 0.1
SMALL_GRID = GridSpec(0.5, 3.0, 6, -2.0, 2.0, 6)


def scipy_orbit(y0, lam, t_end, **kw):
    return solve_ivp(lambda t, y: vector_field(tuple(y), lam), (0.0, t_end), y0, method="DOP853",
                     rtol=1e-13, atol=1e-14, **kw)


@pytest.fixture(scope="module")
def small_section():
    return section_batch(LAM, 0.25, SMALL_GRID, IntegratorConfig(t_max=300))


# ---------------------------------------------------------------- integrator
def test_matches_scipy_near_einstein_point():
    e = einstein_point(0.25)
    y0 = np.array([e.A + 0.01, e.B, 0.0, 0.0])
    tr = integrate_orbit(y0, 0.25, t_end=5.0)
    ref = scipy_orbit(y0, 0.25, 5.0)
    assert tr.fate.fate == "ran-to-tmax" and tr.t[-1] == pytest.approx(5.0)
    assert np.max(np.abs(tr.y[-1] - ref.y[:, -1])) <= 1e-9


def test_taub_orbit_matches_reduced_equation():
    x0, v0 = 2.0, 0.0
    tr = integrate_orbit(taub_state(x0, v0).as_array(), LAM, t_end=3.0)
    ref = solve_ivp(lambda t, u: [u[1], taub_acceleration(u[0], u[1], LAM)], (0.0, 3.0), [x0, v0],
                    method="DOP853", rtol=1e-13, atol=1e-14)
    assert tr.y[-1][0] == pytest.approx(ref.y[0, -1], rel=1e-9)


def test_taub_plane_invariance_and_escape():
    tr = integrate_orbit(taub_state(2.0, 0.0).as_array(), LAM)
    dev = np.max(np.abs(tr.y[:, 0] - tr.y[:, 1])) + np.max(np.abs(tr.y[:, 3] - 2 * tr.y[:, 2]))
    assert dev <= 1e-9
    assert tr.fate.fate == "escaped"


def test_einstein_point_stationary():
    e = einstein_point(0.25)
    tr = integrate_orbit(np.array([float(v) for v in e]), 0.25, t_end=1000.0)
    assert tr.fate.fate == "ran-to-tmax"
    assert np.max(np.abs(tr.y - tr.y[0])) <= 1e-12


def test_energy_drift_small():
    e = einstein_point(0.25)
    tr = integrate_orbit(np.array([e.A + 1e-3, e.B, 0.0, 0.0]), 0.25, t_end=20.0)
    assert energy_drift(tr) <= 1e-9 and tr.drift <= 1e-9


def test_reversibility():
    y0 = np.array([1.02, 1.0, 0.01, -0.02])
    fwd = integrate_batch(y0, 0.25, t_end=4.0)
    back = integrate_batch(fwd.final, 0.25, t_end=4.0, direction=-1.0)
    assert np.max(np.abs(back.final[0] - y0)) <= 1e-8


def test_batch_equals_single_orbits():
    Y = np.array([[1.02, 1.0, 0.01, -0.02], [1.5, 0.9, 0.3, 0.1], [0.8, 1.2, -0.2, 0.0]])
    batch = integrate_batch(Y, 0.25, t_end=3.0)
    for i, y in enumerate(Y):
        single = integrate_batch(y, 0.25, t_end=3.0)
        assert np.array_equal(single.final[0], batch.final[i])


def test_fates():
    cfg = IntegratorConfig(t_max=50.0)
    res = integrate_batch(np.array([[2.0, 2.0, 0.0, 0.0], [0.5, 0.3, -2.0, 0.0], [0.0, 1.0, 0.0, 0.0]]),
                          LAM, cfg)
    assert [f.fate for f in res.fates] == ["escaped", "breakdown", "breakdown"]
    assert res.fates[2].time == 0.0


def test_config_validation():
    with pytest.raises(DomainError):
        IntegratorConfig(rtol=0)
    with pytest.raises(DomainError):
        integrate_orbit(np.array([1.0, 0.0, 0.0, 0.0]), LAM)


# ---------------------------------------------------------------- crossings
def test_crossing_matches_scipy_event():
    ic = solve_ic(2.5, 1.2, LAM, 0.25)
    y0 = ic.state.as_array()
    tr = integrate_orbit(y0, LAM, IntegratorConfig(t_max=30.0))
    recs = detect_crossings(tr)
    assert recs

    def ev(t, y):
        return y[3]
    ev.direction = 1
    ref = scipy_orbit(y0, LAM, recs[0].t + 1.0, events=ev)
    t_ref = ref.t_events[0][ref.t_events[0] > 1e-9][0]
    assert recs[0].t == pytest.approx(t_ref, abs=1e-8)
    assert abs(recs[0].P_B) <= 1e-12 and recs[0].PB_dot > 0


def test_section_records_on_section(small_section):
    res = small_section
    assert res.records
    for r in res.records:
        assert abs(r.P_B) <= 1e-12 and r.PB_dot > 0
    s = res.summary()
    assert s["orbits"] + s["infeasible"] == 36


# ---------------------------------------------------------------- initial conditions
def test_solve_ic_energy():
    ic = solve_ic(1.5, 0.4, LAM, 0.25)
    assert float(hamiltonian(ic.state, LAM)) == pytest.approx(0.25, abs=1e-12)
    assert ic.state.PB == 0.0 and ic.multiplicity == 1


def test_solve_ic_double_root():
    ic = solve_ic(1.0, 0.0, 0.25, 1.0)
    assert ic.state.B == pytest.approx(1.0) and ic.multiplicity == 2


def test_solve_ic_infeasible():
    with pytest.raises(InfeasibleICError):
        solve_ic(-1.0, 0.0, LAM, 0.25)
    with pytest.raises(InfeasibleICError):
        solve_ic(1.0, 0.5, LAM, 10.0)


@settings(max_examples=30)
@given(st.floats(0.3, 3.0), st.floats(-2.0, 2.0), st.floats(0.1, 1.0))
def test_solve_ic_property(A, PA, E):
    try:
        ic = solve_ic(A, PA, LAM, E)
    except InfeasibleICError:
        return
    assert float(hamiltonian(ic.state, LAM)) == pytest.approx(E, abs=1e-10)
    assert ic.state.B == min(ic.roots)


# ---------------------------------------------------------------- outputs
def test_csv_roundtrip(small_section, tmp_path):
    text = csv_text(small_section)
    assert text.splitlines()[0] == ",".join(CSV_HEADER)
    rows = read_csv(text)
    assert len(rows) == len(small_section.records)
    for (lam, E, rec, fate), orig in zip(rows, small_section.records):
        assert (rec.t, rec.A, rec.P_A, rec.B) == (orig.t, orig.A, orig.P_A, orig.B)
        assert fate == small_section.fate_of(orig.ic_index).fate
    path = tmp_path / "s.csv"
    emit(small_section, str(path))
    assert read_csv(str(path)) == rows


def test_svg_one_marker_per_record(small_section):
    svg = svg_text(small_section)
    assert svg.count('<circle class="record"') == len(small_section.records)


def test_empty_grid():
    res = section_batch(LAM, 0.25, GridSpec(1, 2, 0, -1, 1, 0))
    assert res.records == [] and res.fates == []
    assert csv_text(res).strip() == ",".join(CSV_HEADER)
    assert svg_text(res).count("<circle") == 0


def test_emit_unwritable_path(small_section, tmp_path):
    with pytest.raises(DomainError):
        emit(small_section, str(tmp_path / "missing" / "x.csv"))


def test_grid_parse():
    g = GridSpec.parse("0.5:3:20", "-2:2:20")
    pts = g.points()
    assert len(pts) == 400 and pts[0] == (0.5, -2.0) and pts[-1] == (3.0, 2.0)
    with pytest.raises(ValueError):
        GridSpec.parse("0:1", "0:1:2")


def test_deterministic_across_threads():
    digests = set()
    for threads in (1, 3, 4):
        res = section_batch(LAM, 0.25, SMALL_GRID, IntegratorConfig(t_max=300), threads=threads)
        digests.add(hashlib.sha256(csv_text(res).encode()).hexdigest())
    assert len(digests) == 1


def test_energy_trend_report():
    rep = energy_trend(LAM, [0.25, 0.5], GridSpec(0.5, 3.0, 3, -2.0, 2.0, 3), IntegratorConfig(t_max=50))
    assert [r["energy"] for r in rep["rows"]] == [0.25, 0.5]
    assert isinstance(rep["nondecreasing"], bool)


def test_chunking_does_not_change_fates():
    a = section_batch(LAM, 0.25, SMALL_GRID, IntegratorConfig(t_max=100), threads=1)
    b = section_batch(LAM, 0.25, SMALL_GRID, IntegratorConfig(t_max=100), threads=2, chunk=5)
    assert [(f.fate, f.time) for f in a.fates] == [(f.fate, f.time) for f in b.fates]
