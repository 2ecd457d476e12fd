import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import solve_ivp

from shrinkerlab import rotational as rot
from shrinkerlab.errors import ConvergenceError, DomainError, UmbilicError

# 16 sqrt(2): limit of x * ratio for every b outside {0, 2}. Derived by hand from
# x + gamma gamma' = (1 - b^2/4) x + ..., F = (b/16)(1 - b^2/4) x^3 + ... and |H| -> |b|/2.
AXIS_LIMIT = 22.627416997969522


def sphere_series(n_terms):
    """Coefficients of sqrt(4 - x^2) = 2 sum binom(1/2, n) (-x^2/4)^n."""
    out, c = [], Fraction(1)
    for n in range(n_terms):
        out.append(2 * c * Fraction(-1, 4) ** n)
        c *= (Fraction(1, 2) - n) / (n + 1)
    return out


def shrinker_rhs(x, y):
    g, gp = y
    return [gp, (1 + gp * gp) * ((x / 2 - 1 / x) * gp - g / 2)]


# --------------------------------------------------------------------------
# series


@pytest.mark.parametrize("b", [0.5, 1.0, 2.0, 3.0])
def test_a2_is_minus_b_over_8(b):
    assert rot.series_coefficients(b, 8)[1] == pytest.approx(-b / 8, abs=1e-12)


def test_sphere_series_is_binomial_expansion():
    coeffs = rot.series_coefficients(2.0, 16, exact=True)
    assert coeffs == sphere_series(9)


def test_plane_series_vanishes():
    assert rot.series_coefficients(0.0, 10) == [0.0] * 6


def test_b1_coefficients_frozen():
    # a4 = -(b/256)(1 + b^2/4) by hand substitution of the quartic ansatz
    c = rot.series_coefficients(1.0, 8, exact=True)
    assert c[:3] == [1, Fraction(-1, 8), Fraction(-5, 1024)]
    assert c[3] == Fraction(-17, 49152)


@given(st.floats(-5, 5, allow_nan=False))
def test_a4_closed_form(b):
    a4 = rot.series_coefficients(b, 8)[2]
    assert a4 == pytest.approx(-(b / 256) * (1 + b * b / 4), rel=1e-12, abs=1e-15)


def test_published_a4_disagrees_with_sphere():
    assert rot.published_a4(2.0) == -1 / 32
    assert rot.series_coefficients(2.0, 8)[2] == -1 / 64


@pytest.mark.parametrize("b", [0.5, 1.0, 3.0])
def test_series_ode_residual_slope(b):
    xs = np.geomspace(1e-3, 1e-1, 9)
    res = [abs(rot.series_ode_residual(b, 8, x)) for x in xs]
    slope = np.polyfit(np.log(xs), np.log(res), 1)[0]
    assert slope >= 6.8


def test_bad_order_rejected():
    with pytest.raises(DomainError):
        rot.series_coefficients(1.0, 5)
    with pytest.raises(DomainError):
        rot.series_coefficients(1.0, 2)


def test_taylor_profile_examples():
    st_ = rot.taylor_profile(2.0, 0.1)
    assert abs(st_.gamma - math.sqrt(3.99)) < 1e-6
    assert rot.taylor_profile(0.7, 0.0) == rot.ProfileState(0.0, 0.7, 0.0)
    with pytest.raises(DomainError, match="integrate_graph"):
        rot.taylor_profile(1.0, 0.2)


def test_taylor_profile_against_ode_oracle():
    """b=1 at x=0.1 against scipy integration started at x=1e-4."""
    x0 = 1e-4
    y0 = [1 - x0 ** 2 / 8, -x0 / 4]
    ref = solve_ivp(shrinker_rhs, (x0, 0.1), y0, method="DOP853", rtol=1e-13, atol=1e-14)
    st_ = rot.taylor_profile(1.0, 0.1)
    assert abs(st_.gamma - ref.y[0, -1]) < 1e-9
    a4 = rot.series_coefficients(1.0, 8)[2]
    assert st_.gamma == pytest.approx(1 - 0.00125 + a4 * 1e-4, abs=1e-9)


# --------------------------------------------------------------------------
# integration


def test_sphere_preserved():
    curve = rot.integrate_graph(2.0, 1.9)
    err = np.max(np.abs(curve.values[:, 0] - np.sqrt(4 - curve.param ** 2)))
    assert err < 1e-8
    assert curve.events[-1][0] == "max_reached"


def test_plane_preserved():
    curve = rot.integrate_graph(0.0, 3.0)
    assert np.max(np.abs(curve.values)) < 1e-12


def test_b1_self_convergence():
    tol = 1e-10
    a = rot.integrate_graph(1.0, 1.0, tol)
    b = rot.integrate_graph(1.0, 1.0, tol / 2)
    assert a.event_names() == ["max_reached"]
    assert np.max(np.abs(a.values[-1] - b.values[-1])) < 10 * tol


def test_vertical_tangent_event_consistent():
    curve = rot.integrate_graph(2.0, 3.0)
    assert curve.event_names() == ["vertical_tangent"]
    # sphere: gamma' = -x / sqrt(4 - x^2) reaches -1000 at x = 2000 / sqrt(1e6 + 1)
    assert curve.events[0][1] == pytest.approx(2000 / math.sqrt(1e6 + 1), abs=1e-10)


def test_samples_strictly_ordered():
    curve = rot.integrate_graph(1.0, 1.5)
    assert np.all(np.diff(curve.param) > 0)
    states = curve.samples
    assert isinstance(states[0], rot.ProfileState)


def test_x_end_below_switch_rejected():
    with pytest.raises(DomainError):
        rot.integrate_graph(1.0, 0.005)


def test_arclength_sphere():
    start = rot.ArcState(0.0, 1.0, math.sqrt(3), math.atan2(-1 / math.sqrt(3), 1))
    curve = rot.integrate_arclength(start, 3.0)
    r2 = curve.values[:, 0] ** 2 + curve.values[:, 1] ** 2
    assert np.max(np.abs(r2 - 4)) < 1e-8


def test_arclength_plane_line():
    curve = rot.integrate_arclength(rot.ArcState(0.0, 0.5, 0.0, 0.0), 2.0)
    assert np.max(np.abs(curve.values[:, 1:])) < 1e-14


def test_arclength_unit_tangent():
    start = rot.graph_to_arc(rot.taylor_profile(1.0, 0.05))
    curve = rot.integrate_arclength(start, 1.0)
    s = np.linspace(0, 1, 2001)
    xy = np.array([curve(t)[:2] for t in s])
    th = np.array([curve(t)[2] for t in s])
    mid = 0.5 * (th[1:] + th[:-1])
    chord = np.diff(xy, axis=0) / np.diff(s)[:, None]
    assert np.max(np.abs(chord - np.c_[np.cos(mid), np.sin(mid)])) < 1e-6


def test_arclength_axis_start_rejected():
    with pytest.raises(DomainError):
        rot.integrate_arclength(rot.ArcState(0.0, 0.0, 1.0, 0.0), 1.0)


@pytest.mark.parametrize("b", [0.5, 1.0, 3.0])
def test_chart_consistency(b):
    graph = rot.integrate_graph(b, 1.0)
    arc = rot.integrate_arclength_to_x(rot.graph_to_arc(graph.state_at(0.05)), 1.0)
    xs = np.linspace(0.05, 1.0, 120)
    yg = np.array([graph.state_at(x).gamma for x in xs])
    assert np.max(np.abs(rot.arc_heights_at(arc, xs) - yg)) < 1e-8


# --------------------------------------------------------------------------
# curvature


def test_sphere_curvature():
    cs = rot.curvature_sample(rot.ProfileState(1.0, math.sqrt(3), -1 / math.sqrt(3)))
    assert cs.k1 == pytest.approx(0.5, abs=1e-14)
    assert cs.k2 == pytest.approx(0.5, abs=1e-14)
    assert cs.H == pytest.approx(1.0, abs=1e-14)
    assert cs.phi_norm < 1e-14 and cs.tangency_defect < 1e-14


def test_plane_curvature():
    cs = rot.curvature_sample(rot.ProfileState(0.7, 0.0, 0.0))
    assert (cs.k1, cs.k2, cs.H, cs.F_val) == (0.0, 0.0, 0.0, 0.0)


def test_cubic_coefficient_of_F():
    # F = (b/16)(1 - b^2/4) x^3 + O(x^5) from the series
    cs = rot.curvature_sample(rot.taylor_profile(1.0, 0.1))
    c3 = (1 / 16) * (1 - 1 / 4)
    assert cs.F_val / 0.1 ** 3 == pytest.approx(c3, rel=0.02)


def test_curvature_needs_positive_x():
    with pytest.raises(DomainError):
        rot.curvature_sample(rot.ProfileState(0.0, 1.0, 0.0))


@given(st.floats(0.05, 3.0), st.floats(-3, 3), st.floats(-20, 20))
def test_curvature_sample_invariants(x, g, gp):
    cs = rot.curvature_sample(rot.ProfileState(x, g, gp))
    assert cs.phi_norm == pytest.approx(abs(cs.k1 - cs.k2) / math.sqrt(2), rel=1e-9, abs=1e-12)
    assert cs.tangency_defect >= 0
    assert cs.H ** 2 <= cs.x_norm_sq / 4 + 1e-12
    assert cs.tangency_defect == pytest.approx(cs.x_norm_sq - 4 * cs.H ** 2, abs=1e-9)


@given(st.floats(0.2, 4.0).filter(lambda b: abs(b - 2) > 1e-3), st.floats(0.02, 0.1))
def test_series_curvature_matches_direct(b, x):
    a = rot.series_curvature(b, x)
    d = rot.curvature_sample(rot.taylor_profile(b, x))
    assert a.k1 == pytest.approx(d.k1, rel=1e-9)
    assert a.H == pytest.approx(d.H, rel=1e-9)
    assert a.F_val == pytest.approx(d.F_val, rel=1e-5, abs=1e-14)


def test_umbilic_equivalence_along_profile():
    curve = rot.integrate_graph(1.0, 1.0)
    for x in (0.2, 0.5, 0.9):
        cs = curve.sample_at(x)
        assert (abs(cs.F_val) < 1e-12) == (abs(cs.k1 - cs.k2) < 1e-12)


# --------------------------------------------------------------------------
# umbilics and the hypothesis ratio


def test_umbilic_scan_sphere_and_plane():
    assert rot.umbilic_scan(rot.integrate_graph(2.0, 1.9)).totally_umbilic
    assert rot.umbilic_scan(rot.integrate_graph(0.0, 1.0)).totally_umbilic


def test_umbilic_scan_b1_axis_only():
    scan = rot.umbilic_scan(rot.integrate_graph(1.0, 1.0))
    assert not scan.totally_umbilic
    assert scan.locations == [0.0]
    # fine oracle scan: F keeps one sign on (0, 1]
    curve = rot.integrate_graph(1.0, 1.0)
    F = [curve.sample_at(x).F_val for x in np.linspace(1e-3, 1.0, 4000)]
    assert min(F) > 0


def test_ratio_field():
    zero_H = rot.CurvatureSample(0.1, -0.1, 0.0, 0.2, 1.0, 1.0, 0.3)
    assert rot.ratio_field(zero_H) == 0.0
    with pytest.raises(UmbilicError):
        rot.ratio_field(rot.CurvatureSample(0.5, 0.5, 1.0, 0.0, 4.0, 0.0, 0.0))
    r1 = 0.05 * rot.ratio_field(rot.series_curvature(1.0, 0.05))
    r2 = 0.025 * rot.ratio_field(rot.series_curvature(1.0, 0.025))
    assert r1 == pytest.approx(r2, rel=0.05)


@pytest.mark.parametrize("b", [0.5, 1.0, 3.0])
def test_axis_ratio_limit(b):
    rep = rot.axis_ratio_limit(b)
    assert rep.limit > 0
    assert rep.stability < 1e-4
    assert rep.limit == pytest.approx(rep.series_prediction, rel=1e-4)
    assert rep.limit == pytest.approx(AXIS_LIMIT, rel=1e-6)


def test_axis_ratio_limit_rejects_umbilic_profiles():
    for b in (0.0, 2.0):
        with pytest.raises(DomainError):
            rot.axis_ratio_limit(b)


def test_axis_limit_published_formula_reported():
    rep = rot.axis_ratio_limit(1.0)
    assert rep.published_value == pytest.approx(32 * math.sqrt(2) * 0.75 / 1.25)


def test_axis_limit_sequence_converges_for_b3():
    xs = [0.1 * 2.0 ** -j for j in range(8)]
    vals = [x * rot.ratio_field(rot.series_curvature(3.0, x)) for x in xs]
    diffs = np.abs(np.diff(vals))
    assert np.all(diffs[1:] < diffs[:-1])
    assert vals[-1] > 0


def test_lp_integral_monotone_in_delta():
    vals = [rot.lp_integral(1.0, 3.0, d, 0.2) for d in (0.02, 0.01, 0.005)]
    assert vals[0] < vals[1] < vals[2]


def test_lp_integral_rejects_p2():
    with pytest.raises(DomainError, match="p must exceed 2"):
        rot.lp_integral(1.0, 2.0, 0.01, 0.2)


def test_lp_slope_listed_ladder():
    slope, _ = rot.lp_divergence_exponent(1.0, 3.0, [0.02, 0.01, 0.005, 0.0025], 0.2)
    assert slope == pytest.approx(-1.0, abs=0.05)


@pytest.mark.parametrize("b,p", [(1.0, 2.5), (1.0, 3.0), (3.0, 3.0)])
def test_lp_divergence_law(b, p):
    slope, _ = rot.lp_divergence_exponent(b, p, [1e-4, 5e-5, 2.5e-5, 1.25e-5], 0.2)
    assert slope == pytest.approx(2 - p, abs=0.05)


@pytest.mark.parametrize("b", [0.5, 1.0, 3.0])
def test_zero_order_report(b):
    rep = rot.zero_order_report(b)
    assert rep.phi_sq_order == pytest.approx(4, abs=0.1)
    assert rep.defect_h2_order == pytest.approx(2, abs=0.1)
    assert rep.criterion == pytest.approx(2, abs=0.2)


def test_zero_order_report_rejects_sphere():
    with pytest.raises(DomainError):
        rot.zero_order_report(2.0)


@pytest.mark.parametrize("b", [0.5, 1.0, 3.0])
def test_axis_H_bounded_away_from_zero(b):
    assert abs(rot.series_curvature(b, 1e-4).H) > 1e-3


@pytest.mark.parametrize("b", [0.5, 1.0, 3.0, 5.0])
def test_tangency_defect_limits(b):
    assert rot.series_curvature(b, 1e-4).tangency_defect < 1e-6
    curve = rot.integrate_graph(b, 1.0)
    assert all(curve.sample_at(x).tangency_defect > 0
               for x in np.linspace(0.05, curve.param[-1], 20))


# --------------------------------------------------------------------------
# shooting


def test_shoot_sphere_closes():
    row, _ = rot.shoot_one(2.0)
    assert row["class"] == "closed: sphere"


def test_shoot_classes_differ_across_transition():
    rows = rot.shoot_profile((0.1, 5.0), 2)
    assert rows[0]["class"] != rows[1]["class"]


def test_shoot_empty_range():
    assert rot.shoot_profile((1.0, 0.5), 4) == []


def test_convergence_error_carries_estimate():
    err = ConvergenceError("x", best_estimate=1.5, error_estimate=0.1)
    assert err.best_estimate == 1.5 and err.error_estimate == 0.1
