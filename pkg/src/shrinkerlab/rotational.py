"""Rotational self-shrinkers: profile ODE, axis series, curvature diagnostics.

A surface of revolution about the vertical axis with profile graph
``(x, gamma(x))`` is a self-shrinker iff

    gamma'' = (1 + gamma'^2) * ((x/2 - 1/x) * gamma' - gamma/2).

The axis ``x = 0`` is a regular singular point, so integration starts a
short distance away from it using the even power series solution with
``gamma(0) = b``, ``gamma'(0) = 0``.

Conventions: the profile normal is ``N = (gamma', -1) / sqrt(1 + gamma'^2)``
and ``-2H = <X, N>``; the traceless norm is ``|Phi| = |k1 - k2| / sqrt(2)``.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional

import numpy as np
from scipy import integrate as sp_integrate
from scipy.optimize import brentq

from .errors import ConvergenceError, DomainError, UmbilicError
from .integrator import EventSpec, dopri5
from .util import loglog_fit, richardson

SWITCH_X = 1e-2
TRUST_RADIUS = 0.1
VERTICAL_SLOPE = 1e3
SERIES_ORDER = 16
DEFAULT_TOL = 1e-12
SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class ProfileState:
    x: float
    gamma: float
    gamma_p: float


@dataclass(frozen=True)
class ArcState:
    s: float
    x: float
    y: float
    theta: float


@dataclass(frozen=True)
class CurvatureSample:
    k1: float
    k2: float
    H: float
    phi_norm: float
    x_norm_sq: float
    tangency_defect: float
    F_val: float


@dataclass(frozen=True)
class ProfileCurve:
    """Sampled solution of the profile equation in one chart.

    ``param`` is ``x`` in the graph chart and arclength ``s`` in the arclength
    chart; ``values`` holds ``(gamma, gamma')`` or ``(x, y, theta)`` per sample.
    ``b`` is set when the curve was started on the axis.
    """

    chart: str
    param: np.ndarray
    values: np.ndarray
    events: tuple = ()
    b: Optional[float] = None
    status: str = "completed"
    _solution: object = field(default=None, repr=False, compare=False)

    @property
    def samples(self):
        if self.chart == "graph":
            return [ProfileState(float(x), float(g), float(gp))
                    for x, (g, gp) in zip(self.param, self.values)]
        return [ArcState(float(s), float(x), float(y), float(th))
                for s, (x, y, th) in zip(self.param, self.values)]

    def __call__(self, t):
        """Dense output in the curve's own parameter."""
        return self._solution(t)

    def state_at(self, x):
        """Graph-chart state at ``x``; uses the axis series below the trust radius."""
        if self.chart != "graph":
            raise DomainError("state_at needs a graph-chart curve")
        if self.b is not None and 0 <= x <= min(TRUST_RADIUS, self.param[-1]):
            return taylor_profile(self.b, x)
        lo, hi = self.param[0], self.param[-1]
        if not lo - 1e-15 <= x <= hi + 1e-15:
            raise DomainError(f"x={x} outside integrated range [{lo}, {hi}]")
        g, gp = self._solution(x)
        return ProfileState(float(x), float(g), float(gp))

    def sample_at(self, x):
        """Curvature sample at ``x``; cancellation-free series form near the axis."""
        if self.b is not None and 0 < x <= min(TRUST_RADIUS, self.param[-1]):
            return series_curvature(self.b, x)
        return curvature_sample(self.state_at(x))

    def event_names(self):
        return [kind for kind, _ in self.events]


# --------------------------------------------------------------------------
# Axis series


@lru_cache(maxsize=256)
def _series_exact(b, order):
    """Exact rational coefficients a_0..a_order (odd ones are zero)."""
    bq = Fraction(b)
    a = [Fraction(0)] * (order + 3)
    a[0] = bq
    for m in range(0, order - 1, 2):
        # gamma'^2 up to degree m
        gp = [Fraction(0)] * (m + 1)
        for n in range(1, m + 2):
            if n - 1 <= m:
                gp[n - 1] = n * a[n]
        gp2 = [Fraction(0)] * (m + 1)
        for i, gi in enumerate(gp):
            if gi:
                for j in range(0, m + 1 - i):
                    gp2[i + j] += gi * gp[j]
        # bracket (x/2 - 1/x) gamma' - gamma/2, coefficients of degree <= m-2
        s = [Fraction(j - 1, 2) * a[j] - (j + 2) * a[j + 2] for j in range(0, m - 1)]
        nonlinear = sum((gp2[i] * s[m - i] for i in range(2, m + 1) if m - i < len(s)),
                        Fraction(0))
        a[m + 2] = (Fraction(m - 1, 2) * a[m] + nonlinear) / (m + 2) ** 2
    return tuple(a[: order + 1])


def series_coefficients(b, order=8, exact=False):
    """Even Taylor coefficients (a0, a2, a4, ...) of the axis solution.

    The recursion substitutes the truncated series into the ODE and matches
    powers of ``x``; it runs in exact rational arithmetic on the binary value
    of ``b``. With ``exact=True`` the coefficients are returned as
    ``Fraction`` objects.
    """
    if order < 4 or order % 2:
        raise DomainError("order must be an even integer >= 4")
    b = float(b)
    if not math.isfinite(b):
        raise DomainError("b must be finite")
    coeffs = _series_exact(b, order)[::2]
    return list(coeffs) if exact else [float(c) for c in coeffs]


def series_ode_residual(b, order, x):
    """ODE residual of the truncated series at ``x``, evaluated exactly.

    Floating point cannot resolve residuals of size x**order near the axis
    (the terms themselves are O(b)), so both the coefficients and ``x`` are
    handled as rationals and only the final value is rounded.
    """
    a = _series_exact(float(b), order)
    xq = Fraction(x)
    g = sum(c * xq ** n for n, c in enumerate(a))
    gp = sum(n * c * xq ** (n - 1) for n, c in enumerate(a) if n >= 1)
    gpp = sum(n * (n - 1) * c * xq ** (n - 2) for n, c in enumerate(a) if n >= 2)
    rhs = (1 + gp * gp) * ((xq / 2 - 1 / xq) * gp - g / 2)
    return float(gpp - rhs)


def published_a4(b):
    """x^4 coefficient -(b/256)(3 + b^2/4) as commonly quoted for this expansion.

    Kept only for side-by-side reporting. It does not solve the profile ODE:
    at b = 2 it gives -1/32 while the sphere sqrt(4 - x^2) needs -1/64.
    """
    return -(b / 256.0) * (3.0 + b * b / 4.0)


def published_axis_limit(b):
    """Closed form 32 sqrt(2) |1 - b^2/4| / (1 + b^2/4), reported for comparison."""
    return 32.0 * SQRT2 * abs(1.0 - b * b / 4.0) / (1.0 + b * b / 4.0)


def taylor_profile(b, x, order=SERIES_ORDER, trust_radius=TRUST_RADIUS):
    """Evaluate the axis series and its derivative at ``x``."""
    if abs(x) > trust_radius:
        raise DomainError(
            f"|x|={abs(x)} beyond the series trust radius {trust_radius}; "
            "use integrate_graph")
    a = np.array([float(c) for c in _series_exact(float(b), order)])
    g = np.polynomial.polynomial.polyval(x, a)
    gp = np.polynomial.polynomial.polyval(x, a[1:] * np.arange(1, order + 1))
    return ProfileState(float(x), float(g), float(gp))


@lru_cache(maxsize=256)
def _curvature_polys(b, order):
    """Float coefficient arrays of gamma, gamma'/x, F, x + gamma gamma', gamma - x gamma'."""
    a = _series_exact(b, order)
    n_max = order - 1
    gp = [n * a[n] for n in range(1, order + 1)]            # gamma', degree n-1
    gp_over_x = [gp[n + 1] for n in range(0, len(gp) - 1)]  # gamma'/x (gp[0] = 0)
    F = [Fraction(0)] * (n_max + 1)
    for n in range(n_max + 1):
        left = (2 - n) * a[n - 1] if n >= 1 else Fraction(0)
        right = 4 * (n + 1) * a[n + 1] if n + 1 <= order else Fraction(0)
        F[n] = left + right
    D = [Fraction(0)] * (n_max + 1)
    D[1] += 1
    for i in range(order + 1):
        for j in range(len(gp)):
            if i + j <= n_max:
                D[i + j] += a[i] * gp[j]
    E = [(1 - n) * a[n] for n in range(order + 1)]
    as_float = lambda seq: np.array([float(c) for c in seq])
    return (as_float(a), as_float(gp), as_float(gp_over_x), as_float(F),
            as_float(D), as_float(E))


def series_curvature(b, x, order=SERIES_ORDER):
    """Curvature sample near the axis from exact series products.

    F, x + gamma gamma' and gamma - x gamma' vanish to high order or nearly
    cancel at small x, so they are expanded as series first instead of being
    formed from rounded gamma and gamma'.
    """
    if not 0 < x <= TRUST_RADIUS:
        raise DomainError(f"series curvature needs 0 < x <= {TRUST_RADIUS}")
    pv = np.polynomial.polynomial.polyval
    a, gp_c, gpx_c, F_c, D_c, E_c = _curvature_polys(float(b), order)
    g = pv(x, a)
    gp = pv(x, gp_c)
    w = math.sqrt(1.0 + gp * gp)
    F = pv(x, F_c)
    D = pv(x, D_c)
    Ev = pv(x, E_c)
    k1 = -pv(x, gpx_c) / w
    H = Ev / (2.0 * w)
    return CurvatureSample(
        k1=float(k1), k2=float(H - k1), H=float(H),
        phi_norm=float(abs(F) / (2 * SQRT2 * x * w)),
        x_norm_sq=float(x * x + g * g),
        tangency_defect=float(D * D / (w * w)),
        F_val=float(F),
    )


# --------------------------------------------------------------------------
# Integration


def _graph_rhs(x, y):
    g, gp = y
    return np.array([gp, (1.0 + gp * gp) * ((0.5 * x - 1.0 / x) * gp - 0.5 * g)])


def _arc_rhs(s, y):
    x, yy, th = y
    c, sn = math.cos(th), math.sin(th)
    return np.array([c, sn, (0.5 * x - 1.0 / x) * sn - 0.5 * yy * c])


def integrate_graph(b, x_end, tol=DEFAULT_TOL, x0=SWITCH_X, max_steps=200_000):
    """Integrate the profile graph from the axis value ``gamma(0) = b``.

    The series supplies the state at ``x0``; an embedded 5(4) pair carries it
    to ``x_end``. Events: ``vertical_tangent`` (|gamma'| > 1e3, terminal, the
    caller switches to the arclength chart), ``height_zero`` (recorded) and
    ``max_reached``.
    """
    if x_end <= x0:
        raise DomainError(f"x_end={x_end} must exceed the switch point {x0}")
    start = taylor_profile(b, x0)
    events = [
        EventSpec("vertical_tangent", lambda x, y: y[1] * y[1] - VERTICAL_SLOPE ** 2),
        EventSpec("height_zero", lambda x, y: y[0], terminal=False),
    ]
    sol = dopri5(_graph_rhs, (x0, x_end), [start.gamma, start.gamma_p],
                 rtol=tol, atol=tol, events=events, max_steps=max_steps)
    found = [(e.name, float(e.t)) for e in sol.events]
    if sol.status == "completed":
        found.append(("max_reached", float(sol.t_final)))
    return ProfileCurve("graph", sol.t, sol.y, tuple(found), float(b), sol.status, sol)


def graph_to_arc(state, s=0.0):
    """Arclength-chart state through a graph point (tangent pointing to +x)."""
    return ArcState(s, state.x, state.gamma, math.atan(state.gamma_p))


def integrate_arclength(start, s_end, tol=DEFAULT_TOL, x_stop=None, radius_cap=None,
                        max_steps=200_000):
    """Integrate the profile in arclength variables ``(x, y, theta)``.

    ``theta' = (x/2 - 1/x) sin(theta) - (y/2) cos(theta)`` is the shrinker
    condition ``k1 + k2 = -<X, N>/2`` with ``k1 = -sin(theta)/x`` and
    ``k2 = -theta'``; wherever ``cos(theta) > 0`` the curve is a graph solving
    the profile ODE. Terminal events: ``axis_cross_x`` when ``x`` falls to
    ``x_stop`` (default ``start.x / 2``), ``escape`` past ``radius_cap`` and
    ``x_target`` if set via :func:`integrate_arclength_to_x`.
    """
    if start.x <= 0:
        raise DomainError("arclength integration must start off the axis")
    x_stop = 0.5 * start.x if x_stop is None else x_stop
    events = [
        EventSpec("axis_cross_x", lambda s, y: y[0] - x_stop, direction=-1),
        EventSpec("height_zero", lambda s, y: y[1], terminal=False),
        EventSpec("vertical_tangent", lambda s, y: math.cos(y[2]), terminal=False),
    ]
    if radius_cap is not None:
        events.append(EventSpec("escape", lambda s, y: y[0] ** 2 + y[1] ** 2 - radius_cap ** 2,
                                direction=1))
    return _run_arc(start, s_end, tol, events, max_steps)


def integrate_arclength_to_x(start, x_target, tol=DEFAULT_TOL, s_max=50.0):
    """Arclength integration that stops when ``x`` first reaches ``x_target``."""
    events = [
        EventSpec("x_target", lambda s, y: y[0] - x_target, direction=1),
        EventSpec("axis_cross_x", lambda s, y: y[0] - 0.5 * start.x, direction=-1),
    ]
    return _run_arc(start, start.s + s_max, tol, events, 200_000)


def _run_arc(start, s_end, tol, events, max_steps):
    sol = dopri5(_arc_rhs, (start.s, s_end), [start.x, start.y, start.theta],
                 rtol=tol, atol=tol, events=events, max_steps=max_steps)
    found = [(e.name, float(e.t)) for e in sol.events]
    if sol.status == "completed":
        found.append(("max_reached", float(sol.t_final)))
    return ProfileCurve("arclength", sol.t, sol.y, tuple(found), None, sol.status, sol)


def arc_heights_at(curve, xs):
    """Heights ``y`` of an arclength curve at abscissae ``xs``.

    Assumes ``x(s)`` is increasing over the covered range (``cos(theta) > 0``).
    """
    s, xv = curve.param, curve.values[:, 0]
    out = []
    for xt in xs:
        i = int(np.searchsorted(xv, xt))
        i = min(max(i, 1), len(xv) - 1)
        # the last segment spans the full step even when an event truncated it
        lo, hi = s[i - 1], curve._solution.segments[i - 1][1]
        if xv[i - 1] == xt:
            out.append(float(curve.values[i - 1, 1]))
            continue
        si = brentq(lambda t: curve(t)[0] - xt, lo, hi, xtol=1e-15, rtol=1e-15)
        out.append(float(curve(si)[1]))
    return np.array(out)


# --------------------------------------------------------------------------
# Curvature diagnostics


def curvature_sample(state):
    """Principal curvatures and derived quantities at a graph point.

    gamma'' is taken from the ODE, never by differencing.
    """
    x, g, gp = state.x, state.gamma, state.gamma_p
    if x <= 0:
        raise DomainError("curvature_sample needs x > 0; use series_curvature near the axis")
    w2 = 1.0 + gp * gp
    w = math.sqrt(w2)
    gpp = w2 * ((0.5 * x - 1.0 / x) * gp - 0.5 * g)
    k1 = -gp / (x * w)
    k2 = -gpp / (w2 * w)
    F = x * g - (x * x - 4.0) * gp
    return CurvatureSample(
        k1=k1, k2=k2,
        H=-(x * gp - g) / (2.0 * w),
        phi_norm=abs((x * x - 4.0) * gp - x * g) / (2.0 * SQRT2 * x * w),
        x_norm_sq=x * x + g * g,
        tangency_defect=(x + g * gp) ** 2 / w2,
        F_val=F,
    )


def ratio_field(sample):
    """sqrt((|X|^2 - 4H^2) H^2) / |Phi|."""
    if sample.phi_norm == 0.0:
        raise UmbilicError("ratio undefined at an umbilic (|Phi| = 0)")
    return math.sqrt(sample.tangency_defect * sample.H ** 2) / sample.phi_norm


@dataclass
class UmbilicScan:
    locations: list
    totally_umbilic: bool = False


def umbilic_scan(curve, refine=8, totally_umbilic_rtol=1e-8):
    """Umbilic abscissae of a graph-chart curve (zeros of F).

    The axis point is listed first when the curve starts on the axis. If F is
    negligible everywhere relative to its two terms the curve is reported as
    totally umbilic instead.
    """
    if curve.chart != "graph":
        raise DomainError("umbilic_scan needs a graph-chart curve")
    xs = [curve.param[0]]
    for a, b in zip(curve.param[:-1], curve.param[1:]):
        xs.extend(np.linspace(a, b, refine + 1)[1:])
    xs = np.array(xs)

    def F_and_scale(x):
        st = curve.state_at(x) if curve.b is None or x > TRUST_RADIUS else None
        if st is None:
            cs = series_curvature(curve.b, x)
            g, gp = taylor_profile(curve.b, x).gamma, taylor_profile(curve.b, x).gamma_p
            return cs.F_val, abs(x * g) + abs((x * x - 4) * gp)
        F = st.x * st.gamma - (st.x ** 2 - 4.0) * st.gamma_p
        return F, abs(st.x * st.gamma) + abs((st.x ** 2 - 4.0) * st.gamma_p)

    vals = np.array([F_and_scale(x) for x in xs])
    F, scale = vals[:, 0], vals[:, 1]
    ref = max(float(scale.max()), 1e-300)
    if float(np.abs(F).max()) <= totally_umbilic_rtol * ref:
        return UmbilicScan([], totally_umbilic=True)

    found = [0.0] if curve.b is not None else []
    for i in range(len(xs) - 1):
        if F[i] == 0.0:
            found.append(float(xs[i]))
            continue
        if F[i] * F[i + 1] < 0:
            lo, hi, flo = xs[i], xs[i + 1], F[i]
            for _ in range(200):
                mid = 0.5 * (lo + hi)
                fm = F_and_scale(mid)[0]
                if abs(fm) < 1e-10 * ref or hi - lo < 1e-15:
                    break
                if np.sign(fm) == np.sign(flo):
                    lo, flo = mid, fm
                else:
                    hi = mid
            found.append(float(0.5 * (lo + hi)))
    return UmbilicScan(found)


@dataclass
class AxisLimitReport:
    b: float
    limit: float
    stability: float
    series_prediction: float
    published_value: float
    xs: list
    values: list


def series_axis_prediction(b, order=SERIES_ORDER):
    """Leading-coefficient prediction of lim x * ratio as x -> 0.

    x + gamma gamma' ~ c1 x, |H| -> |b|/2 and F ~ c3 x^3, so
    x * ratio -> sqrt(2) |b| |c1| / |c3|.
    """
    _, _, _, F_c, D_c, _ = _curvature_polys(float(b), order)
    c1, c3 = D_c[1], F_c[3]
    return SQRT2 * abs(b) * abs(c1) / abs(c3)


def axis_ratio_limit(b, x_start=0.1, levels=6, rtol=1e-4):
    """Richardson-extrapolated limit of x * ratio_field as x -> 0+.

    x * ratio is even in x, so the table eliminates powers of x^2 along the
    sequence x_start * 2^-j.
    """
    b = float(b)
    if b == 0.0 or abs(abs(b) - 2.0) < 1e-12:
        raise DomainError("b = 0 (plane) and b = 2 (sphere) have no finite axis ratio")
    xs = [x_start * 2.0 ** (-j) for j in range(levels)]
    vals = [x * ratio_field(series_curvature(b, x)) for x in xs]
    limit, diff = richardson(vals, ratio=2.0, order=2, power_step=2)
    stability = diff / abs(limit)
    if not math.isfinite(limit) or stability > rtol:
        raise ConvergenceError(f"axis ratio extrapolation unstable ({stability:.2e})",
                               best_estimate=limit, error_estimate=stability)
    return AxisLimitReport(b, float(limit), float(stability), series_axis_prediction(b),
                           published_axis_limit(b), xs, vals)


# --------------------------------------------------------------------------
# L^p divergence near the axis umbilic


@lru_cache(maxsize=32)
def _cached_profile(b, x_end, tol):
    return integrate_graph(b, x_end, tol)


def lp_integral(b, p, delta, eps, tol=1e-10):
    """2 pi * int_delta^eps ratio^p * x sqrt(1 + gamma'^2) dx on the b-profile."""
    if not p > 2:
        raise DomainError("p must exceed 2")
    if not 0 < delta < eps:
        raise DomainError("need 0 < delta < eps")
    curve = _cached_profile(float(b), max(float(eps), 2 * SWITCH_X), DEFAULT_TOL)
    if curve.param[-1] < eps:
        raise DomainError(f"profile stops at x={curve.param[-1]:.4g} before eps={eps}")

    def integrand(s):
        x = math.exp(s)
        cs = curve.sample_at(x)
        gp = curve.state_at(x).gamma_p
        return ratio_field(cs) ** p * x * math.sqrt(1.0 + gp * gp) * x

    val, err = sp_integrate.quad(integrand, math.log(delta), math.log(eps),
                                 epsabs=0.0, epsrel=tol, limit=200)
    if not math.isfinite(val) or err > 1e3 * tol * abs(val):
        raise ConvergenceError("lp quadrature failed", best_estimate=2 * math.pi * val,
                               error_estimate=2 * math.pi * err)
    return 2.0 * math.pi * val


def lp_divergence_exponent(b, p, deltas, eps):
    """Least-squares slope of log lp_integral against log delta."""
    vals = [lp_integral(b, p, d, eps) for d in deltas]
    slope, _, _ = loglog_fit(deltas, vals)
    return slope, vals


@dataclass
class AxisOrderReport:
    b: float
    phi_sq_order: float
    defect_h2_order: float
    criterion: float
    criterion_below_two: bool
    radii: list
    residuals: tuple


def zero_order_report(b, radii=None):
    """Orders of |Phi|^2 and (|X|^2 - 4H^2) H^2 at the axis umbilic.

    Both come from log-log slopes against the distance x to the axis; the
    criterion value is their difference, which the rigidity statement needs
    below 2.
    """
    b = float(b)
    if b == 0.0 or abs(abs(b) - 2.0) < 1e-12:
        raise DomainError("b = 0 and b = 2 are totally umbilic")
    if radii is None:
        radii = [0.02 * 2.0 ** (-j) for j in range(5)]
    samples = [series_curvature(b, r) for r in radii]
    phi2 = [s.phi_norm ** 2 for s in samples]
    dh2 = [s.tangency_defect * s.H ** 2 for s in samples]
    o_phi, _, r_phi = loglog_fit(radii, phi2)
    o_dh, _, r_dh = loglog_fit(radii, dh2)
    crit = o_phi - o_dh
    return AxisOrderReport(b, o_phi, o_dh, crit, crit < 2.0, list(radii), (r_phi, r_dh))


# --------------------------------------------------------------------------
# Shooting harness


def shoot_one(b, s_max=40.0, radius_cap=8.0, tol=1e-10, max_steps=50_000):
    """Integrate the b-profile in arclength from the axis and classify it."""
    start_graph = taylor_profile(b, SWITCH_X)
    start = graph_to_arc(start_graph)
    curve = integrate_arclength(start, s_max, tol=tol, x_stop=0.5 * SWITCH_X,
                                radius_cap=radius_cap, max_steps=max_steps)
    names = curve.event_names()
    x_end, y_end, th_end = curve.values[-1]
    if "axis_cross_x" in names:
        smooth = abs(math.sin(th_end)) < 10 * SWITCH_X
        r2 = curve.values[:, 0] ** 2 + curve.values[:, 1] ** 2
        if smooth and float(np.max(np.abs(r2 - 4.0))) < 1e-6:
            kind = "closed: sphere"
        else:
            kind = "axis_return: smooth" if smooth else "axis_return: singular"
    elif "escape" in names:
        kind = "escape"
    elif curve.status == "step_underflow":
        kind = "step_underflow"
    elif "height_zero" in names:
        # no terminal outcome within the budget: classify by the first crossing
        first_turn = names.index("vertical_tangent") if "vertical_tangent" in names else len(names)
        kind = ("height_zero: graph" if names.index("height_zero") < first_turn
                else "height_zero: after turn")
    else:
        kind = "budget_exhausted"
    return {
        "b": float(b),
        "class": kind,
        "height_zero_crossings": names.count("height_zero"),
        "vertical_tangents": names.count("vertical_tangent"),
        "s_end": float(curve.param[-1]),
        "x_end": float(x_end),
        "y_end": float(y_end),
        "theta_end": float(th_end),
    }, curve


def shoot_profile(b_range, n, **kwargs):
    """Classification table over ``n`` evenly spaced b values in ``b_range``.

    An empty range (lower end above upper end) gives an empty table.
    """
    lo, hi = map(float, b_range)
    if hi < lo:
        return []
    if n < 2:
        raise DomainError("n must be >= 2")
    return [shoot_one(b, **kwargs)[0] for b in np.linspace(lo, hi, n)]
