"""Complex-analysis kernel behind the weak-holomorphy argument.

Covers the singular constant

    K_q = int_C dA(w) / |w (w - 1)|^q,   1 < q < 2,

the Cauchy-Pompeiu representation adapted to a zero of order k at the
origin, the differential inequality |h_zbar| <= phi G(|h|), and estimators
for the order of a zero (log-log slopes and winding numbers). Since
|dw ^ dwbar| = 2 dA, the same integral written with the 2-form is 2 K_q.

Area integrals use the Lebesgue measure dA = dx dy. With dz ^ dzbar =
-2i dA the adapted Cauchy-Pompeiu formula reads

    2 pi i h(xi) / xi^k = oint h / (z^k (z - xi)) dz
                          - 2i iint h_zbar / (z^k (z - xi)) dA.
"""

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import integrate as sp_integrate
from scipy.special import hyp2f1

from .errors import ConvergenceError, DegenerateCircleError, DomainError
from .util import loglog_fit


@dataclass(frozen=True)
class DiscDomain:
    center: complex = 0j
    radius: float = 1.0
    grid_n: int = 256

    def __post_init__(self):
        if not self.radius > 0:
            raise DomainError("radius must be positive")
        if self.grid_n < 16:
            raise DomainError("grid_n must be >= 16")

    def grid(self):
        """Cartesian sample points inside the closed disc."""
        t = np.linspace(-self.radius, self.radius, self.grid_n)
        zz = self.center + t[None, :] + 1j * t[:, None]
        return zz[np.abs(zz - self.center) <= self.radius * (1 + 1e-12)]


def wirtinger_zbar(h, z, step):
    """Centered-difference 1/2 (d/du + i d/dv) h with one Richardson step."""

    def d(s):
        du = (h(z + s) - h(z - s)) / (2 * s)
        dv = (h(z + 1j * s) - h(z - 1j * s)) / (2 * s)
        return 0.5 * (du + 1j * dv)

    return (4.0 * d(0.5 * step) - d(step)) / 3.0


@dataclass(frozen=True)
class FieldOnDisc:
    """A complex field ``h`` with its z-bar derivative.

    Both callables take and return complex numpy arrays.
    """

    h: Callable
    h_zbar: Callable
    provenance: str = "closed_form"
    fd_step: Optional[float] = None
    name: str = ""

    @classmethod
    def closed_form(cls, h, h_zbar, name=""):
        return cls(h, h_zbar, "closed_form", None, name)

    @classmethod
    def finite_difference(cls, h, step=1e-5, name=""):
        """Field whose z-bar derivative is differenced with ``step`` (default 1e-5 R for R=1)."""
        if not step > 0:
            raise DomainError("finite-difference step must be positive")
        return cls(h, lambda z: wirtinger_zbar(h, np.asarray(z, dtype=complex), step),
                   "finite_difference", step, name)

    def __mul__(self, other):
        """Product field, z-bar derivative by the Leibniz rule."""
        f, g = self, other
        prov = ("closed_form" if f.provenance == g.provenance == "closed_form"
                else "finite_difference")
        steps = [s for s in (f.fd_step, g.fd_step) if s is not None]
        return FieldOnDisc(
            lambda z: f.h(z) * g.h(z),
            lambda z: f.h_zbar(z) * g.h(z) + f.h(z) * g.h_zbar(z),
            prov, min(steps) if steps else None,
            f"{f.name}*{g.name}" if f.name and g.name else "",
        )


@dataclass(frozen=True)
class GrowthBound:
    phi: Callable
    G: Callable
    p: float
    limsup_ratio: Optional[float] = None

    def __post_init__(self):
        if not self.p > 2:
            raise DomainError("p must exceed 2")

    def check(self, ts, threshold=1e-3, tol=1e-12):
        """Validate G >= 0 and, if declared, G(t)/t <= limsup_ratio below ``threshold``."""
        ts = np.asarray(ts, dtype=float)
        g = np.asarray(self.G(ts), dtype=float)
        if np.any(g < 0):
            return False
        if self.limsup_ratio is not None:
            small = (ts > 0) & (ts < threshold)
            if np.any(g[small] / ts[small] > self.limsup_ratio + tol):
                return False
        return True


@dataclass
class ZeroOrderReport:
    order_loglog: float
    order_winding: Optional[int]
    fit_residual: float
    radii_used: list


# --------------------------------------------------------------------------
# K_q


@dataclass
class KqResult:
    value: float
    error: float
    parts: dict = field(default_factory=dict)


def _ring_mean(rho, q, shift, n_theta=128):
    """Integral over theta of |shift + rho e^{i theta}|^{-q} (trapezoid, periodic)."""
    th = np.linspace(0.0, 2 * np.pi, n_theta, endpoint=False)
    rho = np.atleast_1d(rho)
    w = shift + rho[:, None] * np.exp(1j * th)[None, :]
    return (2 * np.pi / n_theta) * np.sum(np.abs(w) ** (-q), axis=1)


def kq_disc_part(q, eps, centre=0, tol=1e-12):
    """Contribution of D_eps(0) or D_eps(1) to K_q.

    In polar coordinates about the singular point the radial weight is
    rho^(1-q); the substitution t = rho^(2-q) / (2-q) absorbs it, leaving a
    smooth integrand in t. The far factor |w - 1|^-q (or |w|^-q) is averaged
    over each circle by the periodic trapezoid rule.
    """
    if not 0 < eps < 1:
        raise DomainError("eps must lie in (0, 1)")
    # far factor |w - 1| about 0 is |-1 + rho e^it|; |w| about 1 is |1 + rho e^it|
    shift = -1.0 if centre == 0 else 1.0
    e = 2.0 - q
    t_max = eps ** e / e

    def f(t):
        rho = (e * t) ** (1.0 / e)
        return _ring_mean(rho, q, shift)[0]

    val, err = sp_integrate.quad(f, 0.0, t_max, epsabs=tol, epsrel=tol, limit=200)
    return val, err


def _annulus_part(q, eps, tol):
    """D_2(0) minus the two eps-discs, polar about 0.

    For rho within eps of 1 the disc around w = 1 removes |theta| < theta_c
    with cos(theta_c) = (rho^2 + 1 - eps^2) / (2 rho).
    """

    def inner(rho):
        if abs(rho - 1.0) < eps:
            c = (rho * rho + 1.0 - eps * eps) / (2.0 * rho)
            th0 = math.acos(min(1.0, max(-1.0, c)))
        else:
            th0 = 0.0
        g = lambda th: abs(rho * complex(math.cos(th), math.sin(th)) - 1.0) ** (-q)
        v, _ = sp_integrate.quad(g, th0, math.pi, epsabs=tol * 1e-2, epsrel=tol * 1e-2,
                                 limit=200)
        return 2.0 * v * rho ** (1.0 - q)

    total, err = 0.0, 0.0
    for a, b in ((eps, 1.0 - eps), (1.0 - eps, 1.0), (1.0, 1.0 + eps), (1.0 + eps, 2.0)):
        v, e = sp_integrate.quad(inner, a, b, epsabs=tol, epsrel=tol, limit=200)
        total += v
        err += e
    return total, err


def _exterior_part(q, rho_max, tol):
    """2 < |w| < rho_max, polar about 0 with u = log rho."""
    f = lambda u: math.exp(u * (2.0 - q)) * _ring_mean(math.exp(u), q, -1.0)[0]
    return sp_integrate.quad(f, math.log(2.0), math.log(rho_max), epsabs=tol,
                             epsrel=tol, limit=400)


def _tail_bounds(q, rho_max):
    """Lower/upper bounds for |w| > rho_max from |w| - 1 <= |w - 1| <= |w| + 1.

    With r = rho_max / s, int_rho_max^inf r^(1-q) (r -+ 1)^-q dr is
    rho_max^(2-2q) / a * 2F1(q, a; a + 1; +-1/rho_max), a = 2q - 2.
    """
    a = 2.0 * q - 2.0
    pre = 2 * np.pi * rho_max ** (-a) / a
    up = pre * hyp2f1(q, a, a + 1.0, 1.0 / rho_max)
    lo = pre * hyp2f1(q, a, a + 1.0, -1.0 / rho_max)
    return float(lo), float(up)


def kq_constant(q, tol=1e-6, eps=0.25):
    """K_q by the four-piece decomposition.

    Pieces: the eps-discs about 0 and 1 (radial substitution), the annulus
    D_2(0) minus those discs, the exterior 2 < |w| < rho_max, and the tail
    |w| > rho_max taken as the midpoint of its two analytic bounds. rho_max is
    chosen so that the half-width of the tail bracket is below tol / 4.
    """
    if not 1.0 < q < 2.0:
        raise DomainError("q must lie in (1, 2)")
    # half-width of the tail bracket is about 2 pi q rho^(1-2q) / (2q-1)
    rho_max = max(1e3, (8 * np.pi * q / ((2 * q - 1) * tol)) ** (1.0 / (2 * q - 1)))
    # pieces are cheap; loose quad tolerances give pessimistic error estimates
    part_tol = min(tol / 8, 1e-9)
    d0, e0 = kq_disc_part(q, eps, 0, part_tol)
    d1, e1 = kq_disc_part(q, eps, 1, part_tol)
    ann, ea = _annulus_part(q, eps, part_tol)
    ext, ee = _exterior_part(q, rho_max, part_tol)
    lo, up = _tail_bounds(q, rho_max)
    tail = 0.5 * (lo + up)
    value = d0 + d1 + ann + ext + tail
    error = e0 + e1 + ea + ee + 0.5 * (up - lo)
    parts = {"disc_0": d0, "disc_1": d1, "annulus": ann, "exterior": ext, "tail": tail,
             "eps": eps, "rho_max": rho_max}
    if not math.isfinite(value) or error > tol:
        raise ConvergenceError(f"K_q error estimate {error:.3e} exceeds tol {tol:.1e}",
                               best_estimate=value, error_estimate=error)
    return KqResult(float(value), float(error), parts)


def kq_monte_carlo(q, n_samples=10_000_000, seed=20240607, eps=0.25, chunk=1_000_000):
    """Importance-sampled Monte Carlo estimate of K_q over the same decomposition.

    Inside each eps-disc the radius is drawn with density ~ rho^(1-q), on the
    annulus about 0 likewise (points in the disc about 1 are rejected by
    zero weight), and outside |w| = 2 from a Pareto law ~ rho^(1-2q). Every
    weight is then bounded. Returns (estimate, standard error).
    """
    if not 1.0 < q < 2.0:
        raise DomainError("q must lie in (1, 2)")
    rng = np.random.default_rng(seed)
    e = 2.0 - q
    n_region = n_samples // 4
    means, variances = [], []

    def run(sampler):
        total = 0.0
        total_sq = 0.0
        done = 0
        while done < n_region:
            m = min(chunk, n_region - done)
            w = sampler(m)
            total += w.sum()
            total_sq += (w * w).sum()
            done += m
        mean = total / n_region
        var = max(total_sq / n_region - mean * mean, 0.0) / n_region
        return mean, var

    def angle(m):
        return np.exp(2j * np.pi * rng.random(m))

    norm_disc = 2 * np.pi * eps ** e / e

    def disc(shift):
        def sampler(m):
            rho = eps * rng.random(m) ** (1.0 / e)
            return norm_disc * np.abs(shift + rho * angle(m)) ** (-q)
        return sampler

    lo_e, hi_e = eps ** e, 2.0 ** e

    def annulus(m):
        rho = (lo_e + rng.random(m) * (hi_e - lo_e)) ** (1.0 / e)
        w = rho * angle(m)
        d = np.abs(w - 1.0)
        out = np.zeros(m)
        keep = d > eps
        out[keep] = (2 * np.pi * (hi_e - lo_e) / e) * d[keep] ** (-q)
        return out

    a = 2 * q - 2
    norm_ext = 2 * np.pi * 2.0 ** (-a) / a

    def exterior(m):
        rho = 2.0 * (1.0 - rng.random(m)) ** (-1.0 / a)
        w = rho * angle(m)
        return norm_ext * rho ** q * np.abs(w - 1.0) ** (-q)

    for sampler in (disc(-1.0), disc(1.0), annulus, exterior):
        mu, var = run(sampler)
        means.append(mu)
        variances.append(var)
    return float(sum(means)), float(math.sqrt(sum(variances)))


# --------------------------------------------------------------------------
# Cauchy-Pompeiu


def _bump(r):
    """C-infinity cutoff: 1 for r <= 1/2, 0 for r >= 1."""
    r = np.asarray(r, dtype=float)
    out = np.zeros_like(r)
    out[r <= 0.5] = 1.0
    mid = (r > 0.5) & (r < 1.0)
    s = 2.0 * r[mid] - 1.0   # in (0, 1)
    a = np.exp(-1.0 / (1.0 - s))
    b = np.exp(-1.0 / s)
    out[mid] = a / (a + b)
    return out


def _check_vanishing(field, k, r0):
    rs = r0 * np.array([1e-2, 1e-3, 1e-4])
    th = np.linspace(0, 2 * np.pi, 16, endpoint=False)
    vals = [np.max(np.abs(field.h(r * np.exp(1j * th)))) / r ** (k - 1) for r in rs]
    if not (vals[2] <= vals[1] <= vals[0] and vals[2] < 0.5 * vals[0] + 1e-300):
        raise DomainError("h(z)/z^(k-1) does not appear to vanish at 0")


@dataclass
class PompeiuTerms:
    lhs: complex
    boundary: complex
    area: complex
    residual: float
    area_change: float


def cauchy_pompeiu_terms(field, k, xi, domain, n_local=128):
    """Both sides of the adapted Cauchy-Pompeiu formula.

    The area integral is split with smooth cutoffs into a bulk part on a
    polar grid about the disc centre (midpoint rule in the radius with
    grid_n nodes, trapezoid in the angle) and two local parts in polar
    coordinates about 0 and xi (Gauss-Legendre in the radius), where the
    factors 1/z^k and 1/(z - xi) are singular. The local disc radius is
    0.45 min(|xi|, dist(xi, boundary), dist(0, boundary)).
    """
    xi = complex(xi)
    if xi == 0:
        raise DomainError("xi must be nonzero")
    if not isinstance(k, (int, np.integer)) or k < 1:
        raise DomainError("k must be a positive integer")
    c, R = complex(domain.center), domain.radius
    if abs(xi - c) >= R or abs(c) >= R:
        raise DomainError("both 0 and xi must lie inside the disc")
    _check_vanishing(field, k, min(abs(xi), R - abs(c)))

    lhs = 2j * np.pi * complex(field.h(np.array([xi]))[0]) / xi ** k

    # boundary: trapezoid on the circle, exponentially accurate
    m = 4 * domain.grid_n
    th = np.linspace(0, 2 * np.pi, m, endpoint=False)
    zb = c + R * np.exp(1j * th)
    dz = 1j * R * np.exp(1j * th) * (2 * np.pi / m)
    boundary = complex(np.sum(field.h(zb) / (zb ** k * (zb - xi)) * dz))

    eps = 0.45 * min(abs(xi), R - abs(xi - c), R - abs(c))

    def integrand(z):
        return field.h_zbar(z) / (z ** k * (z - xi))

    def cutoff_rest(z):
        return 1.0 - _bump(np.abs(z) / eps) - _bump(np.abs(z - xi) / eps)

    def bulk(n):
        h = R / n
        rho = (np.arange(n) + 0.5) * h
        nt = 2 * n
        t = np.linspace(0, 2 * np.pi, nt, endpoint=False)
        z = c + rho[:, None] * np.exp(1j * t)[None, :]
        w = cutoff_rest(z)
        f = np.zeros_like(z)
        live = w > 0
        f[live] = integrand(z[live]) * w[live]
        return complex(np.sum(f * rho[:, None]) * h * (2 * np.pi / nt))

    x_gl, w_gl = np.polynomial.legendre.leggauss(n_local)
    rho_l = 0.5 * eps * (x_gl + 1.0)
    wr = 0.5 * eps * w_gl
    t_l = np.linspace(0, 2 * np.pi, 2 * n_local, endpoint=False)

    def local(centre):
        z = centre + rho_l[:, None] * np.exp(1j * t_l)[None, :]
        f = integrand(z) * _bump(rho_l / eps)[:, None]
        return complex(np.sum(f * (rho_l * wr)[:, None]) * (2 * np.pi / len(t_l)))

    locals_ = local(0j) + local(xi)
    a_fine = bulk(domain.grid_n) + locals_
    a_coarse = bulk(domain.grid_n // 2) + locals_
    area = -2j * a_fine
    change = 2.0 * abs(a_fine - a_coarse)
    if not (np.isfinite(area) and np.isfinite(boundary)):
        raise ConvergenceError("non-finite Cauchy-Pompeiu quadrature")
    if change > 1e-2 * max(1.0, abs(lhs)):
        raise ConvergenceError(f"area quadrature not converged (change {change:.2e})",
                               best_estimate=area, error_estimate=change)
    residual = abs(lhs - (boundary + area))
    return PompeiuTerms(lhs, boundary, area, float(residual), float(change))


def cauchy_pompeiu_residual(field, k, xi, domain):
    """|2 pi i h(xi) xi^-k - (boundary + area)| for the adapted formula."""
    return cauchy_pompeiu_terms(field, k, xi, domain).residual


# --------------------------------------------------------------------------
# Weak holomorphy bound


def weak_bound_margin(field, bound, domain):
    """min over the grid of phi(z) G(|h(z)|) - |h_zbar(z)|."""
    z = domain.grid()
    lhs = np.asarray(bound.phi(z), dtype=float) * np.asarray(bound.G(np.abs(field.h(z))),
                                                             dtype=float)
    return float(np.min(lhs - np.abs(field.h_zbar(z))))


def phi_lp_grid_sum(phi, p, domain):
    """Grid Riemann sum of |phi|^p over the disc.

    Only finiteness is certified; a finite sum does not prove phi is in L^p.
    """
    z = domain.grid()
    cell = (2 * domain.radius / (domain.grid_n - 1)) ** 2
    return float(np.sum(np.abs(np.asarray(phi(z))) ** p) * cell)


# --------------------------------------------------------------------------
# Order of a zero


def zero_order_winding(field, z0, r, n=256, max_doublings=12, rel_threshold=1e-12):
    """Winding number of h along the circle |z - z0| = r.

    Argument increments are unwrapped; whenever one reaches pi/2 the circle
    resolution is doubled. An accepted count must also be reproduced at twice
    the resolution, which catches phase rotation aliased onto small steps.
    """
    if not r > 0:
        raise DomainError("r must be positive")

    def count(m):
        th = np.linspace(0, 2 * np.pi, m + 1)
        vals = field.h(z0 + r * np.exp(1j * th))
        mag = np.abs(vals)
        if not np.all(np.isfinite(vals)):
            raise DomainError("h is not finite on the circle")
        if mag.min() == 0.0 or mag.min() < rel_threshold * mag.max():
            raise DegenerateCircleError(
                f"|h| nearly vanishes on the circle r={r}; try a smaller r")
        steps = np.angle(vals[1:] / vals[:-1])
        if np.max(np.abs(steps)) >= np.pi / 2:
            return None
        return int(round(steps.sum() / (2 * np.pi)))

    for _ in range(max_doublings + 1):
        w = count(n)
        if w is not None and count(2 * n) == w:
            return w
        n *= 2
    raise ConvergenceError("winding increments stay above pi/2 at maximum resolution")


def direction_field_index(P_field, z0, r, **kw):
    """Poincare index -w/2 of the line field Im(P dz^2) = 0 around z0."""
    return -zero_order_winding(P_field, z0, r, **kw) / 2.0


def zero_order_loglog(field, z0, radii, n_theta=256):
    """Slope of log(mean |h| on |z - z0| = r) against log r.

    An h that vanishes identically on a sampled circle gives order +inf.
    """
    radii = [float(r) for r in radii]
    if len(radii) < 2 or any(b >= a for a, b in zip(radii, radii[1:])) or radii[-1] <= 0:
        raise DomainError("radii must be positive and strictly decreasing")
    th = np.linspace(0, 2 * np.pi, n_theta, endpoint=False)
    means = [float(np.mean(np.abs(field.h(z0 + r * np.exp(1j * th))))) for r in radii]
    if min(means) == 0.0:
        return ZeroOrderReport(math.inf, None, 0.0, radii)
    slope, intercept, _ = loglog_fit(radii, means)
    res = np.log(means) - (slope * np.log(radii) + intercept)
    try:
        wind = zero_order_winding(field, z0, radii[-1])
    except DegenerateCircleError:
        wind = None
    return ZeroOrderReport(slope, wind, float(np.linalg.norm(res)), radii)


# --------------------------------------------------------------------------
# Built-in field corpus


def monomial(k):
    return FieldOnDisc.closed_form(lambda z: np.asarray(z) ** k,
                                   lambda z: np.zeros_like(np.asarray(z, dtype=complex)),
                                   f"z^{k}")


def monomial_zbar(k):
    """z^k * conj(z); z-bar derivative z^k."""
    return FieldOnDisc.closed_form(lambda z: np.asarray(z) ** k * np.conj(z),
                                   lambda z: np.asarray(z, dtype=complex) ** k,
                                   f"z^{k}*zbar")


def z_exp_zbar():
    """z exp(conj z); |h_zbar| = |h|."""
    return FieldOnDisc.closed_form(lambda z: z * np.exp(np.conj(z)),
                                   lambda z: z * np.exp(np.conj(z)), "z*exp(zbar)")


def conj_z():
    return FieldOnDisc.closed_form(lambda z: np.conj(z),
                                   lambda z: np.ones_like(np.asarray(z, dtype=complex)),
                                   "zbar")


def shifted_power(a, k):
    """(z - a)^k."""
    return FieldOnDisc.closed_form(lambda z: (np.asarray(z) - a) ** k,
                                   lambda z: np.zeros_like(np.asarray(z, dtype=complex)),
                                   f"(z-{a})^{k}")


def exp_z():
    return FieldOnDisc.closed_form(lambda z: np.exp(z),
                                   lambda z: np.zeros_like(np.asarray(z, dtype=complex)),
                                   "exp(z)")


def constant(c):
    return FieldOnDisc.closed_form(lambda z: np.full(np.shape(z), complex(c)),
                                   lambda z: np.zeros_like(np.asarray(z, dtype=complex)),
                                   f"{c}")


def linear(c0, c1):
    """c0 + c1 z."""
    return FieldOnDisc.closed_form(lambda z: c0 + c1 * np.asarray(z),
                                   lambda z: np.zeros_like(np.asarray(z, dtype=complex)),
                                   f"{c0}+{c1}z")


FIELD_CORPUS = {
    "monomial": lambda k=1: monomial(int(k)),
    "monomial_zbar": lambda k=1: monomial_zbar(int(k)),
    "z_exp_zbar": lambda: z_exp_zbar(),
    "zbar": lambda: conj_z(),
    "shifted_power": lambda a=0.0, k=1: shifted_power(complex(a), int(k)),
    "exp": lambda: exp_z(),
    "constant": lambda c=1.0: constant(complex(c)),
    "linear": lambda c0=0.0, c1=1.0: linear(complex(c0), complex(c1)),
}


def builtin_field(spec):
    """Field from a corpus expression such as ``"shifted_power:a=1,k=2 * exp"``.

    Factors separated by ``*`` are multiplied; each factor is a corpus name
    with optional ``key=value`` parameters after a colon.
    """
    out = None
    for token in spec.split("*"):
        token = token.strip()
        name, _, args = token.partition(":")
        if name not in FIELD_CORPUS:
            raise DomainError(f"unknown field {name!r}; known: {sorted(FIELD_CORPUS)}")
        kwargs = {}
        for item in filter(None, (a.strip() for a in args.split(","))):
            key, sep, val = item.partition("=")
            if not sep:
                raise DomainError(f"bad field parameter {item!r}")
            kwargs[key.strip()] = complex(val.strip().replace("i", "j")) \
                if "i" in val or "j" in val else float(val)
        try:
            f = FIELD_CORPUS[name](**kwargs)
        except TypeError as exc:
            raise DomainError(f"bad parameters for {name}: {exc}") from None
        out = f if out is None else out * f
    return out
