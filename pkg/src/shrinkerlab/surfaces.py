"""Parametric surfaces in R^3 with derivative access, plus fixture charts.

A surface exposes ``jet(u, v)`` returning ``(X, Xu, Xv, Xuu, Xuv, Xvv)``.
Fixtures supply closed-form jets; any other chart can fall back to centered
differences with one Richardson step.

The normal is ``Xu x Xv`` normalized, so it depends on the chart order. The
fixtures below are ordered so that closed surfaces get the outward normal.
"""

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .errors import DomainError


def _fd_jet(position, u, v, h):
    X = lambda a, b: np.asarray(position(a, b), dtype=float)

    def first(s):
        return ((X(u + s, v) - X(u - s, v)) / (2 * s),
                (X(u, v + s) - X(u, v - s)) / (2 * s))

    def second(s):
        x0 = X(u, v)
        uu = (X(u + s, v) - 2 * x0 + X(u - s, v)) / (s * s)
        vv = (X(u, v + s) - 2 * x0 + X(u, v - s)) / (s * s)
        uv = (X(u + s, v + s) - X(u + s, v - s) - X(u - s, v + s) + X(u - s, v - s)) / (4 * s * s)
        return uu, uv, vv

    rich = lambda a, b: (4.0 * b - a) / 3.0
    f1, f2 = first(h), first(h / 2)
    s1, s2 = second(h), second(h / 2)
    return (X(u, v), rich(f1[0], f2[0]), rich(f1[1], f2[1]),
            rich(s1[0], s2[0]), rich(s1[1], s2[1]), rich(s1[2], s2[2]))


@dataclass(frozen=True)
class ParametricSurface:
    """Chart ``(u, v) -> X`` on a rectangle.

    ``derivative_access`` is ``"closed_form"`` when ``jet_fn`` is given and
    ``"finite_difference"`` otherwise, with step ``fd_step`` times the chart
    scale.
    """

    position: Callable
    chart_domain: tuple
    jet_fn: Optional[Callable] = None
    fd_step: float = 1e-4
    name: str = ""
    swapped_order: bool = False
    meta: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def derivative_access(self):
        return "closed_form" if self.jet_fn is not None else "finite_difference"

    @property
    def scale(self):
        (u0, u1), (v0, v1) = self.chart_domain
        return max(u1 - u0, v1 - v0)

    def jet(self, u, v):
        if self.swapped_order:
            X, Xu, Xv, Xuu, Xuv, Xvv = self._raw_jet(v, u)
            return X, Xv, Xu, Xvv, Xuv, Xuu
        return self._raw_jet(u, v)

    def _raw_jet(self, u, v):
        if self.jet_fn is not None:
            return tuple(np.asarray(a, dtype=float) for a in self.jet_fn(u, v))
        return _fd_jet(self.position, u, v, self.fd_step * self.scale)

    def __call__(self, u, v):
        return self.jet(u, v)[0]

    def swapped(self):
        """Same surface with the chart order (u, v) -> (v, u); flips the normal."""
        (u0, u1), (v0, v1) = self.chart_domain
        return replace(self, chart_domain=((v0, v1), (u0, u1)),
                       swapped_order=not self.swapped_order,
                       name=f"{self.name}[swapped]")

    def grid(self, n_u=10, n_v=10, margin=0.0):
        """Interior grid points of the chart rectangle."""
        (u0, u1), (v0, v1) = self.chart_domain
        du, dv = margin * (u1 - u0), margin * (v1 - v0)
        us = np.linspace(u0 + du, u1 - du, n_u)
        vs = np.linspace(v0 + dv, v1 - dv, n_v)
        return [(float(a), float(b)) for a in us for b in vs]


# --------------------------------------------------------------------------
# Fixtures


def sphere_stereographic(R=2.0):
    """Inverse stereographic chart R (2u, 2v, 1 - |w|^2) / (1 + |w|^2).

    Conformal with alpha = 4 R^2 / (1 + u^2 + v^2)^2; outward normal.
    """

    def jet(u, v):
        D = 1.0 + u * u + v * v
        q = 1.0 / D
        qu, qv = -2 * u * q * q, -2 * v * q * q
        quu = -2 * q * q + 8 * u * u * q ** 3
        qvv = -2 * q * q + 8 * v * v * q ** 3
        quv = 8 * u * v * q ** 3
        # components 2uq, 2vq, 2q - 1 scaled by R
        X = R * np.array([2 * u * q, 2 * v * q, 2 * q - 1])
        Xu = R * np.array([2 * q + 2 * u * qu, 2 * v * qu, 2 * qu])
        Xv = R * np.array([2 * u * qv, 2 * q + 2 * v * qv, 2 * qv])
        Xuu = R * np.array([4 * qu + 2 * u * quu, 2 * v * quu, 2 * quu])
        Xuv = R * np.array([2 * qv + 2 * u * quv, 2 * qu + 2 * v * quv, 2 * quv])
        Xvv = R * np.array([2 * u * qvv, 4 * qv + 2 * v * qvv, 2 * qvv])
        return X, Xu, Xv, Xuu, Xuv, Xvv

    return ParametricSurface(lambda u, v: jet(u, v)[0], ((-1.5, 1.5), (-1.5, 1.5)), jet,
                             name=f"sphere R={R:g}")


def sphere_spherical(R=2.0):
    """Colatitude/longitude chart; not conformal, outward normal."""

    def jet(u, v):
        su, cu, sv, cv = math.sin(u), math.cos(u), math.sin(v), math.cos(v)
        X = R * np.array([su * cv, su * sv, cu])
        Xu = R * np.array([cu * cv, cu * sv, -su])
        Xv = R * np.array([-su * sv, su * cv, 0.0])
        Xuu = -X
        Xuv = R * np.array([-cu * sv, cu * cv, 0.0])
        Xvv = R * np.array([-su * cv, -su * sv, 0.0])
        return X, Xu, Xv, Xuu, Xuv, Xvv

    return ParametricSurface(lambda u, v: jet(u, v)[0], ((0.2, math.pi - 0.2), (0.0, 2 * math.pi)),
                             jet, name=f"sphere-polar R={R:g}")


def cylinder(R=math.sqrt(2.0)):
    """(R cos(u/R), R sin(u/R), v): isometric (alpha = 1), outward normal."""

    def jet(u, v):
        c, s = math.cos(u / R), math.sin(u / R)
        X = np.array([R * c, R * s, v])
        Xu = np.array([-s, c, 0.0])
        Xv = np.array([0.0, 0.0, 1.0])
        Xuu = np.array([-c / R, -s / R, 0.0])
        zero = np.zeros(3)
        return X, Xu, Xv, Xuu, zero, zero

    return ParametricSurface(lambda u, v: jet(u, v)[0], ((0.0, 2 * math.pi * R), (-2.0, 2.0)),
                             jet, name=f"cylinder R={R:g}")


def plane():
    def jet(u, v):
        zero = np.zeros(3)
        return (np.array([u, v, 0.0]), np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0]),
                zero, zero, zero)

    return ParametricSurface(lambda u, v: jet(u, v)[0], ((-2.0, 2.0), (-2.0, 2.0)), jet,
                             name="plane")


def torus(R=2.0, r=1.0):
    """Conformal torus chart (u, v) = (longitude, t) with dt = r dphi / (R + r cos phi).

    The tube angle is phi(t) = 2 atan(sqrt((R+r)/(R-r)) tan(t sqrt(R^2-r^2) / (2r)))
    for |phi| < pi; alpha = (R + r cos phi)^2 and the normal points outward.
    """
    if not R > r > 0:
        raise DomainError("torus needs R > r > 0")
    k = math.sqrt((R + r) / (R - r))
    m = math.sqrt(R * R - r * r) / (2 * r)
    t_max = math.pi / (2 * m)

    def jet(u, t):
        phi = 2 * math.atan(k * math.tan(m * t))
        sp, cp = math.sin(phi), math.cos(phi)
        rho = R + r * cp
        p1 = rho / r
        p2 = -sp * p1   # d/dt (R + r cos phi)/r = -sin(phi) phi'
        su, cu = math.sin(u), math.cos(u)
        # X(phi, u) = (rho cos u, rho sin u, r sin phi)
        X = np.array([rho * cu, rho * su, r * sp])
        Xp = np.array([-r * sp * cu, -r * sp * su, r * cp])
        Xpp = np.array([-r * cp * cu, -r * cp * su, -r * sp])
        Xu = np.array([-rho * su, rho * cu, 0.0])
        Xuu = np.array([-rho * cu, -rho * su, 0.0])
        Xup = np.array([r * sp * su, -r * sp * cu, 0.0])
        return (X, Xu, Xp * p1, Xuu, Xup * p1, Xpp * p1 * p1 + Xp * p2)

    return ParametricSurface(lambda u, t: jet(u, t)[0],
                             ((0.0, 2 * math.pi), (-0.9 * t_max, 0.9 * t_max)), jet,
                             name=f"torus R={R:g} r={r:g}")


class _PeriodicPrimitive:
    """s(x) = int_0^x sigma for a positive pi-periodic sigma, and its inverse."""

    def __init__(self, sigma, dsigma, n=48):
        self.sigma, self.dsigma = sigma, dsigma
        self.xg, self.wg = np.polynomial.legendre.leggauss(n)
        self.period_integral = self._raw(math.pi)

    def _raw(self, x):
        nodes = 0.5 * x * (self.xg + 1.0)
        return 0.5 * x * float(np.dot(self.wg, self.sigma(nodes)))

    def __call__(self, x):
        k = math.floor(x / math.pi)
        return k * self.period_integral + self._raw(x - k * math.pi)

    def inverse(self, s):
        k = math.floor(s / self.period_integral)
        target = s - k * self.period_integral
        x = math.pi * target / self.period_integral
        for _ in range(60):
            step = (self(x) - target) / float(self.sigma(np.array([x]))[0])
            x -= step
            if abs(step) < 1e-16 * max(1.0, abs(x)):
                break
        return k * math.pi + x


def ellipsoid(a=1.0, b=1.2, c=1.5):
    """Conformal chart of the triaxial ellipsoid x^2/a^2 + y^2/b^2 + z^2/c^2 = 1.

    Start from ellipsoidal angles (theta, psi) with
    u = a^2 cos^2 theta + b^2 sin^2 theta and v = b^2 cos^2 psi + c^2 sin^2 psi,

        X = (a sin(theta) sqrt((v - a^2)/(c^2 - a^2)), b cos(theta) sin(psi),
             c cos(psi) sqrt((c^2 - u)/(c^2 - a^2))).

    The metric is (v - u) (u/(c^2 - u) dtheta^2 + v/(v - a^2) dpsi^2), so with
    ds = sqrt(u/(c^2 - u)) dtheta and dt = sqrt(v/(v - a^2)) dpsi the chart
    (s, t) is isothermal with alpha = v - u. theta(s) and psi(t) are inverted
    by Newton iteration on Gauss-Legendre primitives. The four umbilics sit at
    u = v = b^2 (theta = pi/2, psi = 0 mod pi). Needs a < b < c.

    ``meta["umbilic_st"]`` holds the chart position of one umbilic.
    """
    if not 0 < a < b < c:
        raise DomainError("ellipsoid chart needs 0 < a < b < c")
    A, B, C = a * a, b * b, c * c

    def U(th):
        return A * np.cos(th) ** 2 + B * np.sin(th) ** 2

    def V(ps):
        return B * np.cos(ps) ** 2 + C * np.sin(ps) ** 2

    def sig(th):
        u = U(th)
        return np.sqrt(u / (C - u))

    def dsig(th):
        u = U(th)
        du = (B - A) * np.sin(2 * th)
        return 0.5 / sig(th) * C * du / (C - u) ** 2

    def tau(ps):
        v = V(ps)
        return np.sqrt(v / (v - A))

    def dtau(ps):
        v = V(ps)
        dv = (C - B) * np.sin(2 * ps)
        return 0.5 / tau(ps) * (-A) * dv / (v - A) ** 2

    S = _PeriodicPrimitive(sig, dsig)
    T = _PeriodicPrimitive(tau, dtau)

    def sqrt_jet(w, w1, w2):
        r = math.sqrt(w)
        return r, w1 / (2 * r), w2 / (2 * r) - w1 * w1 / (4 * r ** 3)

    def angle_jet(s, t):
        th, ps = S.inverse(s), T.inverse(t)
        sg, tu = float(sig(np.array([th]))[0]), float(tau(np.array([ps]))[0])
        th1, ps1 = 1.0 / sg, 1.0 / tu
        th2 = -float(dsig(np.array([th]))[0]) / sg ** 3
        ps2 = -float(dtau(np.array([ps]))[0]) / tu ** 3
        return th, th1, th2, ps, ps1, ps2

    def jet(s, t):
        th, th1, th2, ps, ps1, ps2 = angle_jet(s, t)
        st, ct, sp, cp = math.sin(th), math.cos(th), math.sin(ps), math.cos(ps)
        u = A * ct * ct + B * st * st
        v = B * cp * cp + C * sp * sp
        P, P1, P2 = sqrt_jet((v - A) / (C - A), (C - B) * math.sin(2 * ps) / (C - A),
                             2 * (C - B) * math.cos(2 * ps) / (C - A))
        Q, Q1, Q2 = sqrt_jet((C - u) / (C - A), -(B - A) * math.sin(2 * th) / (C - A),
                             -2 * (B - A) * math.cos(2 * th) / (C - A))
        X = np.array([a * st * P, b * ct * sp, c * cp * Q])
        X_th = np.array([a * ct * P, -b * st * sp, c * cp * Q1])
        X_ps = np.array([a * st * P1, b * ct * cp, -c * sp * Q])
        X_thth = np.array([-a * st * P, -b * ct * sp, c * cp * Q2])
        X_psps = np.array([a * st * P2, -b * ct * sp, -c * cp * Q])
        X_thps = np.array([a * ct * P1, -b * st * cp, -c * sp * Q1])
        Xs = X_th * th1
        Xt = X_ps * ps1
        Xss = X_thth * th1 * th1 + X_th * th2
        Xtt = X_psps * ps1 * ps1 + X_ps * ps2
        Xst = X_thps * th1 * ps1
        return X, Xs, Xt, Xss, Xst, Xtt

    s_half = S(math.pi / 2)
    t_half = T(math.pi / 2)
    return ParametricSurface(lambda s, t: jet(s, t)[0],
                             ((0.1 * s_half, 0.9 * s_half), (0.1 * t_half, 0.9 * t_half)),
                             jet, name=f"ellipsoid {a:g},{b:g},{c:g}",
                             meta={"umbilic_st": (s_half, 0.0), "s_of_theta": S,
                                   "t_of_psi": T, "angles": angle_jet})


FIXTURES = {
    "sphere": lambda R=2.0: sphere_stereographic(float(R)),
    "sphere-polar": lambda R=2.0: sphere_spherical(float(R)),
    "cylinder": lambda R=math.sqrt(2.0): cylinder(float(R)),
    "plane": lambda: plane(),
    "ellipsoid": lambda a=1.0, b=1.2, c=1.5: ellipsoid(float(a), float(b), float(c)),
    "torus": lambda R=2.0, r=1.0: torus(float(R), float(r)),
}


def fixture(name, **params):
    if name not in FIXTURES:
        raise DomainError(f"unknown fixture {name!r}; known: {sorted(FIXTURES)}")
    return FIXTURES[name](**params)
