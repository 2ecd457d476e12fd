"""Shape invariants, weighted mean curvature and Hopf/Q differentials in R^3.

Conventions (codimension one): ``nu = Xu x Xv / |Xu x Xv|``,
``h_ij = <X_ij, nu>``, shape operator ``S = g^-1 h``, ``H = tr S`` and
``K = det S``. The traceless part ``Phi = S - (H/2) I`` has
``|Phi|^2 = (k1 - k2)^2 / 2 = (H^2 - 4K) / 2``.

On an isothermal chart (``g = alpha (du^2 + dv^2)``), with ``z = u + iv``,

    P = <X_zz, nu> = ((h11 - h22) - 2i h12) / 4,    Q = exp(-F(|X|^2)/2) P,

and ``|Phi|^2 = 8 |P|^2 / alpha^2``. For a radial weight f = F(|X|^2) the
weighted mean curvature is ``H_f = H + 2 F'(|X|^2) <X, nu>``.
"""

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ChartError, DomainError, ImmersionError, NoSolutionError, StepTooSmallError

ISOTHERMAL_RTOL = 1e-8
GRAM_TOL = 1e-14


@dataclass(frozen=True)
class WeightSpec:
    """Radial weight F(t), t = |X|^2, with its first two derivatives."""

    F: Callable
    F1: Callable
    F2: Callable
    name: str = ""

    def check(self, ts=(0.25, 1.0, 4.0, 9.0), rtol=1e-6):
        """Compare F1 with a centered difference of F at sample points."""
        for t in ts:
            h = 1e-5 * max(1.0, abs(t))
            fd = (self.F(t + h) - self.F(t - h)) / (2 * h)
            fd2 = (self.F1(t + h) - self.F1(t - h)) / (2 * h)
            if not all(map(math.isfinite, (self.F(t), self.F1(t), self.F2(t)))):
                return False
            if abs(fd - self.F1(t)) > rtol * max(1.0, abs(fd)):
                return False
            if abs(fd2 - self.F2(t)) > rtol * max(1.0, abs(fd2)):
                return False
        return True


def linear_weight(c):
    """F(t) = c t; c = 1/4 is the Gaussian weight of self-shrinkers."""
    return WeightSpec(lambda t: c * t, lambda t: c, lambda t: 0.0, f"{c:g}*t")


def constant_weight(c=0.0):
    return WeightSpec(lambda t: c, lambda t: 0.0, lambda t: 0.0, f"const {c:g}")


def quadratic_weight(c1, c2):
    """F(t) = c1 t + c2 t^2."""
    return WeightSpec(lambda t: c1 * t + c2 * t * t, lambda t: c1 + 2 * c2 * t,
                      lambda t: 2 * c2, f"{c1:g}*t+{c2:g}*t^2")


@dataclass(frozen=True)
class ShapeSample:
    g11: float
    g12: float
    g22: float
    h11: float
    h12: float
    h22: float
    H: float
    K: float
    phi_norm: float
    nu: np.ndarray
    alpha: float = None
    X: np.ndarray = None
    Xu: np.ndarray = None
    Xv: np.ndarray = None


def _sample_from_jet(X, Xu, Xv, Xuu, Xuv, Xvv):
    g11, g12, g22 = Xu @ Xu, Xu @ Xv, Xv @ Xv
    det = g11 * g22 - g12 * g12
    if not det > GRAM_TOL * max(g11 * g22, 1e-300):
        raise ImmersionError(f"degenerate metric (Gram determinant {det:.3e})")
    n = np.cross(Xu, Xv)
    nu = n / np.linalg.norm(n)
    h11, h12, h22 = Xuu @ nu, Xuv @ nu, Xvv @ nu
    ginv = np.array([[g22, -g12], [-g12, g11]]) / det
    S = ginv @ np.array([[h11, h12], [h12, h22]])
    H = float(np.trace(S))
    K = float((h11 * h22 - h12 * h12) / det)
    # Frobenius norm of Phi in an orthonormal frame, tr(Phi^2) with Phi = S - (H/2) I,
    # written without the cancelling tr(S^2) - H^2/2
    phi2 = 0.5 * (S[0, 0] - S[1, 1]) ** 2 + 2.0 * S[0, 1] * S[1, 0]
    phi_norm = math.sqrt(max(phi2, 0.0))
    iso = abs(g11 - g22) + 2 * abs(g12) < ISOTHERMAL_RTOL * (g11 + g22)
    alpha = 0.5 * (g11 + g22) if iso else None
    return ShapeSample(float(g11), float(g12), float(g22), float(h11), float(h12), float(h22),
                       H, K, phi_norm, nu, alpha, X, Xu, Xv)


def shape_sample(surface, u, v):
    """Fundamental forms and shape invariants at chart point (u, v)."""
    return _sample_from_jet(*surface.jet(u, v))


def shrinker_residual(surface, u, v):
    """H + <X, nu>/2; zero on self-shrinkers whichever normal is used."""
    s = shape_sample(surface, u, v)
    return s.H + 0.5 * float(s.X @ s.nu)


def lambda_residual(surface, u, v, lam):
    """lambda - H - <X, nu>/2."""
    s = shape_sample(surface, u, v)
    return lam - s.H - 0.5 * float(s.X @ s.nu)


def weighted_mean_curvature(surface, weight, u, v):
    """H_f = H + 2 F'(|X|^2) <X, nu>."""
    s = shape_sample(surface, u, v)
    t = float(s.X @ s.X)
    return s.H + 2.0 * weight.F1(t) * float(s.X @ s.nu)


@dataclass(frozen=True)
class HopfSample:
    P: complex
    Q: complex
    f_val: float


def hopf_differential(surface, weight, u, v):
    """P and Q = exp(-F/2) P on an isothermal chart."""
    s = shape_sample(surface, u, v)
    if s.alpha is None:
        raise ChartError(f"chart is not isothermal at ({u}, {v})")
    P = 0.25 * complex(s.h11 - s.h22, -2.0 * s.h12)
    f = float(weight.F(float(s.X @ s.X)))
    return HopfSample(P, math.exp(-0.5 * f) * P, f)


def _q_value(surface, weight, u, v):
    s = shape_sample(surface, u, v)
    P = 0.25 * complex(s.h11 - s.h22, -2.0 * s.h12)
    return math.exp(-0.5 * weight.F(float(s.X @ s.X))) * P


def _zbar_fd(fn, u, v, h):
    return 0.5 * ((fn(u + h, v) - fn(u - h, v)) / (2 * h)
                  + 1j * (fn(u, v + h) - fn(u, v - h)) / (2 * h))


def _z_fd_richardson(fn, u, v, h):
    def d(s):
        return 0.5 * ((fn(u + s, v) - fn(u - s, v)) / (2 * s)
                      - 1j * (fn(u, v + s) - fn(u, v - s)) / (2 * s))

    return (4.0 * d(0.5 * h) - d(h)) / 3.0


@dataclass
class QzbarTerms:
    fd: complex
    closed: complex
    reduced: complex
    hf_gradient: complex
    residual: float


def qzbar_terms(surface, weight, u, v, fd_step=None, grad_step=None):
    """Both sides of the Q_zbar identity for a radial weight.

    ``fd`` is the centered Wirtinger difference of Q with step ``fd_step``
    (second order). ``closed`` is

        (alpha/4) e^{-F/2} [ (H_f)_z + (F' H_f - 2 (2F'' + F'^2) <X, nu>) <X, X_z> ],

    where (H_f)_z is a Richardson-extrapolated difference with a separate,
    fixed step so its error stays far below that of ``fd``. ``reduced`` drops
    the (H_f)_z term; it coincides with ``closed`` only when H_f is constant
    (for example on self-shrinkers with F(t) = t/4).
    """
    scale = surface.scale
    fd_step = 1e-4 * scale if fd_step is None else fd_step
    grad_step = 2e-3 * scale if grad_step is None else grad_step
    if not fd_step > 0:
        raise DomainError("fd_step must be positive")
    s = shape_sample(surface, u, v)
    if s.alpha is None:
        raise ChartError(f"chart is not isothermal at ({u}, {v})")
    qfun = lambda a, b: _q_value(surface, weight, a, b)

    d1 = _zbar_fd(qfun, u, v, fd_step)
    d2 = _zbar_fd(qfun, u, v, 0.5 * fd_step)
    d3 = _zbar_fd(qfun, u, v, 0.25 * fd_step)
    q_mag = max(abs(qfun(u + du, v + dv)) for du, dv in
                ((fd_step, 0), (-fd_step, 0), (0, fd_step), (0, -fd_step)))
    roundoff = 4 * np.finfo(float).eps * q_mag / (0.25 * fd_step)
    # a second-order difference should change 4x less at each halving; changes
    # that stop shrinking at a roundoff level that matters signal a step too small
    floor = 1e-9 * (abs(d1) + q_mag / scale)
    if min(roundoff, abs(d2 - d3)) > floor and abs(d2 - d3) > 0.5 * abs(d1 - d2):
        raise StepTooSmallError(
            f"fd_step={fd_step:g} is roundoff dominated: halving changes the estimate by "
            f"{abs(d1 - d2):.2e} then {abs(d2 - d3):.2e} (roundoff level {roundoff:.2e})")

    t = float(s.X @ s.X)
    F, F1, F2 = weight.F(t), weight.F1(t), weight.F2(t)
    x_nu = float(s.X @ s.nu)
    Hf = s.H + 2.0 * F1 * x_nu
    Xz = 0.5 * (s.Xu - 1j * s.Xv)
    x_xz = complex(s.X @ Xz)
    pref = 0.25 * s.alpha * math.exp(-0.5 * F)
    hf_fun = lambda a, b: weighted_mean_curvature(surface, weight, a, b)
    grad = _z_fd_richardson(hf_fun, u, v, grad_step)
    reduced = pref * (F1 * Hf - 2.0 * (2.0 * F2 + F1 * F1) * x_nu) * x_xz
    closed = reduced + pref * grad
    return QzbarTerms(d1, closed, reduced, pref * grad, float(abs(d1 - closed)))


def qzbar_identity_residual(surface, weight, u, v, fd_step=None):
    """|Q_zbar (differenced) - closed form| at (u, v)."""
    return qzbar_terms(surface, weight, u, v, fd_step).residual


def codazzi_residual(surface, u, v, fd_step=None):
    """|P_zbar - (alpha/4) H_z|, the unweighted case of the identity."""
    return qzbar_terms(surface, constant_weight(0.0), u, v, fd_step).residual


def sphere_radius_for_weight(weight, r_min=1e-3, r_max=1e3, rtol=1e-15):
    """Radius R with F'(R^2) R^2 = 1, the sphere with H_f = 0.

    The bracket comes from a geometric scan (ratio 2) over [r_min, r_max]; the
    root is then bisected.
    """
    g = lambda r: weight.F1(r * r) * r * r - 1.0
    rs = [r_min]
    while rs[-1] < r_max:
        rs.append(rs[-1] * 2.0)
    vals = [g(r) for r in rs]
    for i in range(len(rs) - 1):
        if vals[i] == 0.0:
            return rs[i]
        if vals[i] * vals[i + 1] < 0:
            lo, hi, glo = rs[i], rs[i + 1], vals[i]
            while hi - lo > rtol * hi:
                mid = 0.5 * (lo + hi)
                if mid in (lo, hi):
                    break
                gm = g(mid)
                if gm == 0.0:
                    return mid
                if (gm > 0) == (glo > 0):
                    lo, glo = mid, gm
                else:
                    hi = mid
            return 0.5 * (lo + hi)
    raise NoSolutionError("F'(R^2) R^2 - 1 does not change sign on the scan range")


def lambda_sphere_radius(lam):
    """Radius sqrt(lambda^2 + 4) - lambda of the centred lambda-sphere.

    Written as 4 / (sqrt(lambda^2 + 4) + lambda) for lambda > 0 to avoid
    cancellation.
    """
    lam = float(lam)
    root = math.hypot(lam, 2.0)
    return 4.0 / (root + lam) if lam > 0 else root - lam


@dataclass
class GridRow:
    u: float
    v: float
    H: float
    K: float
    phi_norm: float
    shrinker_residual: float
    phi_identity_residual: float
    hopf_identity_residual: float


def surface_grid_report(surface, n=10, margin=0.02):
    """Per-point invariants and identity residuals on an n x n chart grid."""
    rows = []
    for u, v in surface.grid(n, n, margin):
        s = shape_sample(surface, u, v)
        phi_id = abs(s.phi_norm ** 2 - 0.5 * (s.H ** 2 - 4 * s.K))
        if s.alpha is not None:
            P = 0.25 * complex(s.h11 - s.h22, -2.0 * s.h12)
            hopf_id = abs(s.phi_norm ** 2 - 8.0 * abs(P) ** 2 / s.alpha ** 2)
        else:
            hopf_id = float("nan")
        rows.append(GridRow(u, v, s.H, s.K, s.phi_norm, s.H + 0.5 * float(s.X @ s.nu),
                            phi_id, hopf_id))
    return rows
