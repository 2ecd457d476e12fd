"""Dormand-Prince 5(4) integrator with PI step control, dense output and events.

The propagated solution is the 5th order one (local extrapolation). Dense
output uses the standard 4th order continuous extension of the pair. Events
are located by bisection on the dense output.
"""

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
E = np.array([71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40])

# Continuous extension: y(t0 + th*h) = y0 + h * K.T @ (P @ [th, th^2, th^3, th^4])
P = np.array([
    [1.0, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432],
    [0.0, 0.0, 0.0, 0.0],
    [0.0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799],
    [0.0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072],
    [0.0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632],
    [0.0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844],
    [0.0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423],
])

# PI controller exponents (Hairer & Wanner, DOPRI5 defaults)
_BETA = 0.04
_ALPHA = 0.2 - 0.75 * _BETA
_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 10.0


@dataclass
class EventSpec:
    """Scalar event function ``fn(t, y)``; a sign change marks the event."""

    name: str
    fn: Callable[[float, np.ndarray], float]
    terminal: bool = True
    direction: int = 0


@dataclass
class Event:
    name: str
    t: float
    y: np.ndarray


@dataclass
class Solution:
    """Accepted steps plus dense output.

    ``segments[i]`` holds ``(t_a, t_b, y_a, k)`` for the i-th accepted step;
    after a terminal event the last segment still spans the full step while
    ``t[-1]`` is the event location.
    """

    t: np.ndarray
    y: np.ndarray
    events: list = field(default_factory=list)
    status: str = "completed"
    nfev: int = 0
    segments: list = field(default_factory=list, repr=False)

    @property
    def t_final(self):
        return float(self.t[-1])

    @property
    def y_final(self):
        return self.y[-1]

    def __call__(self, t):
        """Dense output at scalar ``t`` inside the integrated range."""
        if not self.segments:
            return self.y[0].copy()
        starts = self.t[:-1]
        if self.t[-1] >= self.t[0]:
            i = int(np.searchsorted(starts, t, side="right")) - 1
        else:
            i = int(np.searchsorted(-starts, -t, side="right")) - 1
        i = min(max(i, 0), len(self.segments) - 1)
        return _dense(*self.segments[i], t)


def _dense(t0, t1, y0, k, t):
    h = t1 - t0
    th = (t - t0) / h
    powers = np.array([th, th * th, th ** 3, th ** 4])
    return y0 + h * (k.T @ (P @ powers))


def _step(fun, t, y, f0, h):
    k = np.empty((7, y.size))
    k[0] = f0
    for s in range(1, 7):
        dy = h * (np.asarray(A[s]) @ k[:s])
        k[s] = fun(t + C[s] * h, y + dy)
    y_new = y + h * (B5 @ k)
    err = h * (E @ k)
    return y_new, err, k


def _initial_step(fun, t0, y0, f0, direction, rtol, atol):
    scale = atol + np.abs(y0) * rtol
    d0 = np.sqrt(np.mean((y0 / scale) ** 2))
    d1 = np.sqrt(np.mean((f0 / scale) ** 2))
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    y1 = y0 + h0 * direction * f0
    f1 = fun(t0 + h0 * direction, y1)
    d2 = np.sqrt(np.mean(((f1 - f0) / scale) ** 2)) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1 / 5)
    return min(100 * h0, h1)


def _locate(ev, t0, t1, y0, k, g0, xtol):
    """Bisection for the event root inside [t0, t1] on the dense output."""
    lo, hi = t0, t1
    glo = g0
    for _ in range(200):
        if abs(hi - lo) <= xtol:
            break
        mid = 0.5 * (lo + hi)
        gm = ev.fn(mid, _dense(t0, t1, y0, k, mid))
        if gm == 0.0:
            lo = hi = mid
            break
        if np.sign(gm) == np.sign(glo):
            lo, glo = mid, gm
        else:
            hi = mid
    tr = 0.5 * (lo + hi)
    return tr, _dense(t0, t1, y0, k, tr)


def _crosses(ev, g0, g1):
    if g0 * g1 >= 0.0:
        return False
    if ev.direction > 0:
        return g1 > g0
    if ev.direction < 0:
        return g1 < g0
    return True


def dopri5(fun, t_span, y0, rtol=1e-10, atol=1e-12, events=(), h0=None,
           max_steps=200_000, event_xtol=1e-12):
    """Integrate ``y' = fun(t, y)`` over ``t_span``.

    Parameters
    ----------
    fun : callable
        Right-hand side, returns an array shaped like ``y``.
    t_span : (float, float)
        Start and end of the independent variable; integration may run
        backwards.
    y0 : array_like
        Initial state.
    rtol, atol : float
        Per-step local error tolerances.
    events : sequence of EventSpec
        Terminal events stop the integration at the located root.

    Returns
    -------
    Solution
        ``status`` is one of ``"completed"``, ``"event"``,
        ``"step_underflow"`` or ``"max_steps"``.
    """
    t0, t_end = map(float, t_span)
    y = np.array(y0, dtype=float)
    direction = 1.0 if t_end >= t0 else -1.0
    f = np.asarray(fun(t0, y), dtype=float)
    nfev = 1
    h = abs(h0) if h0 else _initial_step(fun, t0, y, f, direction, rtol, atol)
    ts, ys, segs = [t0], [y.copy()], []
    events_found = []
    gvals = [ev.fn(t0, y) for ev in events]
    t = t0
    err_prev = 1e-4
    status = "completed"

    for _ in range(max_steps):
        if direction * (t_end - t) <= 0:
            break
        h_min = 16 * np.finfo(float).eps * max(abs(t), 1.0)
        h = min(h, abs(t_end - t))
        if h < h_min:
            status = "step_underflow"
            break
        y_new, err, k = _step(fun, t, y, f, direction * h)
        nfev += 6
        scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
        err_norm = np.sqrt(np.mean((err / scale) ** 2))
        if not np.all(np.isfinite(y_new)) or not np.isfinite(err_norm):
            h *= _MIN_FACTOR
            err_prev = 1e-4
            continue
        if err_norm > 1.0:
            factor = max(_MIN_FACTOR, _SAFETY * err_norm ** (-1 / 5))
            h *= factor
            continue

        t_new = t + direction * h
        if abs(t_end - t_new) < h_min:
            t_new = t_end
        segs.append((t, t_new, y.copy(), k))
        terminal_hit = None
        for i, ev in enumerate(events):
            g_new = ev.fn(t_new, y_new)
            if _crosses(ev, gvals[i], g_new):
                te, ye = _locate(ev, t, t_new, y, k, gvals[i], event_xtol)
                events_found.append(Event(ev.name, float(te), ye))
                if ev.terminal and (terminal_hit is None
                                    or direction * (te - terminal_hit[0]) < 0):
                    terminal_hit = (te, ye)
            gvals[i] = g_new
        if terminal_hit is not None:
            te, ye = terminal_hit
            events_found = [e for e in events_found if direction * (e.t - te) <= 0]
            ts.append(te)
            ys.append(ye)
            return Solution(np.array(ts), np.array(ys), events_found, "event", nfev, segs)

        f = k[6]  # FSAL
        t, y = t_new, y_new
        ts.append(t)
        ys.append(y.copy())
        factor = _SAFETY * err_norm ** (-_ALPHA) * err_prev ** _BETA if err_norm > 0 else _MAX_FACTOR
        h *= min(_MAX_FACTOR, max(_MIN_FACTOR, factor))
        err_prev = max(err_norm, 1e-4)
    else:
        status = "max_steps"

    return Solution(np.array(ts), np.array(ys), events_found, status, nfev, segs)
