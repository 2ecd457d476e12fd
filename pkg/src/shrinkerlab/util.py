"""Small numeric helpers shared across modules."""

import numpy as np


def loglog_fit(xs, ys):
    """Least-squares line through (log x, log |y|).

    Returns
    -------
    slope, intercept, max_residual
    """
    lx = np.log(np.asarray(xs, dtype=float))
    ly = np.log(np.abs(np.asarray(ys, dtype=float)))
    if len(lx) < 2:
        raise ValueError("need at least two points for a slope")
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = float(np.max(np.abs(ly - (slope * lx + intercept))))
    return float(slope), float(intercept), resid


def richardson(values, ratio=2.0, order=2, power_step=2):
    """Richardson table along a sequence with step ratio ``ratio``.

    The error is assumed to expand in powers ``order, order + power_step, ...``
    of the step. Returns the extrapolated value and the difference between the
    last two diagonal entries.
    """
    table = [list(map(float, values))]
    p = order
    while len(table[-1]) > 1:
        prev = table[-1]
        f = ratio ** p
        table.append([(f * prev[i + 1] - prev[i]) / (f - 1.0) for i in range(len(prev) - 1)])
        p += power_step
    best = table[-1][0]
    err = abs(best - table[-2][-1]) if len(table) > 1 else float("inf")
    return best, err
