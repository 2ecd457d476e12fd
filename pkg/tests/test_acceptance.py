"""Acceptance criteria, one test per criterion at the contracted tolerances.

Each test records a ``criterion N: PASS|FAIL ...`` line that pytest prints in
its terminal summary. Run this file directly for the same lines without pytest:

    python3 tests/test_acceptance.py
"""

import math
import os
import subprocess
import sys
import tempfile
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

from shrinkerlab import geometry as geo
from shrinkerlab import rotational as rot
from shrinkerlab import surfaces as srf
from shrinkerlab import weakholo as wh
from shrinkerlab.cli import taylor_audit

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script from elsewhere
    ACCEPTANCE_LINES = []


def report(n, checks, t0):
    """checks: list of (label, ok, detail). Records the line and asserts."""
    ok = all(c[1] for c in checks)
    failed = [f"{label} ({detail})" for label, good, detail in checks if not good]
    body = "; ".join(f"{label} {detail}" for label, _, detail in checks)
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} [{time.perf_counter() - t0:.1f}s] {body}"
    ACCEPTANCE_LINES.append(line)
    assert ok, "failed: " + "; ".join(failed)


def slope(xs, ys):
    return float(np.polyfit(np.log(xs), np.log(ys), 1)[0])


def test_criterion_1_exact_solutions():
    t0 = time.perf_counter()
    curve = rot.integrate_graph(2.0, 1.9)
    sphere_err = float(np.max(np.abs(curve.values[:, 0] - np.sqrt(4 - curve.param ** 2))))
    plane = rot.integrate_graph(0.0, 1.9)
    plane_err = float(np.max(np.abs(plane.values[:, 0])))
    res = {}
    for name in ("sphere", "cylinder", "plane"):
        surf = srf.fixture(name)
        res[name] = max(abs(geo.shrinker_residual(surf, u, v)) for u, v in surf.grid(10, 10))
    checks = [("b=2 vs sqrt(4-x^2)", sphere_err < 1e-8, f"{sphere_err:.1e}"),
              ("b=0", plane_err < 1e-12, f"{plane_err:.1e}")]
    checks += [(f"shrinker residual {k}", v < 1e-10, f"{v:.1e}") for k, v in res.items()]
    report(1, checks, t0)


def test_criterion_2_taylor_audit():
    t0 = time.perf_counter()
    checks = []
    a2_err = max(abs(rot.series_coefficients(b, 8)[1] + b / 8) for b in (0.5, 1, 2, 3))
    checks.append(("a2=-b/8", a2_err < 1e-12, f"{a2_err:.1e}"))
    xs = np.geomspace(1e-3, 1e-1, 9)
    slopes = [slope(xs, [abs(rot.series_ode_residual(b, 8, x)) for x in xs])
              for b in (0.5, 1.0, 2.0, 3.0)]
    checks.append(("ODE residual slope", min(slopes) >= 6.8, f"min {min(slopes):.2f}"))
    coeffs = rot.series_coefficients(2.0, 16)
    binom, c = [], Fraction(1)
    for n in range(len(coeffs)):
        binom.append(float(2 * c * Fraction(-1, 4) ** n))
        c *= (Fraction(1, 2) - n) / (n + 1)
    berr = max(abs(a - b) for a, b in zip(coeffs, binom))
    checks.append(("b=2 binomial", berr < 1e-12, f"{berr:.1e}"))
    audit, _ = taylor_audit(2.0, 8)
    row = audit["a4_comparison"]
    has_row = (row["published"]["provenance"] == "paper-formula"
               and row["computed"]["value"] == row["ode_consistent"]["value"] == -1 / 64)
    checks.append(("a4 row", has_row, f"published {row['published']['value']:.6g} "
                   f"computed {row['computed']['value']:.6g}"))
    report(2, checks, t0)


def test_criterion_3_chart_consistency():
    t0 = time.perf_counter()
    checks = []
    xs = np.linspace(0.05, 1.0, 200)
    for b in (0.5, 1.0, 3.0):
        graph = rot.integrate_graph(b, 1.0)
        arc = rot.integrate_arclength_to_x(rot.graph_to_arc(graph.state_at(0.05)), 1.0)
        yg = np.array([graph.state_at(x).gamma for x in xs])
        err = float(np.max(np.abs(rot.arc_heights_at(arc, xs) - yg)))
        checks.append((f"b={b:g}", err < 1e-8, f"{err:.1e}"))
    report(3, checks, t0)


def test_criterion_4_divergence_law():
    t0 = time.perf_counter()
    checks = []
    deltas = [1e-4, 5e-5, 2.5e-5, 1.25e-5]
    for b, p in ((1.0, 2.5), (1.0, 3.0), (3.0, 3.0)):
        t1 = time.perf_counter()
        s, _ = rot.lp_divergence_exponent(b, p, deltas, 0.2)
        dt = time.perf_counter() - t1
        checks.append((f"(b,p)=({b:g},{p:g})", abs(s - (2 - p)) <= 0.05 and dt < 5,
                       f"slope {s:.4f} vs {2 - p:g} in {dt:.2f}s"))
    report(4, checks, t0)


def test_criterion_5_axis_diagnostics():
    t0 = time.perf_counter()
    checks = []
    for b in (0.5, 1.0, 3.0):
        rep = rot.axis_ratio_limit(b)
        gap = abs(rep.limit / rep.series_prediction - 1)
        checks.append((f"limit b={b:g}", rep.limit > 0 and rep.stability < 1e-4 and gap < 1e-4,
                       f"{rep.limit:.10g} stab {rep.stability:.1e} gap {gap:.1e}"))
        z = rot.zero_order_report(b)
        ok = (abs(z.phi_sq_order - 4) <= 0.1 and abs(z.defect_h2_order - 2) <= 0.1
              and abs(z.criterion - 2) <= 0.2)
        checks.append((f"orders b={b:g}", ok, f"{z.phi_sq_order:.3f}/{z.defect_h2_order:.3f}"
                       f" criterion {z.criterion:.3f}"))
    report(5, checks, t0)


def test_criterion_6_weak_holomorphy_kernel():
    t0 = time.perf_counter()
    checks = []
    dom = wh.DiscDomain(grid_n=512)
    xi = 0.3 + 0.2j
    hol = max(wh.cauchy_pompeiu_residual(wh.monomial(k), k, xi, dom) for k in range(1, 5))
    checks.append(("holomorphic k<=4", hol < 1e-6, f"{hol:.1e}"))
    worst, worst_oracle = 0.0, 0.0
    # oracle: the area term is -2i int dA/(z - xi) = 2 pi i conj(xi) on the unit disc
    for k in range(1, 5):
        t = wh.cauchy_pompeiu_terms(wh.monomial_zbar(k), k, xi, dom)
        worst = max(worst, t.residual)
        worst_oracle = max(worst_oracle, abs(t.area - 2j * math.pi * np.conj(xi)))
    checks.append(("z^k zbar", worst < 1e-5 and worst_oracle < 1e-5,
                   f"{worst:.1e} (area vs oracle {worst_oracle:.1e})"))
    kq = wh.kq_constant(1.5).value
    mc, se = wh.kq_monte_carlo(1.5)
    gap = abs(mc / kq - 1)
    checks.append(("K_1.5 vs Monte Carlo", gap < 0.005, f"{kq:.8f} vs {mc:.4f} gap {gap:.1e}"))
    vals = [wh.kq_constant(q).value for q in (1.5, 1.8, 1.95)]
    checks.append(("monotone", vals[0] < vals[1] < vals[2], "/".join(f"{v:.3f}" for v in vals)))
    disc = wh.kq_disc_part(1.5, 1e-3)[0]
    lead = 2 * math.pi * 1e-3 ** 0.5 / 0.5
    checks.append(("eps-disc", abs(disc / lead - 1) < 0.05, f"ratio {disc / lead:.5f}"))
    report(6, checks, t0)


def test_criterion_7_order_and_index():
    t0 = time.perf_counter()
    checks = []
    wind = [wh.zero_order_winding(wh.monomial(k), 0, 0.1) for k in range(1, 5)]
    checks.append(("winding z^k", wind == [1, 2, 3, 4], str(wind)))
    idx = [wh.direction_field_index(wh.monomial(k), 0, 0.1) for k in range(1, 5)]
    checks.append(("index z^k", idx == [-0.5, -1.0, -1.5, -2.0], str(idx)))
    radii = [0.1 * 2.0 ** -j for j in range(6)]
    fixtures = [(wh.monomial(3), 0, 3),
                (wh.builtin_field("shifted_power:a=0.2,k=2 * linear:c0=3,c1=1"), 0.2, 2),
                (wh.monomial_zbar(2), 0, 3)]
    errs = [abs(wh.zero_order_loglog(f, z0, radii).order_loglog - k) for f, z0, k in fixtures]
    checks.append(("loglog fixtures", max(errs) <= 0.01, f"max err {max(errs):.1e}"))
    report(7, checks, t0)


def test_criterion_8_q_differential():
    t0 = time.perf_counter()
    checks = []
    quarter = geo.linear_weight(0.25)
    for name in ("sphere", "cylinder", "plane", "torus", "ellipsoid"):
        surf = srf.fixture(name)
        worst, n = 0.0, 0
        for u, v in surf.grid(10, 10, 0.02):
            s = geo.shape_sample(surf, u, v)
            P = geo.hopf_differential(surf, quarter, u, v).P
            scale = max(s.H * s.H, abs(s.K), 1e-300)
            worst = max(worst, abs(s.phi_norm ** 2 - 8 * abs(P) ** 2 / s.alpha ** 2) / scale)
            n += 1
        checks.append((f"phi^2=8|P|^2/a^2 {name}", worst < 1e-8 and n >= 100,
                       f"{worst:.1e} on {n} pts"))
    ell = srf.fixture("ellipsoid")
    u, v = ell.grid(3, 3)[4]
    r = geo.qzbar_identity_residual(ell, quarter, u, v)
    checks.append(("Q_zbar ellipsoid", r < 1e-5, f"{r:.1e}"))
    steps = [0.04, 0.02, 0.01]
    ladder = [geo.qzbar_identity_residual(ell, quarter, u, v, fd_step=h) for h in steps]
    sl = slope(steps, ladder)
    checks.append(("step decay", abs(sl - 2) <= 0.3, f"slope {sl:.3f}"))
    cz = geo.codazzi_residual(ell, u, v)
    checks.append(("Codazzi", cz < 1e-5, f"{cz:.1e}"))
    report(8, checks, t0)


def test_criterion_9_radius_solvers():
    t0 = time.perf_counter()
    R = geo.sphere_radius_for_weight(geo.linear_weight(0.25))
    checks = [("F=t/4", abs(R / 2 - 1) < 1e-12, f"R={R!r}")]
    worst = max(abs(geo.lambda_sphere_radius(l) * (geo.lambda_sphere_radius(l) + 2 * l) / 4 - 1)
                for l in (-2.0, 0.0, 1.5, 10.0))
    checks.append(("R(R+2 lambda)=4", worst < 1e-12, f"{worst:.1e}"))
    report(9, checks, t0)


_ALL_COMMANDS = """
import sys
from shrinkerlab import cli
for argv in [["profile"], ["umbilics"], ["lp-check"], ["axis-limit"], ["taylor-audit"],
             ["kq"], ["pompeiu"], ["order"], ["index"], ["surface-suite"], ["shoot"]]:
    cli.run(cli.parse_config(argv + ["--out", "suite"]))
"""


def test_criterion_10_reproducibility():
    t0 = time.perf_counter()
    with tempfile.TemporaryDirectory() as tmp:
        dirs = [Path(tmp, "run1"), Path(tmp, "run2")]
        for d in dirs:
            d.mkdir()
            subprocess.run([sys.executable, "-c", _ALL_COMMANDS], cwd=d, check=True,
                           timeout=600)
        files = sorted(p.name for p in (dirs[0] / "suite").iterdir())
        same = [(dirs[0] / "suite" / f).read_bytes() == (dirs[1] / "suite" / f).read_bytes()
                for f in files]
        n_data = sum(f.endswith((".csv", ".json")) for f in files)
    checks = [("byte-identical", all(same) and n_data >= 11,
               f"{sum(same)}/{len(files)} files ({n_data} csv/json)")]
    report(10, checks, t0)


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(((k, v) for k, v in dict(globals()).items()
                            if k.startswith("test_criterion_")),
                           key=lambda kv: int(kv[0].split("_")[2])):
        try:
            fn()
        except AssertionError:
            failed += 1
        print(ACCEPTANCE_LINES[-1], flush=True)
    sys.exit(1 if failed else 0)
