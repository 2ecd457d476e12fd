"""Command-line front end: ``shrinkerlab <command> [--flags] [--config FILE]``.

Every command writes ``<out>/<command>.json`` (tool version, resolved
configuration, tagged results) and, where it makes sense, CSV tables and an
SVG figure. Errors are reported as a JSON object on stderr with a nonzero
exit status.
"""

import argparse
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__, geometry, rotational, surfaces, weakholo
from .errors import ConfigError, ShrinkerLabError
from .reporting import ReportBundle, dumps, svg_polyline, tagged, write_csv, write_json
from .util import loglog_fit

DEFAULT_SEED = 20240607

# parameter name -> (parser, default)
_F = float
_I = int


def _floats(text):
    return [float(t) for t in str(text).split(",") if t.strip()]


def _strs(text):
    return [t.strip() for t in str(text).split(",") if t.strip()]


def _cplx(text):
    return complex(str(text).replace(" ", "").replace("i", "j"))


COMMON = {"out": (str, "shrinkerlab-out")}

COMMANDS = {
    "profile": {"b": (_F, 1.0), "x_end": (_F, 1.0), "tol": (_F, 1e-12)},
    "umbilics": {"b": (_F, 1.0), "x_end": (_F, 1.0), "tol": (_F, 1e-12)},
    "lp-check": {"b": (_F, 1.0), "p": (_F, 3.0), "eps": (_F, 0.2),
                 "deltas": (_floats, "1e-4,5e-5,2.5e-5,1.25e-5")},
    "axis-limit": {"b": (_F, 1.0), "x_start": (_F, 0.1), "levels": (_I, 6)},
    "taylor-audit": {"b": (_F, 1.0), "order": (_I, 8)},
    "kq": {"q": (_F, 1.5), "tol": (_F, 1e-6), "eps": (_F, 0.25),
           "mc_samples": (_I, 10_000_000), "seed": (_I, DEFAULT_SEED)},
    "pompeiu": {"field": (str, "monomial_zbar:k=2"), "k": (_I, 2), "xi": (_cplx, "0.3+0.2i"),
                "radius": (_F, 1.0), "grid_n": (_I, 256)},
    "order": {"field": (str, "monomial:k=3"), "z0": (_cplx, "0"),
              "radii": (_floats, "0.1,0.05,0.025,0.0125")},
    "index": {"field": (str, "monomial:k=1"), "z0": (_cplx, "0"), "r": (_F, 0.1)},
    "surface-suite": {"fixtures": (_strs, "sphere,cylinder,plane,ellipsoid,torus"),
                      "n": (_I, 10), "weight_c": (_F, 0.25)},
    "shoot": {"b_min": (_F, 0.1), "b_max": (_F, 5.0), "n": (_I, 12), "s_max": (_F, 40.0),
              "radius_cap": (_F, 8.0)},
}

POSITIVE = {"tol", "eps", "x_end", "radius", "r", "x_start", "s_max", "radius_cap", "mc_samples",
            "grid_n", "n", "levels", "order"}


@dataclass
class RunConfig:
    command: str
    parameters: dict = field(default_factory=dict)


def _spec(command):
    if command not in COMMANDS:
        raise ConfigError(f"unknown command {command!r}; choose from {sorted(COMMANDS)}")
    return {**COMMANDS[command], **COMMON}


def read_config_file(path, command):
    """Flat ``key = value`` file; ``#`` starts a comment."""
    spec = _spec(command)
    values = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" in line:
            key, _, val = line.partition("=")
        elif ":" in line:
            key, _, val = line.partition(":")
        else:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key = key.strip().replace("-", "_")
        if key not in spec:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r} for {command}")
        values[key] = val.strip()
    return values


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _build_parser():
    parser = _Parser(
        prog="shrinkerlab",
        description="Numerical checks for rotational self-shrinkers, weak holomorphy "
                    "and Hopf-type quadratic differentials.")
    parser.add_argument("--version", action="version", version=f"shrinkerlab {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="command")
    for name, params in COMMANDS.items():
        p = sub.add_parser(name, help=f"run {name}")
        p.add_argument("--config", help="flat key=value file; flags override it")
        for key, (_, default) in {**params, **COMMON}.items():
            p.add_argument("--" + key.replace("_", "-"), dest=key, default=None,
                           help=f"default: {default}")
    return parser


def _validate(command, params):
    for key, val in params.items():
        if key in POSITIVE and not val > 0:
            raise ConfigError(f"{key} must be positive")
    if command == "lp-check" and not params["p"] > 2:
        raise ConfigError("p must exceed 2")
    if command == "kq" and not 1 < params["q"] < 2:
        raise ConfigError("q must lie in (1, 2)")
    if command == "taylor-audit" and (params["order"] < 4 or params["order"] % 2):
        raise ConfigError("order must be an even integer >= 4")


def parse_config(argv, parser=None):
    """argv -> RunConfig; precedence is flag > config file > default."""
    parser = parser or _build_parser()
    args = parser.parse_args(argv)
    if not args.command:
        raise ConfigError("no command given")
    spec = _spec(args.command)
    raw = {k: d for k, (_, d) in spec.items()}
    if args.config:
        raw.update(read_config_file(args.config, args.command))
    for key in spec:
        val = getattr(args, key, None)
        if val is not None:
            raw[key] = val
    params = {}
    for key, (conv, _) in spec.items():
        val = raw[key]
        try:
            params[key] = conv(val)
        except (TypeError, ValueError):
            flag = "--" + key.replace("_", "-")
            raise ConfigError(f"bad value {val!r} for {flag}") from None
    _validate(args.command, params)
    return RunConfig(args.command, params)


# --------------------------------------------------------------------------
# command implementations: each returns (results, csv tables, svg figures)


def _profile_rows(curve):
    rows = []
    for x, (g, gp) in zip(curve.param, curve.values):
        cs = curve.sample_at(float(x)) if x > 0 else None
        if cs is None:
            continue
        rows.append([x, g, gp, cs.k1, cs.k2, cs.H, cs.phi_norm, cs.tangency_defect, cs.F_val])
    return rows


PROFILE_HEADER = ["x", "gamma", "gamma_p", "k1", "k2", "H", "phi_norm", "defect", "F"]


def cmd_profile(p):
    curve = rotational.integrate_graph(p["b"], p["x_end"], p["tol"])
    rows = _profile_rows(curve)
    xs = np.array([r[0] for r in rows])
    res = {
        "status": curve.status,
        "events": [{"kind": k, "location": tagged(x, "measured", 1e-12)} for k, x in curve.events],
        "x_final": tagged(curve.param[-1], "measured"),
        "gamma_final": tagged(curve.values[-1, 0], "measured", p["tol"]),
        "n_samples": tagged(len(rows), "measured"),
    }
    if p["b"] == 2.0:
        err = float(np.max(np.abs(curve.values[:, 0] - np.sqrt(4 - curve.param ** 2))))
        res["sphere_max_error"] = tagged(err, "derived-oracle", 1e-8)
    svg = svg_polyline({"gamma": (xs, [r[1] for r in rows])},
                       title=f"profile b={p['b']:g}", xlabel="x", ylabel="gamma")
    return res, [("profile", PROFILE_HEADER, rows)], [("profile", svg)]


def cmd_umbilics(p):
    curve = rotational.integrate_graph(p["b"], p["x_end"], p["tol"])
    scan = rotational.umbilic_scan(curve)
    res = {"totally_umbilic": scan.totally_umbilic,
           "locations": [tagged(x, "measured", 1e-10) for x in scan.locations],
           "x_range": tagged([curve.param[0], curve.param[-1]], "measured")}
    return res, [("umbilics", ["x"], [[x] for x in scan.locations])], []


def cmd_lp_check(p):
    slope, vals = rotational.lp_divergence_exponent(p["b"], p["p"], p["deltas"], p["eps"])
    res = {"fitted_exponent": tagged(slope, "measured", 0.05),
           "expected_exponent": tagged(2 - p["p"], "derived-oracle"),
           "integrals": [tagged(v, "measured", 1e-10) for v in vals]}
    svg = svg_polyline({"I(delta)": (p["deltas"], vals)}, title=f"L^p integral, p={p['p']:g}",
                       xlabel="delta", ylabel="I", logx=True, logy=True)
    return res, [("lp_check", ["delta", "integral"], list(zip(p["deltas"], vals)))], [("lp_check", svg)]


def cmd_axis_limit(p):
    rep = rotational.axis_ratio_limit(p["b"], p["x_start"], p["levels"])
    res = {"limit": tagged(rep.limit, "measured", 1e-4),
           "richardson_stability": tagged(rep.stability, "measured"),
           "series_prediction": tagged(rep.series_prediction, "derived-oracle", 1e-4),
           "published_formula": tagged(rep.published_value, "paper-formula"),
           "relative_gap_to_series": tagged(abs(rep.limit / rep.series_prediction - 1),
                                            "measured", 1e-4)}
    rows = list(zip(rep.xs, rep.values))
    svg = svg_polyline({"x*ratio": (rep.xs, rep.values)}, title=f"axis limit b={p['b']:g}",
                       xlabel="x", ylabel="x*ratio", logx=True)
    return res, [("axis_limit", ["x", "x_ratio"], rows)], [("axis_limit", svg)]


def _half_binomial(n):
    """binom(1/2, n) as a fraction."""
    out = Fraction(1)
    for j in range(n):
        out *= (Fraction(1, 2) - j) / (j + 1)
    return out


def taylor_audit(b, order):
    coeffs = rotational.series_coefficients(b, order, exact=True)
    xs = np.geomspace(1e-3, 1e-1, 9)
    resid = [abs(rotational.series_ode_residual(b, order, x)) for x in xs]
    slope = loglog_fit(xs, resid)[0] if min(resid) > 0 else math.inf
    out = {
        "coefficients": [tagged(float(c), "measured") for c in coeffs],
        "coefficients_exact": [str(c) for c in coeffs],
        "a2_closed_form": tagged(-b / 8, "paper-formula", 1e-12),
        "ode_residual_slope": tagged(slope, "measured", 0.2),
        "a4_comparison": {
            "published": tagged(rotational.published_a4(b), "paper-formula"),
            "computed": tagged(float(coeffs[2]), "measured", 1e-12),
            "ode_consistent": tagged(-(b / 256) * (1 + b * b / 4), "derived-oracle", 1e-12),
        },
    }
    if b == 2.0:
        binom = [float(2 * _half_binomial(n) * Fraction(-1, 4) ** n) for n in range(len(coeffs))]
        out["sphere_binomial_max_error"] = tagged(
            max(abs(float(c) - e) for c, e in zip(coeffs, binom)), "derived-oracle", 1e-12)
    return out, list(zip(xs, resid))


def cmd_taylor_audit(p):
    res, rows = taylor_audit(p["b"], p["order"])
    return res, [("taylor_residual", ["x", "ode_residual"], rows)], []


def cmd_kq(p):
    det = weakholo.kq_constant(p["q"], p["tol"], p["eps"])
    mc, se = weakholo.kq_monte_carlo(p["q"], p["mc_samples"], p["seed"], p["eps"])
    res = {"kq": tagged(det.value, "measured", p["tol"]),
           "error_estimate": tagged(det.error, "measured"),
           "parts": {k: tagged(v, "measured") for k, v in det.parts.items()},
           "monte_carlo": tagged(mc, "derived-oracle", 0.005),
           "monte_carlo_stderr": tagged(se, "measured"),
           "relative_gap": tagged(abs(mc / det.value - 1), "measured", 0.005)}
    return res, [], []


def cmd_pompeiu(p):
    f = weakholo.builtin_field(p["field"])
    dom = weakholo.DiscDomain(0j, p["radius"], p["grid_n"])
    t = weakholo.cauchy_pompeiu_terms(f, p["k"], p["xi"], dom)
    res = {"lhs": tagged(t.lhs, "measured"), "boundary": tagged(t.boundary, "measured"),
           "area": tagged(t.area, "measured"), "residual": tagged(t.residual, "measured", 1e-5),
           "area_refinement_change": tagged(t.area_change, "measured")}
    return res, [], []


def cmd_order(p):
    f = weakholo.builtin_field(p["field"])
    rep = weakholo.zero_order_loglog(f, p["z0"], p["radii"])
    res = {"order_loglog": tagged(rep.order_loglog, "measured", 0.01),
           "order_winding": tagged(rep.order_winding, "measured", 0),
           "fit_residual": tagged(rep.fit_residual, "measured"),
           "radii_used": tagged(rep.radii_used, "measured")}
    return res, [], []


def cmd_index(p):
    f = weakholo.builtin_field(p["field"])
    w = weakholo.zero_order_winding(f, p["z0"], p["r"])
    res = {"winding": tagged(w, "measured", 0), "index": tagged(-w / 2, "measured", 0)}
    return res, [], []


def cmd_surface_suite(p):
    weight = geometry.linear_weight(p["weight_c"])
    res, tables = {}, []
    for name in p["fixtures"]:
        surf = surfaces.fixture(name)
        rows = geometry.surface_grid_report(surf, p["n"])
        conformal = [r for r in rows if not math.isnan(r.hopf_identity_residual)]
        entry = {
            "points": tagged(len(rows), "measured"),
            "conformal_points": tagged(len(conformal), "measured"),
            "max_shrinker_residual": tagged(max(abs(r.shrinker_residual) for r in rows), "measured"),
            "max_phi_identity_residual": tagged(max(r.phi_identity_residual for r in rows),
                                                "measured", 1e-10),
            "max_hopf_identity_residual": tagged(
                max((r.hopf_identity_residual for r in conformal), default=0.0), "measured", 1e-8),
        }
        if name == "ellipsoid":
            u, v = surf.grid(3, 3)[4]
            ladder = [0.04, 0.02, 0.01]
            vals = [geometry.qzbar_identity_residual(surf, weight, u, v, h) for h in ladder]
            entry["qzbar_residual"] = tagged(geometry.qzbar_identity_residual(surf, weight, u, v),
                                             "measured", 1e-5)
            entry["qzbar_ladder"] = {"steps": tagged(ladder, "measured"),
                                     "residuals": tagged(vals, "measured"),
                                     "slope": tagged(loglog_fit(ladder, vals)[0], "measured", 0.3)}
            entry["codazzi_residual"] = tagged(geometry.codazzi_residual(surf, u, v), "measured", 1e-5)
        res[name] = entry
        tables.append((f"surface_{name}",
                       ["u", "v", "H", "K", "phi_norm", "shrinker_residual",
                        "phi_identity_residual", "hopf_identity_residual"],
                       [[r.u, r.v, r.H, r.K, r.phi_norm, r.shrinker_residual,
                         r.phi_identity_residual, r.hopf_identity_residual] for r in rows]))
    res["sphere_radius_for_weight"] = tagged(geometry.sphere_radius_for_weight(weight),
                                             "measured", 1e-12)
    res["lambda_sphere_radius"] = {str(lam): tagged(geometry.lambda_sphere_radius(lam), "measured",
                                                    1e-12) for lam in (-2.0, 0.0, 1.5, 10.0)}
    return res, tables, []


def cmd_shoot(p):
    table = rotational.shoot_profile((p["b_min"], p["b_max"]), p["n"], s_max=p["s_max"],
                                     radius_cap=p["radius_cap"])
    header = list(table[0].keys()) if table else ["b", "class"]
    return {"table": tagged(table, "measured")}, [("shoot", header, [list(r.values()) for r in table])], []


HANDLERS = {
    "profile": cmd_profile, "umbilics": cmd_umbilics, "lp-check": cmd_lp_check,
    "axis-limit": cmd_axis_limit, "taylor-audit": cmd_taylor_audit, "kq": cmd_kq,
    "pompeiu": cmd_pompeiu, "order": cmd_order, "index": cmd_index,
    "surface-suite": cmd_surface_suite, "shoot": cmd_shoot,
}


def run(config):
    """Execute one command and write its outputs; returns a ReportBundle."""
    params = config.parameters
    results, tables, figures = HANDLERS[config.command](params)
    out = Path(params["out"])
    bundle = ReportBundle()
    for name, header, rows in tables:
        bundle.csv_paths.append(write_csv(out / f"{name}.csv", header, rows))
    for name, svg in figures:
        path = out / f"{name}.svg"
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(svg, encoding="utf-8")
        bundle.svg_or_script_paths.append(path)
    bundle.json_summary = {
        "tool": "shrinkerlab",
        "version": __version__,
        "config": {"command": config.command,
                   "parameters": {k: params[k] for k in sorted(params)}},
        "results": results,
        "outputs": [p.name for p in bundle.csv_paths + bundle.svg_or_script_paths],
    }
    bundle.json_path = write_json(out / f"{config.command.replace('-', '_')}.json",
                                  bundle.json_summary)
    return bundle


def _error(kind, message, command=None, code=2):
    sys.stderr.write(dumps({"error": {"type": kind, "message": message, "command": command}}))
    return code


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = _build_parser()
    if not argv:
        parser.print_usage(sys.stderr)
        return 2
    try:
        config = parse_config(argv, parser)
    except ConfigError as exc:
        return _error("ConfigError", str(exc), argv[0] if argv else None)
    except SystemExit as exc:
        return int(exc.code or 0)
    except OSError as exc:
        return _error("ConfigError", str(exc), argv[0])
    try:
        bundle = run(config)
    except (ShrinkerLabError, ValueError, ArithmeticError) as exc:
        return _error(type(exc).__name__, str(exc), config.command, code=1)
    sys.stdout.write(dumps(bundle.json_summary))
    return 0


if __name__ == "__main__":
    sys.exit(main())
