"""Serialization: CSV with round-trip floats, tagged JSON summaries, SVG polylines."""

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

PROVENANCE = ("paper-formula", "derived-oracle", "measured")


def tagged(value, provenance="measured", tolerance=None):
    """Numeric result with its provenance and tolerance tags."""
    if provenance not in PROVENANCE:
        raise ValueError(f"unknown provenance {provenance!r}")
    return {"value": to_jsonable(value), "provenance": provenance, "tolerance": tolerance}


def fmt(x):
    """17 significant digits, '.' decimal; complex as a+bj."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return "%.17g" % float(x)
    if isinstance(x, (complex, np.complexfloating)):
        return "%.17g%+.17gj" % (x.real, x.imag)
    if x is None:
        return ""
    return str(x)


def to_jsonable(x):
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, np.ndarray)):
        return [to_jsonable(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else repr(x)
    if isinstance(x, (complex, np.complexfloating)):
        return {"re": to_jsonable(x.real), "im": to_jsonable(x.imag)}
    return x


def write_csv(path, header, rows):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])
    return path


def dumps(payload):
    return json.dumps(to_jsonable(payload), indent=2, allow_nan=False) + "\n"


def write_json(path, payload):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(payload), encoding="utf-8")
    return path


def svg_polyline(series, title="", xlabel="", ylabel="", logx=False, logy=False,
                 width=640, height=420):
    """Minimal SVG line plot; ``series`` maps a label to (xs, ys)."""
    pad = 60
    tx = (lambda v: math.log10(v)) if logx else float
    ty = (lambda v: math.log10(v)) if logy else float
    pts = {k: [(tx(x), ty(y)) for x, y in zip(xs, ys)
               if math.isfinite(x) and math.isfinite(y) and (not logx or x > 0)
               and (not logy or y > 0)]
           for k, (xs, ys) in series.items()}
    allp = [p for v in pts.values() for p in v]
    if not allp:
        allp = [(0.0, 0.0), (1.0, 1.0)]
    x0, x1 = min(p[0] for p in allp), max(p[0] for p in allp)
    y0, y1 = min(p[1] for p in allp), max(p[1] for p in allp)
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y1 = y0 + 1.0
    sx = lambda x: pad + (x - x0) / (x1 - x0) * (width - 2 * pad)
    sy = lambda y: height - pad - (y - y0) / (y1 - y0) * (height - 2 * pad)
    colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
           f'<rect x="{pad}" y="{pad}" width="{width - 2 * pad}" height="{height - 2 * pad}" '
           'fill="none" stroke="#444"/>',
           f'<text x="{width / 2}" y="{pad / 2}" text-anchor="middle">{title}</text>',
           f'<text x="{width / 2}" y="{height - 15}" text-anchor="middle">'
           f'{("log10 " if logx else "") + xlabel}</text>',
           f'<text x="15" y="{height / 2}" transform="rotate(-90 15 {height / 2})" '
           f'text-anchor="middle">{("log10 " if logy else "") + ylabel}</text>',
           f'<text x="{pad}" y="{height - pad + 15}" font-size="10">{x0:.4g}</text>',
           f'<text x="{width - pad}" y="{height - pad + 15}" font-size="10" '
           f'text-anchor="end">{x1:.4g}</text>',
           f'<text x="{pad - 5}" y="{height - pad}" font-size="10" text-anchor="end">{y0:.4g}</text>',
           f'<text x="{pad - 5}" y="{pad + 10}" font-size="10" text-anchor="end">{y1:.4g}</text>']
    for i, (label, p) in enumerate(pts.items()):
        col = colors[i % len(colors)]
        coords = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in p)
        out.append(f'<polyline fill="none" stroke="{col}" stroke-width="1.5" points="{coords}"/>')
        out.append(f'<text x="{width - pad - 5}" y="{pad + 15 + 14 * i}" font-size="11" '
                   f'text-anchor="end" fill="{col}">{label}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


@dataclass
class ReportBundle:
    csv_paths: list = field(default_factory=list)
    json_summary: dict = field(default_factory=dict)
    svg_or_script_paths: list = field(default_factory=list)
    json_path: Path = None
