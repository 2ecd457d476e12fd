"""Shooting from the axis: how profiles leave the graph regime as b grows.

Exploration only. Run:  python3 demos/05_shooting.py
"""
# %%
from pathlib import Path

from shrinkerlab import rotational as rot
from shrinkerlab.reporting import svg_polyline

rows = rot.shoot_profile((0.25, 4.0), 16)
for r in rows:
    print(f"b={r['b']:.3f}  {r['class']:24s} turns={r['vertical_tangents']}"
          f"  crossings={r['height_zero_crossings']}")

# %% a few profiles in the (x, y) plane
series = {}
for b in (0.5, 2.0, 3.0):
    _, curve = rot.shoot_one(b, s_max=12)
    series[f"b={b:g}"] = (curve.values[:, 0], curve.values[:, 1])
out = Path("shooting.svg")
out.write_text(svg_polyline(series, title="profiles from the axis", xlabel="x", ylabel="y"))
print("wrote", out)
