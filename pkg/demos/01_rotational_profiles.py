"""Rotational self-shrinker profiles: series start, integration, axis diagnostics.

Run:  python3 demos/01_rotational_profiles.py
"""
# %%
import numpy as np

from shrinkerlab import rotational as rot

# The profile gamma(x) of a rotational shrinker solves a singular ODE at x = 0.
# Starting on the axis at height b, the even series is built in exact rationals.
for b in (1.0, 2.0):
    print(f"b={b:g}:", [str(c) for c in rot.series_coefficients(b, 8, exact=True)])

# b = 2 is the sphere sqrt(4 - x^2). The quartic coefficient quoted in the
# literature, -(b/256)(3 + b^2/4), gives -1/32 there; the ODE gives -1/64.
print("published a4(2) =", rot.published_a4(2.0), " series a4(2) =",
      rot.series_coefficients(2.0, 8)[2])

# %% the truncated series leaves an O(x^8) residual
xs = np.geomspace(1e-3, 1e-1, 7)
res = [abs(rot.series_ode_residual(1.0, 8, x)) for x in xs]
print("residual slope:", np.polyfit(np.log(xs), np.log(res), 1)[0])

# %% integrate off the axis and compare with the sphere
curve = rot.integrate_graph(2.0, 1.9)
err = np.max(np.abs(curve.values[:, 0] - np.sqrt(4 - curve.param ** 2)))
print(f"sphere max error {err:.1e}, events {curve.events}")

curve = rot.integrate_graph(1.0, 1.0)
for x in (0.05, 0.25, 0.5, 1.0):
    cs = curve.sample_at(x)
    print(f"x={x:<5g} gamma={curve.state_at(x).gamma:.12f} k1={cs.k1:+.6f} k2={cs.k2:+.6f}"
          f" phi={cs.phi_norm:.3e}")

# %% the axis is the only umbilic of the b=1 profile on [0, 1]
print(rot.umbilic_scan(curve))

# %% x * |Phi| / (|H| (|X|^2 - 4H^2)) tends to 16 sqrt(2) for every b outside {0, 2}
for b in (0.5, 1.0, 3.0):
    rep = rot.axis_ratio_limit(b)
    print(f"b={b:g} limit={rep.limit:.12f} series={rep.series_prediction:.12f}"
          f" published formula={rep.published_value:.6f}")
print("16 sqrt 2 =", 16 * np.sqrt(2))

# %% so the ratio behaves like 1/x and is not in L^p near the axis for p > 2
for b, p in ((1.0, 2.5), (1.0, 3.0), (3.0, 3.0)):
    slope, _ = rot.lp_divergence_exponent(b, p, [1e-4, 5e-5, 2.5e-5, 1.25e-5], 0.2)
    print(f"b={b:g} p={p:g}: exponent {slope:.4f} (expected {2 - p:g})")

# %% orders of vanishing at the axis
rep = rot.zero_order_report(1.0)
print(f"|Phi|^2 ~ x^{rep.phi_sq_order:.3f}, (|X|^2-4H^2)H^2 ~ x^{rep.defect_h2_order:.3f},"
      f" difference {rep.criterion:.3f}")
