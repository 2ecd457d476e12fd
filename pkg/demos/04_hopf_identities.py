"""Shape invariants, the Hopf differential and the Q_zbar identity on fixture surfaces.

Run:  python3 demos/04_hopf_identities.py
"""
# %%
from shrinkerlab import geometry as geo
from shrinkerlab import surfaces as srf

quarter = geo.linear_weight(0.25)   # Gaussian weight of self-shrinkers

for name in ("sphere", "cylinder", "plane", "torus", "ellipsoid"):
    surf = srf.fixture(name)
    rows = geo.surface_grid_report(surf, n=10)
    print(f"{name:9s} max |H + <X,nu>/2| = {max(abs(r.shrinker_residual) for r in rows):.1e}"
          f"  max |phi^2 - 8|P|^2/alpha^2| = {max(r.hopf_identity_residual for r in rows):.1e}")

# %% the ellipsoid chart is conformal (ellipsoidal coordinates), so Q is defined
ell = srf.fixture("ellipsoid")
u, v = ell.grid(3, 3)[4]
hs = geo.hopf_differential(ell, quarter, u, v)
print("P =", hs.P, " Q =", hs.Q)

# Q_zbar = (alpha/4) e^{-F/2} [(H_f)_z + (F' H_f - 2(2F'' + F'^2)<X,nu>) <X, X_z>]
t = geo.qzbar_terms(ell, quarter, u, v)
print(f"differenced {t.fd:.10f}\nclosed form {t.closed:.10f}")
print(f"without the (H_f)_z term {t.reduced:.10f}")

for h in (0.04, 0.02, 0.01, 0.005):
    print(f"fd_step={h}: residual {geo.qzbar_identity_residual(ell, quarter, u, v, fd_step=h):.3e}")

print("Codazzi residual:", geo.codazzi_residual(ell, u, v))

# %% spheres with vanishing weighted mean curvature
print("F = t/4:", geo.sphere_radius_for_weight(quarter))
print("F = t/10 + t^2/20:", geo.sphere_radius_for_weight(geo.quadratic_weight(0.1, 0.05)))
for lam in (-2.0, 0.0, 1.5, 10.0):
    print(f"lambda={lam}: radius {geo.lambda_sphere_radius(lam)}")
