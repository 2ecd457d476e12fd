"""Orders of zeros, winding numbers and line-field indices.

Run:  python3 demos/03_orders_and_indices.py
"""
# %%
import numpy as np

from shrinkerlab import weakholo as wh

radii = [0.1 * 2.0 ** -j for j in range(6)]
for spec, z0 in (("monomial:k=3", 0), ("shifted_power:a=0.2,k=2 * linear:c0=3,c1=1", 0.2),
                 ("monomial_zbar:k=2", 0)):
    rep = wh.zero_order_loglog(wh.builtin_field(spec), z0, radii)
    print(f"{spec:45s} loglog order {rep.order_loglog:.5f}  winding {rep.order_winding}")

# z^2 zbar vanishes to order 3 but winds once: it is not of the form (z - z0)^k h_k.
# Its zbar derivative z^2 is only bounded by |h| / |z|, and 1/|z| is not in L^p for p > 2.

# %% the Hopf line field Im(P dz^2) = 0 has index -k/2 at a zero of order k
for k in range(5):
    print(f"P = z^{k}: index {wh.direction_field_index(wh.monomial(k), 0, 0.1)}")

# %% weak holomorphy |h_zbar| <= phi G(|h|) on a grid
half = wh.DiscDomain(radius=0.5)
ok = wh.GrowthBound(lambda z: np.full(np.shape(z), 2.0), lambda t: t, 3.0)
bad = wh.GrowthBound(lambda z: np.ones(np.shape(z)), lambda t: t, 3.0)
print("z exp(zbar), phi=2:", wh.weak_bound_margin(wh.z_exp_zbar(), ok, half))
print("zbar, phi=1:       ", wh.weak_bound_margin(wh.conj_z(), bad, half))
