"""K_q by singular quadrature, and the Cauchy-Pompeiu formula with a zero of order k.

Run:  python3 demos/02_singular_quadrature.py
"""
# %%
import math

import numpy as np
from scipy.special import gamma

from shrinkerlab import weakholo as wh

# K_q = int over C of |dw ^ dw-bar| / |w (w - 1)|^q, split into discs around the
# two singular points, an annulus, an exterior shell and an analytic tail.
res = wh.kq_constant(1.5)
print(f"K_1.5 = {res.value:.12f} +- {res.error:.1e}")
for k, v in res.parts.items():
    print(f"  {k:9s} {v:.12g}")

# a closed form through the Beta integral, for comparison only
q = 1.5
closed = math.pi * (gamma(1 - q / 2) / gamma(q / 2)) ** 2 * gamma(q - 1) / gamma(2 - q)
print(f"closed form   {closed:.12f}")

est, se = wh.kq_monte_carlo(1.5)
print(f"Monte Carlo   {est:.5f} +- {se:.5f}")

# %% blow-up as q -> 2
for q in (1.5, 1.8, 1.9, 1.95, 1.99):
    print(f"q={q}: {wh.kq_constant(q).value:.6f}")

# %% Cauchy-Pompeiu: 2 pi i h(xi) xi^-k = boundary integral + area integral
xi = 0.3 + 0.2j
for spec, k in (("monomial:k=2", 2), ("monomial_zbar:k=2", 2), ("monomial_zbar:k=3", 3)):
    t = wh.cauchy_pompeiu_terms(wh.builtin_field(spec), k, xi, wh.DiscDomain(grid_n=512))
    print(f"{spec:18s} lhs={t.lhs:.10f} boundary={t.boundary:.10f} area={t.area:.10f}"
          f" residual={t.residual:.1e}")

# %% second-order convergence for a field whose area term is not band limited
field = wh.FieldOnDisc.closed_form(lambda z: z ** 3 * np.conj(z), lambda z: z ** 3)
for n in (64, 128, 256, 512):
    print(n, wh.cauchy_pompeiu_residual(field, 2, xi, wh.DiscDomain(grid_n=n)))
