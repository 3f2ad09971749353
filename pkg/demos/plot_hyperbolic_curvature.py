"""
Curvature of hyperbolic space from second-order jets
====================================================

Propagate value, gradient and Hessian through the metric of the upper
half-space model and read off Christoffel symbols and Ricci curvature.
"""

import numpy as np

from warpcheck import geometry, jets, models

# %%
# A jet carries a value with its first and second derivatives.  Seeding
# the chart point gives one independent variable per coordinate.
x = jets.seed_point([0.3, -1.0, 2.0])
f = x[0] * x[0] / x[2] + jets.sqrt(x[1] * x[1] + 1.0)
print("value   ", f.value)
print("gradient", f.gradient)
print("hessian\n", f.hessian)

# %%
# The half-space metric delta_ij / x_n^2 is Einstein with constant -(n-1).
for n in range(3, 7):
    h = models.hyperbolic_metric(n)
    p = np.full(n, 0.4)
    p[-1] = 1.7
    c = geometry.ricci(h, p)
    dev = np.max(np.abs(c.ricci + (n - 1) * c.metric_value))
    print(f"n={n}  Ric + (n-1) g  max |.| = {dev:.1e}   normalized scalar = {c.normalized_scalar:.6f}")

# %%
# Christoffel symbols of the conformal metric delta / phi^2 have a closed
# form; compare it with the general formula.
phi = geometry.ScalarField(3, lambda x: x[2])
p = np.array([0.1, 0.2, 1.5])
closed = geometry.conformal_christoffel(phi, p)
general = geometry.christoffel(models.hyperbolic_metric(3), p)
print("closed form vs general:", np.max(np.abs(closed - general)))
