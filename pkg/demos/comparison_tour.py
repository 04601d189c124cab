"""
Curvature comparison, one ball at a time
========================================

A geodesic ball whose sectional curvature stays below K has a larger
half-eigenvalue than the ball of the same radius in the space form of
curvature K; a lower bound on curvature reverses the inequality. Here the
comparisons are run by hand on a few balls, then the revolution surfaces
are compared to the flat disk.
"""

import math

import numpy as np

from pucci import (
    GeodesicBall,
    PucciParams,
    TabulatedWarp,
    builtin_profile,
    cheng_compare,
    curvature_profile,
    lemma_checks,
    revolution_compare,
)

p = PucciParams(0.5, 4.0)

# a warp between the hyperbolic ones of curvature -1 and -1/2
r = np.linspace(0.0, 1.0, 2001)
rho = 0.5 * (np.sinh(r) + math.sqrt(2.0) * np.sinh(r / math.sqrt(2.0)))
ball = GeodesicBall(3, 1.0, TabulatedWarp(r, rho, method="spline", label="pinched"))

prof = curvature_profile(ball)
inside = np.isfinite(prof.K_rad)
print(f"radial curvature in [{prof.K_rad[inside].min():.3f}, {prof.K_rad[inside].max():.3f}]")

for K, mode in [(-0.5, "sec_upper"), (-1.0, "sec_lower")]:
    row = cheng_compare(ball, K, p, "plus", mode)
    print(f"{mode:>10} vs K = {K:5.2f}: lambda = {row.lambda_manifold:.6f}, "
          f"model = {row.lambda_model:.6f}, margin = {row.margin:+.2e}, hypothesis {row.hypothesis}")

# the pointwise steps behind the comparison: zeta ordering and the volume ratio
rep = lemma_checks(ball, -0.5)
print(f"lemma checks against K = -0.5: rauch {rep.rauch}, ok = {rep.ok}")

# surfaces of revolution with a graph over the unit disk
print("\nprofile             lambda_surface  lambda_disk  margin")
for spec in ["disk", "bump:0.5", "paraboloid:0.5", "cap:0.785398163397", "hemisphere"]:
    row = revolution_compare(builtin_profile(spec), p, "plus")
    print(f"{spec:<20}{row.lambda_manifold:14.6f}{row.lambda_model:13.6f}  {row.margin:+.4f}")
