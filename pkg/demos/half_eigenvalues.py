"""
Half-eigenvalues of the Pucci operator on space-form balls
==========================================================

For a = A the operator is a multiple of the Laplacian, so both
half-eigenvalues agree with the Dirichlet eigenvalue of the ball. Once the
ellipticity constants separate, the positive and negative eigenfunctions
feel different weights and the two eigenvalues split.
"""

import math

import numpy as np

from pucci import PucciParams, principal_half_eigenvalue, space_form_ball

# the unit ball in R^3 has first Dirichlet eigenvalue pi^2
ball = space_form_ball(3, 1.0, 0.0)
res = principal_half_eigenvalue(ball, PucciParams(1.0, 1.0))
print(f"R^3 unit ball, Laplacian: {res.lam:.12f}  (pi^2 = {math.pi ** 2:.12f})")

# split the constants and watch lambda+ and lambda- move apart
print("\n  a     A     lambda+       lambda-")
for a, A in [(1, 1), (1, 2), (0.5, 4), (0.25, 8)]:
    p = PucciParams(a, A)
    lp = principal_half_eigenvalue(ball, p, "plus").lam
    lm = principal_half_eigenvalue(ball, p, "minus").lam
    print(f"{a:5.2f} {A:5.2f} {lp:12.6f} {lm:12.6f}")

# at fixed radius, negative curvature raises the eigenvalue and positive
# curvature lowers it (K = -1, n = 3 gives pi^2 + 1 for the Laplacian)
print("\n  K      lambda+ on B(1) in dimension 3, (a, A) = (1, 2)")
for K in np.linspace(-1.0, 1.0, 5):
    lam = principal_half_eigenvalue(space_form_ball(3, 1.0, K), PucciParams(1, 2)).lam
    print(f"{K:5.2f}  {lam:.8f}")

# the eigenfunction is returned on the integration grid
phi = res.eigenfunction
print(f"\neigenfunction: phi(0) = {phi.f[0]:.3f}, phi(R) = {phi.f[-1]:.1e}, "
      f"{phi.r.size} grid points")
