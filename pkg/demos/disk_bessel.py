"""
Unit disk: the first Dirichlet eigenvalue
==========================================

The first Dirichlet eigenvalue of the unit disk is j01**2, the square of
the first zero of the Bessel function J0.  We watch the Galerkin
approximation converge to it as the polynomial degree grows.
"""

import numpy as np

from balleig import assemble, get_map, solve_generalized

# the exact value, from scipy's Bessel zeros
from scipy.special import jn_zeros
exact = jn_zeros(0, 1)[0] ** 2

# the identity map turns the reference disk into the physical domain
disk = get_map("identity2d")

print(" n    N      lambda_1            error")
for n in range(2, 15, 2):
    system = assemble(disk, bc="dirichlet", n=n, q=n + 2)
    lam = solve_generalized(system, 1).values[0]
    print(f"{n:2d} {system.size:4d}  {lam:.14f}  {abs(lam - exact):.2e}")

# the computed eigenfunction is radial and peaks at the centre like J0(j01 r)
sol = solve_generalized(assemble(disk, n=12), 1)
u = sol.eigenfunction(1)
r = np.linspace(0, 0.999, 6)
vals = u(np.column_stack([r, np.zeros_like(r)]))
print("\nu(r, 0) / u(0, 0):", np.round(vals / vals[0], 6))
