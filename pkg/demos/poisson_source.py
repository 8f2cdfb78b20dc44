"""
Solving a source problem with the same matrices
================================================

The stiffness matrix that drives the eigenvalue problem also solves
-Lap u = f with zero boundary values.  On the unit disk with f = 1 the
exact solution is (1 - r**2) / 4.
"""

import numpy as np

from balleig import assemble, constant_coefficients, get_map, solve_source

disk = get_map("identity2d")
system = assemble(disk, bc="dirichlet", n=4)
alpha = solve_source(system, lambda s: np.ones(len(s)))

r = np.linspace(0, 0.95, 5)
x = np.column_stack([r, np.zeros_like(r)])
u = system.basis.trial_eval(x, "dirichlet", grad=False) @ alpha
print("computed:", u)
print("exact:   ", (1 - r**2) / 4)

# a Neumann problem needs a zeroth-order term, here -Lap u + u = f
shifted = assemble(get_map("ellipsoid"), constant_coefficients(None, 1.0), bc="neumann", n=3)
beta = solve_source(shifted, lambda s: 1.0 + s[:, 0] ** 2)
print("\nNeumann, gamma = 1, ellipsoid: first coefficients", np.round(beta[:4], 6))
