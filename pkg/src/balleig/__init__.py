"""Spectral Galerkin eigensolver for elliptic operators on mapped disks and balls.

Typical use::

    from balleig import get_map, assemble, solve_generalized

    system = assemble(get_map("planar-quadratic", a=0.5), bc="dirichlet", n=8)
    sol = solve_generalized(system, count=2)
    sol.values            # array([2.96185..., 7.24761...])
"""

__version__ = "0.1.0"

from .assembly import GalerkinSystem, assemble, dump_system, load_system_dump, solve_source
from .basis_ball import BallBasis, jacobi_normalized, spherical_harmonic
from .basis_disk import DiskBasis, chebyshev_u
from .diagnostics import (
    ConvergenceReport,
    convergence_report,
    eigenfunction_diff,
    eigenvalue_diff,
    l2_angle,
    residual_at_point,
)
from .eigensolve import EigenSolution, Eigenfunction, normalize_vector, solve_generalized
from .errors import (
    BallEigError,
    ConfigError,
    DefinitenessError,
    DomainError,
    InversionError,
    SingularMapError,
    SingularSystemError,
)
from .geometry import (
    CoefficientField,
    DomainMap,
    constant_coefficients,
    get_map,
    inverse_map,
    jacobian,
    map_point,
    transformed_coefficients,
)
from .quadrature import QuadratureRule, ball_rule, disk_rule, gauss_nodes, integrate
