"""Galerkin stiffness and mass matrices on the reference disk or ball.

For trial functions ``psi_i`` on the reference ball the matrices are

    G_ij = sum_nodes w |det J| (grad psi_j . At grad psi_i + gt psi_j psi_i)
    M_ij = sum_nodes w |det J| psi_j psi_i

with ``At = J^-1 A J^-T`` and ``gt = gamma o Phi``.  Assembly is node-major:
each chunk of quadrature nodes is evaluated once and its contribution is
accumulated as a dense matrix product.
"""

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .basis_ball import make_basis
from .errors import BallEigError, SingularSystemError
from .geometry import CoefficientField, transformed_coefficients, validate_map
from .quadrature import reference_rule

BOUNDARY_CONDITIONS = ("dirichlet", "neumann")
CHUNK_ELEMENTS = 4_000_000


@lru_cache(maxsize=32)
def basis_for(dim, n):
    """Cached basis of degree ``n`` on the reference disk (2) or ball (3)."""
    return make_basis(dim, n)


def default_order(n):
    # integrands carry det J and At, so use two orders above the degree
    return n + 2


@dataclass(frozen=True)
class GalerkinSystem:
    """Assembled stiffness ``G`` and mass ``M`` for one degree and boundary condition."""

    G: np.ndarray
    M: np.ndarray
    n: int
    bc: str
    dmap: object = field(repr=False)
    coeff: CoefficientField = field(repr=False)
    basis: object = field(repr=False)
    rule: object = field(repr=False)

    @property
    def size(self):
        return self.G.shape[0]

    @property
    def q(self):
        return self.rule.q

    @property
    def provenance(self):
        return {
            "map": self.dmap.name,
            "map_params": self.dmap.params,
            "bc": self.bc,
            "n": self.n,
            "N": self.size,
            "q": self.q,
            "coefficients": self.coeff.description,
        }

    def mass_condition(self):
        """2-norm condition number of the mass matrix."""
        ev = np.linalg.eigvalsh(self.M)
        return float(ev[-1] / ev[0]) if ev[0] > 0 else float("inf")


def _mirror_lower(X):
    L = np.tril(X)
    return L + np.tril(X, -1).T


def assemble(dmap, coeff=None, bc="dirichlet", n=4, q=None):
    """Assemble the Galerkin system for ``-div(A grad u) + gamma u = lambda u``.

    ``bc`` selects the trial space: ``"dirichlet"`` multiplies the
    orthonormal basis by ``1 - |x|^2``, ``"neumann"`` uses it unchanged.
    ``q`` is the quadrature order (default ``n + 2``).
    """
    if bc not in BOUNDARY_CONDITIONS:
        raise ValueError(f"unknown boundary condition {bc!r}")
    coeff = CoefficientField() if coeff is None else coeff
    q = default_order(n) if q is None else int(q)
    basis = basis_for(dmap.dim, n)
    rule = reference_rule(dmap.dim, q)
    validate_map(dmap, rule.nodes)
    coeff.validate(dmap.forward(rule.nodes))

    N, d = basis.size, dmap.dim
    G = np.zeros((N, N))
    M = np.zeros((N, N))
    chunk = max(64, CHUNK_ELEMENTS // (N * d))
    for start in range(0, rule.count, chunk):
        x = rule.nodes[start:start + chunk]
        wq = rule.weights[start:start + chunk]
        At, gt, detj = transformed_coefficients(dmap, coeff, x)
        if not (np.all(np.isfinite(At)) and np.all(np.isfinite(gt))):
            bad = int(np.flatnonzero(~np.isfinite(At).all(axis=(1, 2)) | ~np.isfinite(gt))[0])
            raise BallEigError(f"non-finite coefficient value at reference node {x[bad].tolist()}")
        psi, dpsi = basis.trial_eval(x, bc)
        w = wq * detj
        M += psi.T @ (w[:, None] * psi)
        if coeff.has_gamma:
            G += psi.T @ ((w * gt)[:, None] * psi)
        flux = np.einsum("pab,pnb->npa", At, dpsi) * w[None, :, None]
        G += flux.reshape(N, -1) @ dpsi.transpose(1, 0, 2).reshape(N, -1).T
    return GalerkinSystem(_mirror_lower(G), _mirror_lower(M), n, bc, dmap, coeff, basis, rule)


def load_vector(system, f, q=None):
    """``F_i = int f(Phi(x)) psi_i(x) |det J(x)| dx`` by the system's rule (or order ``q``)."""
    rule = system.rule if q is None else reference_rule(system.dmap.dim, q)
    s = system.dmap.forward(rule.nodes)
    _, _, detj = transformed_coefficients(system.dmap, system.coeff, rule.nodes)
    fv = np.broadcast_to(np.asarray(f(s), dtype=float), (rule.count,))
    if not np.all(np.isfinite(fv)):
        raise BallEigError("source term is not finite at some quadrature node")
    psi = system.basis.trial_eval(rule.nodes, system.bc, grad=False)
    return psi.T @ (rule.weights * detj * fv)


def solve_source(system, f, q=None):
    """Galerkin solution coefficients of ``L u = f`` in the system's trial space."""
    F = load_vector(system, f, q)
    try:
        factor = cho_factor(system.G, lower=True)
    except np.linalg.LinAlgError:
        raise SingularSystemError(
            "stiffness matrix is singular; for a Neumann problem add a zeroth-order term "
            "(gamma = 1) and solve (L + I) u = f instead"
        ) from None
    return cho_solve(factor, F)


def quadrature_sensitivity(dmap, coeff=None, bc="dirichlet", n=4, q=None):
    """Largest entry change of G and M when the quadrature order is doubled."""
    q = default_order(n) if q is None else q
    a = assemble(dmap, coeff, bc, n, q)
    b = assemble(dmap, coeff, bc, n, 2 * q)
    return float(np.abs(a.G - b.G).max()), float(np.abs(a.M - b.M).max())


def dump_system(system, path):
    """Write G and M as text: a ``#`` header, then each lower triangle row-major.

    Header lines are ``# key: value`` pairs (format, map, bc, n, N, q,
    coefficients), followed by ``# G`` and ``# M`` section markers.  Each
    data line holds one matrix row ``i`` with entries ``0..i``.
    """
    G, M = system.G, system.M
    with open(path, "w") as fh:
        fh.write("# format: balleig-lower-triangle-v1\n")
        for key, val in system.provenance.items():
            fh.write(f"# {key}: {val}\n")
        for label, X in (("G", G), ("M", M)):
            fh.write(f"# {label}\n")
            for i in range(X.shape[0]):
                fh.write(" ".join(f"{v:.17g}" for v in X[i, :i + 1]) + "\n")


def load_system_dump(path):
    """Read a :func:`dump_system` file back into ``(G, M, header)``."""
    header = {}
    blocks = {"G": [], "M": []}
    current = None
    with open(path) as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("# "):
                body = line[2:]
                if body in blocks:
                    current = body
                elif ":" in body:
                    k, v = body.split(":", 1)
                    header[k.strip()] = v.strip()
                continue
            blocks[current].append([float(v) for v in line.split()])
    out = []
    for label in ("G", "M"):
        rows = blocks[label]
        X = np.zeros((len(rows), len(rows)))
        for i, row in enumerate(rows):
            X[i, :i + 1] = row
        out.append(_mirror_lower(X))
    return out[0], out[1], header
