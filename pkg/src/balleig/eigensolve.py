"""Symmetric-definite generalized eigenproblem ``G a = lambda M a``.

The mass matrix is factored as ``M = L L^T`` and the standard problem
``L^-1 G L^-T b = lambda b`` is solved by LAPACK's symmetric driver.
Eigenvectors are returned with unit max-norm and positive largest entry.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.linalg import eigh, solve_triangular
from scipy.linalg.lapack import dpotrf

from .errors import DefinitenessError
from .geometry import inverse_map


def normalize_vector(a):
    """Scale ``a`` to unit max-norm; the first entry of largest magnitude becomes positive."""
    a = np.asarray(a, dtype=float)
    i = int(np.argmax(np.abs(a)))
    if a[i] == 0.0:
        raise ValueError("cannot normalise the zero vector")
    return a / a[i]


@dataclass(frozen=True)
class Eigenfunction:
    """Coefficient vector in a trial basis, evaluable on the ball or the domain."""

    coeffs: np.ndarray
    basis: object = field(repr=False)
    bc: str
    dmap: object = field(repr=False)

    @property
    def degree(self):
        return self.basis.n

    def reference(self, x, chunk=4096):
        """Values of the pulled-back function at reference points."""
        x = np.asarray(x, dtype=float)
        if x.ndim == 1:
            return float(self.basis.trial_eval(x, self.bc, grad=False) @ self.coeffs)
        out = np.empty(len(x))
        for i in range(0, len(x), chunk):
            out[i:i + chunk] = self.basis.trial_eval(x[i:i + chunk], self.bc, grad=False) @ self.coeffs
        return out

    def __call__(self, s):
        """Values at physical points ``s``."""
        return self.reference(inverse_map(self.dmap, s))


@dataclass(frozen=True)
class EigenSolution:
    """Ascending eigenvalues with normalised coefficient vectors (one per column)."""

    values: np.ndarray
    vectors: np.ndarray
    residuals: np.ndarray
    m_vectors: np.ndarray = field(repr=False)
    first_rank: int = 1
    system: Optional[object] = field(default=None, repr=False)

    @property
    def count(self):
        return len(self.values)

    def _index(self, rank):
        i = rank - self.first_rank
        if not 0 <= i < self.count:
            raise IndexError(
                f"eigenpair rank {rank} not available (computed ranks "
                f"{self.first_rank}..{self.first_rank + self.count - 1})"
            )
        return i

    def eigenvalue(self, rank):
        return float(self.values[self._index(rank)])

    def eigenvector(self, rank):
        return self.vectors[:, self._index(rank)]

    def eigenfunction(self, rank):
        if self.system is None:
            raise ValueError("solution was computed from bare matrices; no basis attached")
        s = self.system
        return Eigenfunction(self.eigenvector(rank), s.basis, s.bc, s.dmap)


def cholesky_lower(M):
    L, info = dpotrf(np.asarray(M, dtype=float), lower=1, clean=1)
    if info > 0:
        raise DefinitenessError(
            f"mass matrix is not positive definite (Cholesky failed at pivot {info - 1})", pivot=info - 1
        )
    if info < 0:
        raise ValueError(f"invalid argument to Cholesky factorisation ({info})")
    return L


def solve_generalized(system=None, count=None, G=None, M=None, first_rank=None):
    """Lowest ``count`` eigenpairs of ``G a = lambda M a``.

    Pass either an assembled system or the matrices ``G`` and ``M``.  Ranks
    start at 0 for Neumann systems (the zero mode) and at 1 otherwise.
    """
    if system is not None:
        G, M = system.G, system.M
        if first_rank is None:
            first_rank = 0 if system.bc == "neumann" else 1
    G = np.asarray(G, dtype=float)
    M = np.asarray(M, dtype=float)
    first_rank = 1 if first_rank is None else first_rank
    N = G.shape[0]
    count = N if count is None else int(count)
    if not 1 <= count <= N:
        raise ValueError(f"requested {count} eigenpairs but the system has size {N}")

    L = cholesky_lower(M)
    C = solve_triangular(L, solve_triangular(L, G, lower=True).T, lower=True)
    C = 0.5 * (C + C.T)
    if count < N:
        lam, B = eigh(C, subset_by_index=[0, count - 1], driver="evr")
    else:
        lam, B = eigh(C, driver="evd")
    A = solve_triangular(L.T, B, lower=False)

    scale = np.linalg.norm(G, "fro") + np.abs(lam) * np.linalg.norm(M, "fro")
    res = np.linalg.norm(G @ A - (M @ A) * lam, axis=0) / (scale * np.linalg.norm(A, axis=0))
    vecs = np.column_stack([normalize_vector(A[:, i]) for i in range(count)])
    return EigenSolution(lam, vecs, res, A, first_rank, system)
