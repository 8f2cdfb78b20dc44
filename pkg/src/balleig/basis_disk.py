"""Orthonormal ridge-polynomial basis on the unit disk.

The degree-m block consists of ``U_m(x cos(k h) + y sin(k h)) / sqrt(pi)``
for ``k = 0..m`` and ``h = pi / (m + 1)``, with ``U_m`` the Chebyshev
polynomial of the second kind.  Members are ordered lexicographically in
``(m, k)``.
"""

from math import pi, sqrt

import numpy as np

from .geometry import _check_in_ball

INV_SQRT_PI = 1.0 / sqrt(pi)


def chebyshev_u(n, t):
    """Values and derivatives of ``U_0 .. U_n`` at ``t``.

    Returns two arrays of shape ``(n + 1,) + t.shape``.  ``t`` is clamped to
    [-1, 1].
    """
    t = np.clip(np.asarray(t, dtype=float), -1.0, 1.0)
    U = np.empty((n + 1,) + t.shape)
    dU = np.empty_like(U)
    U[0] = 1.0
    dU[0] = 0.0
    if n >= 1:
        U[1] = 2.0 * t
        dU[1] = 2.0
    for m in range(1, n):
        U[m + 1] = 2.0 * t * U[m] - U[m - 1]
        dU[m + 1] = 2.0 * U[m] + 2.0 * t * dU[m] - dU[m - 1]
    return U, dU


def disk_dimension(n):
    return (n + 1) * (n + 2) // 2


class DiskBasis:
    """Ridge-polynomial orthonormal basis of polynomials of degree <= n."""

    dim = 2

    def __init__(self, n):
        if n < 0:
            raise ValueError(f"degree must be >= 0, got {n}")
        self.n = n
        self.indices = [(m, k) for m in range(n + 1) for k in range(m + 1)]

    @property
    def size(self):
        return len(self.indices)

    def __len__(self):
        return self.size

    def __repr__(self):
        return f"DiskBasis(n={self.n}, N={self.size})"

    def eval(self, pts, grad=True):
        """All basis values (and gradients) at points of shape ``(P, 2)``.

        Returns ``phi`` of shape ``(P, N)`` and, if requested, ``dphi`` of
        shape ``(P, N, 2)``.  A single point ``(2,)`` gives ``(N,)`` / ``(N, 2)``.
        """
        pts = np.asarray(pts, dtype=float)
        single = pts.ndim == 1
        pts = np.atleast_2d(pts)
        _check_in_ball(pts)
        P = len(pts)
        phi = np.empty((P, self.size))
        dphi = np.empty((P, self.size, 2)) if grad else None
        col = 0
        for m in range(self.n + 1):
            ang = np.arange(m + 1) * (pi / (m + 1))
            c, s = np.cos(ang), np.sin(ang)
            t = pts[:, :1] * c + pts[:, 1:] * s
            U, dU = chebyshev_u(m, t)
            phi[:, col:col + m + 1] = INV_SQRT_PI * U[m]
            if grad:
                dphi[:, col:col + m + 1, 0] = INV_SQRT_PI * dU[m] * c
                dphi[:, col:col + m + 1, 1] = INV_SQRT_PI * dU[m] * s
            col += m + 1
        if single:
            return (phi[0], dphi[0]) if grad else phi[0]
        return (phi, dphi) if grad else phi

    def trial_eval(self, pts, bc="dirichlet", grad=True):
        """Trial functions: ``(1 - |x|^2) phi`` for Dirichlet, ``phi`` for Neumann."""
        return _trial(self, pts, bc, grad)


def _trial(basis, pts, bc, grad):
    # shared by the disk and ball bases
    if bc == "neumann":
        return basis.eval(pts, grad=grad)
    if bc != "dirichlet":
        raise ValueError(f"unknown boundary condition {bc!r}")
    pts = np.asarray(pts, dtype=float)
    out = basis.eval(pts, grad=grad)
    phi, dphi = out if grad else (out, None)
    bump = 1.0 - np.sum(pts**2, axis=-1)
    psi = bump[..., None] * phi
    if not grad:
        return psi
    dpsi = bump[..., None, None] * dphi - 2.0 * pts[..., None, :] * phi[..., :, None]
    return psi, dpsi
