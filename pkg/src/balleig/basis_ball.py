"""Orthonormal polynomial basis on the unit ball in R^3.

Members are indexed by ``(m, j, beta)`` with ``m = 0..n``,
``j = 0..m//2`` and ``beta = 0..2(m - 2j)``.  With ``k = m - 2j`` each member
is a radial factor times a solid spherical harmonic,

    c_k * |x|^k * p_j(2|x|^2 - 1) * S_{beta,k}(x / |x|),

where ``p_j`` are orthonormal polynomials for the weight ``(1 + t)^(k+1/2)``
on [-1, 1] and ``S_{beta,k}`` are real orthonormal spherical harmonics.
Spherical coordinates use azimuth ``phi`` in [0, 2 pi] and polar angle
``theta`` in [0, pi].
"""

from math import pi, sqrt

import numpy as np

from .basis_disk import _trial
from .errors import BallEigError
from .geometry import _check_in_ball
from .quadrature import ball_rule, jacobi_recurrence


def ball_dimension(n):
    return (n + 1) * (n + 2) * (n + 3) // 6


def jacobi_normalized_all(jmax, mu, t):
    """Orthonormal polynomials ``p_0..p_jmax`` for the weight ``(1 + t)^mu``.

    Returns values and ``d/dt`` derivatives, each of shape
    ``(jmax + 1,) + t.shape``.
    """
    t = np.clip(np.asarray(t, dtype=float), -1.0, 1.0)
    a, b = jacobi_recurrence(jmax + 2, 0.0, mu)
    sb = np.sqrt(b)
    p = np.empty((jmax + 1,) + t.shape)
    dp = np.empty_like(p)
    p[0] = 1.0 / sb[0]
    dp[0] = 0.0
    for i in range(jmax):
        prev = p[i - 1] if i > 0 else 0.0
        dprev = dp[i - 1] if i > 0 else 0.0
        back = sb[i] if i > 0 else 0.0
        p[i + 1] = ((t - a[i]) * p[i] - back * prev) / sb[i + 1]
        dp[i + 1] = (p[i] + (t - a[i]) * dp[i] - back * dprev) / sb[i + 1]
    return p, dp


def jacobi_normalized(j, mu, t):
    """Value and derivative of the degree-j orthonormal polynomial for ``(1 + t)^mu``."""
    p, dp = jacobi_normalized_all(j, mu, t)
    return p[j], dp[j]


def legendre_normalized(kmax, l, ct, st):
    """Normalised associated Legendre functions of order ``l`` at ``cos(theta) = ct``.

    The functions ``P[k]`` for ``k = l..kmax`` satisfy
    ``int_{-1}^{1} P[k]^2 dx = 1``.  Returns ``(P, dP, Q)`` with ``dP`` the
    derivative in ``theta`` and ``Q = P / sin(theta)`` (only meaningful for
    ``l >= 1``, where it is a polynomial in ``cos``/``sin`` and finite at the
    poles).  Arrays have shape ``(kmax - l + 1,) + ct.shape``.
    """
    ct = np.asarray(ct, dtype=float)
    st = np.asarray(st, dtype=float)
    # diagonal P_l^l by the sectoral recurrence, carrying d/dtheta and P/sin
    pll = np.full(ct.shape, sqrt(0.5))
    dpll = np.zeros(ct.shape)
    qll = np.zeros(ct.shape)
    for i in range(1, l + 1):
        f = sqrt((2 * i + 1) / (2 * i))
        qll = f * pll
        pll, dpll = f * st * pll, f * (ct * pll + st * dpll)
    count = kmax - l + 1
    P = np.empty((count,) + ct.shape)
    dP = np.empty_like(P)
    Q = np.empty_like(P)
    P[0], dP[0], Q[0] = pll, dpll, qll
    for i in range(1, count):
        k = l + i
        ak = sqrt((4 * k * k - 1) / (k * k - l * l))
        bk = sqrt((2 * k + 1) * ((k - 1) ** 2 - l * l) / ((2 * k - 3) * (k * k - l * l))) if i > 1 else 0.0
        p2 = P[i - 2] if i > 1 else 0.0
        dp2 = dP[i - 2] if i > 1 else 0.0
        q2 = Q[i - 2] if i > 1 else 0.0
        P[i] = ak * ct * P[i - 1] - bk * p2
        dP[i] = ak * (ct * dP[i - 1] - st * P[i - 1]) - bk * dp2
        Q[i] = ak * ct * Q[i - 1] - bk * q2
    return P, dP, Q


def _harmonic_order(beta):
    # even beta -> cos((beta/2) phi), odd beta -> sin(((beta+1)/2) phi)
    return (beta + 1) // 2, beta % 2 == 0


def _azimuthal(l, use_cos, phi):
    """Normalised azimuthal factor and its phi-derivative."""
    if l == 0:
        c = 1.0 / sqrt(2.0 * pi)
        return np.full(np.shape(phi), c), np.zeros(np.shape(phi))
    c = 1.0 / sqrt(pi)
    if use_cos:
        return c * np.cos(l * phi), -c * l * np.sin(l * phi)
    return c * np.sin(l * phi), c * l * np.cos(l * phi)


def spherical_harmonic(beta, k, phi, theta):
    """Real orthonormal spherical harmonic ``S_{beta,k}`` and its angular derivatives.

    Returns ``(value, d/dphi, d/dtheta)``.
    """
    if k < 0 or not 0 <= beta <= 2 * k:
        raise IndexError(f"need 0 <= beta <= 2k, got beta={beta}, k={k}")
    phi = np.asarray(phi, dtype=float)
    theta = np.asarray(theta, dtype=float)
    l, use_cos = _harmonic_order(beta)
    P, dP, _ = legendre_normalized(k, l, np.cos(theta), np.sin(theta))
    A, dA = _azimuthal(l, use_cos, phi)
    return A * P[-1], dA * P[-1], A * dP[-1]


def _spherical_coords(pts):
    x, y, z = pts[:, 0], pts[:, 1], pts[:, 2]
    r = np.sqrt(x * x + y * y + z * z)
    rho = np.hypot(x, y)
    zero = r == 0.0
    rs = np.where(zero, 1.0, r)
    ct = np.where(zero, 1.0, z / rs)
    st = np.where(zero, 0.0, rho / rs)
    phi = np.arctan2(y, x)
    return r, ct, st, phi


class BallBasis:
    """Orthonormal basis of polynomials of degree <= n on the unit ball in R^3."""

    dim = 3

    def __init__(self, n, normalize=True):
        if n < 0:
            raise ValueError(f"degree must be >= 0, got {n}")
        self.n = n
        self.indices = [
            (m, j, beta) for m in range(n + 1) for j in range(m // 2 + 1) for beta in range(2 * (m - 2 * j) + 1)
        ]
        # c_{m,j} = 2^(5/4 + (m - 2j)/2) makes the radial factor unit-normed
        # against r^2 dr; self-normalisation below corrects any residual drift
        self.constants = np.array([2.0 ** (1.25 + 0.5 * (m - 2 * j)) for m, j, _ in self.indices])
        self.scale = np.ones(self.size)
        if normalize:
            self._self_normalize()

    @property
    def size(self):
        return len(self.indices)

    def __len__(self):
        return self.size

    def __repr__(self):
        return f"BallBasis(n={self.n}, N={self.size})"

    def _self_normalize(self):
        rule = ball_rule(self.n + 2)
        phi = self.eval(rule.nodes, grad=False)
        gram = phi.T @ (rule.weights[:, None] * phi)
        d = np.diag(gram)
        off = np.abs(gram - np.diag(d)).max() if self.size > 1 else 0.0
        if off > 1e-8 or np.abs(d - 1.0).max() > 1e-6:
            raise BallEigError(f"ball basis failed orthonormality check (off-diagonal {off:.3g})")
        self.scale = 1.0 / np.sqrt(d)

    def eval(self, pts, grad=True):
        """All basis values (and Cartesian gradients) at points of shape ``(P, 3)``."""
        pts = np.asarray(pts, dtype=float)
        single = pts.ndim == 1
        pts = np.atleast_2d(pts)
        _check_in_ball(pts)
        out = self._eval(pts, grad)
        if single:
            return tuple(o[0] for o in out) if grad else out[0]
        return out

    def _eval(self, pts, grad):
        n = self.n
        P = len(pts)
        r, ct, st, phi = _spherical_coords(pts)
        t = 2.0 * r * r - 1.0

        # angular tables for every (k, beta): value, d/dtheta, (1/sin) d/dphi
        ang = [None] * (n + 1)
        for k in range(n + 1):
            ang[k] = [np.empty((P, 2 * k + 1)) for _ in range(3)]
        for l in range(n + 1):
            Pl, dPl, Ql = legendre_normalized(n, l, ct, st)
            for use_cos in ((True, False) if l > 0 else (True,)):
                A, dA = _azimuthal(l, use_cos, phi)
                beta = 2 * l if use_cos else 2 * l - 1
                for k in range(l, n + 1):
                    S, dS, gS = ang[k]
                    S[:, beta] = A * Pl[k - l]
                    dS[:, beta] = A * dPl[k - l]
                    gS[:, beta] = dA * Ql[k - l] if l > 0 else 0.0

        if grad:
            e_r = np.column_stack([st * np.cos(phi), st * np.sin(phi), ct])
            e_t = np.column_stack([ct * np.cos(phi), ct * np.sin(phi), -st])
            e_p = np.column_stack([-np.sin(phi), np.cos(phi), np.zeros(P)])

        values = np.empty((P, self.size))
        grads = np.empty((P, self.size, 3)) if grad else None
        col = 0
        radial = {}
        for k in range(n + 1):
            radial[k] = jacobi_normalized_all((n - k) // 2, k + 0.5, t)
        for m in range(n + 1):
            for j in range(m // 2 + 1):
                k = m - 2 * j
                width = 2 * k + 1
                sl = slice(col, col + width)
                c = self.constants[col] * self.scale[col:col + width]
                p, dp = radial[k][0][j], radial[k][1][j]
                rk = r**k
                R = rk * p
                S, dS, gS = ang[k]
                values[:, sl] = c * (R[:, None] * S)
                if grad:
                    # dR/dr = k r^(k-1) p + 4 r^(k+1) p'; R/r = r^(k-1) p
                    if k == 0:
                        dR = 4.0 * r * dp
                        g = (dR[:, None] * S)[:, :, None] * e_r[:, None, :]
                    else:
                        rkm1 = r ** (k - 1)
                        dR = k * rkm1 * p + 4.0 * rk * r * dp
                        Rr = (rkm1 * p)[:, None]
                        g = (
                            (dR[:, None] * S)[:, :, None] * e_r[:, None, :]
                            + (Rr * dS)[:, :, None] * e_t[:, None, :]
                            + (Rr * gS)[:, :, None] * e_p[:, None, :]
                        )
                    grads[:, sl, :] = c[None, :, None] * g
                col += width
        return (values, grads) if grad else values

    def trial_eval(self, pts, bc="dirichlet", grad=True):
        """Trial functions: ``(1 - |x|^2) phi`` for Dirichlet, ``phi`` for Neumann."""
        return _trial(self, pts, bc, grad)


def make_basis(dim, n):
    """Disk basis for ``dim == 2``, ball basis for ``dim == 3``."""
    from .basis_disk import DiskBasis

    if dim == 2:
        return DiskBasis(n)
    if dim == 3:
        return BallBasis(n)
    raise ValueError(f"only dimensions 2 and 3 are supported, got {dim}")
