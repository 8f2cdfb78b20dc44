"""Gauss rules on [-1, 1] and product rules on the unit disk and unit ball.

The one-dimensional rules come from the Golub-Welsch construction applied to
the three-term recurrence of the Jacobi family with weight
``(1 - t)**alpha * (1 + t)**beta``.  The unit weight is ``alpha = beta = 0``
and the radial weight ``(1 + t)**2`` of the ball rule is ``beta = 2``.
"""

from dataclasses import dataclass
from math import gamma, pi

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import BallEigError

WEIGHTS = {"unit": 0.0, "radial-squared": 2.0}


def jacobi_recurrence(n, alpha, beta):
    """Recurrence coefficients of the monic Jacobi polynomials.

    Returns arrays ``a`` and ``b`` of length ``n`` such that
    ``p[k+1](t) = (t - a[k]) p[k](t) - b[k] p[k-1](t)``.  ``b[0]`` holds the
    total mass of the weight, which is the usual Golub-Welsch convention.
    """
    k = np.arange(n, dtype=float)
    s = 2.0 * k + alpha + beta
    a = np.empty(n)
    b = np.empty(n)
    if n == 0:
        return a, b
    a[0] = (beta - alpha) / (alpha + beta + 2.0)
    b[0] = 2.0 ** (alpha + beta + 1.0) * gamma(alpha + 1.0) * gamma(beta + 1.0) / gamma(
        alpha + beta + 2.0
    )
    if n > 1:
        kk, ss = k[1:], s[1:]
        a[1:] = (beta**2 - alpha**2) / (ss * (ss + 2.0))
        b[1:] = (
            4.0 * kk * (kk + alpha) * (kk + beta) * (kk + alpha + beta)
            / (ss**2 * (ss + 1.0) * (ss - 1.0))
        )
    return a, b


def gauss_jacobi(q, alpha=0.0, beta=0.0):
    """Nodes and weights of the q-point Gauss rule for the Jacobi weight."""
    if q < 1:
        raise ValueError(f"need at least one node, got q={q}")
    a, b = jacobi_recurrence(q, alpha, beta)
    if q == 1:
        return np.array([a[0]]), np.array([b[0]])
    nodes, vecs = eigh_tridiagonal(a, np.sqrt(b[1:]))
    weights = b[0] * vecs[0, :] ** 2
    return nodes, weights


def gauss_nodes(q, weight="unit"):
    """q-point Gauss rule on [-1, 1] for weight ``"unit"`` or ``"radial-squared"``.

    The rule integrates ``w(t) p(t)`` exactly for polynomials ``p`` of degree
    up to ``2q - 1``, where ``w = 1`` or ``w = (1 + t)**2``.
    """
    try:
        beta = WEIGHTS[weight]
    except KeyError:
        raise ValueError(f"unknown weight {weight!r}; expected one of {sorted(WEIGHTS)}") from None
    return gauss_jacobi(q, 0.0, beta)


@dataclass(frozen=True)
class QuadratureRule:
    """Flat list of Cartesian nodes and positive weights on the reference ball."""

    geometry: str
    q: int
    nodes: np.ndarray
    weights: np.ndarray

    @property
    def count(self):
        return len(self.weights)

    @property
    def dim(self):
        return self.nodes.shape[1]


def disk_rule(q):
    """Product rule on the unit disk, exact on polynomials of degree <= 2q.

    Radial factor: (q+1)-point Gauss-Legendre on [0, 1] with the extra ``r``
    from the polar area element.  Azimuthal factor: trapezoid rule with
    2q+1 equispaced angles ``2 pi m / (2q + 1)``, m = 0..2q.
    """
    if q < 1:
        raise ValueError(f"quadrature order must be >= 1, got {q}")
    z, w = gauss_nodes(q + 1)
    r = 0.5 * (z + 1.0)
    omega = 0.5 * w
    theta = 2.0 * pi * np.arange(2 * q + 1) / (2 * q + 1)
    rr, tt = np.meshgrid(r, theta, indexing="ij")
    ww = np.outer(omega * r, np.full(theta.size, 2.0 * pi / (2 * q + 1)))
    nodes = np.column_stack([(rr * np.cos(tt)).ravel(), (rr * np.sin(tt)).ravel()])
    return QuadratureRule("disk", q, nodes, ww.ravel())


def ball_rule(q):
    """Product rule on the unit ball in R^3 with 2q * q * q nodes.

    Azimuth: 2q-point trapezoid rule on [0, 2 pi).  Polar angle: q-point
    Gauss-Legendre in ``cos(theta)``.  Radius: q-point Gauss rule for the
    weight ``(1 + t)**2`` under ``r = (t + 1) / 2``, whose weights carry the
    factor 1/8 of that substitution.  Exact on polynomials of degree <= 2q - 1.
    """
    if q < 1:
        raise ValueError(f"quadrature order must be >= 1, got {q}")
    azimuth = pi * np.arange(1, 2 * q + 1) / q
    xi, omega = gauss_nodes(q)
    zeta, nu_prime = gauss_nodes(q, "radial-squared")
    r = 0.5 * (zeta + 1.0)
    nu = nu_prime / 8.0
    # index order: azimuth, polar, radius
    az, cz, rr = np.meshgrid(azimuth, xi, r, indexing="ij")
    sz = np.sqrt(1.0 - cz**2)
    nodes = np.column_stack(
        [(rr * sz * np.cos(az)).ravel(), (rr * sz * np.sin(az)).ravel(), (rr * cz).ravel()]
    )
    weights = (pi / q) * np.einsum("j,k->jk", omega, nu)
    weights = np.broadcast_to(weights, (2 * q, q, q)).ravel().copy()
    return QuadratureRule("ball", q, nodes, weights)


def reference_rule(dim, q):
    """Disk rule for ``dim == 2``, ball rule for ``dim == 3``."""
    if dim == 2:
        return disk_rule(q)
    if dim == 3:
        return ball_rule(q)
    raise ValueError(f"only dimensions 2 and 3 are supported, got {dim}")


def integrate(rule, f):
    """Apply ``rule`` to ``f``.

    ``f`` is either a callable mapping an ``(P, d)`` node array to ``P``
    values, or the array of values itself.
    """
    values = np.asarray(f(rule.nodes) if callable(f) else f, dtype=float)
    if values.shape != rule.weights.shape:
        raise ValueError(f"expected {rule.weights.shape} values, got {values.shape}")
    bad = ~np.isfinite(values)
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        raise BallEigError(f"integrand is not finite at node {i}: {rule.nodes[i].tolist()}")
    return float(np.sum(rule.weights * values))
