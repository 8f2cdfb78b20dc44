"""Domain maps from the reference ball onto a physical domain.

A :class:`DomainMap` bundles the forward map, its Jacobian and (optionally)
a closed-form inverse.  All callables are vectorised over a leading axis:
points are ``(P, d)`` arrays, Jacobians ``(P, d, d)``.

Built-in maps are available through :func:`get_map` by name:

``identity2d``, ``identity3d``
    The reference disk / ball itself.
``planar-quadratic``
    ``(s, t) = (x - y + a x**2, x + y)`` with ``0 < a < 1``.
``ellipsoid``
    A constant linear map ``s = E x``; the default ``E`` gives
    ``(x1 - 3 x2, 2 x1 + x2, x1 + x2 + x3)``.
``star``
    Radial blend ``rho -> (1 - t(rho)) rho + t(rho) S(direction)`` of the
    identity with a star-shaped boundary radius ``S > 1``.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import CoefficientError, DomainError, InversionError, SingularMapError

DET_TOL = 1e-14
BALL_TOL = 1e-12


def _as_points(x, dim):
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    pts = np.atleast_2d(x)
    if pts.shape[-1] != dim:
        raise ValueError(f"expected points of dimension {dim}, got shape {x.shape}")
    return pts, single


def _check_in_ball(pts, tol=BALL_TOL):
    r = np.linalg.norm(pts, axis=1)
    bad = r > 1.0 + tol
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        raise DomainError(f"point {pts[i].tolist()} lies outside the closed unit ball (|x| = {r[i]:.3g})")


@dataclass(frozen=True)
class DomainMap:
    """Smooth bijection from the closed unit ball onto a physical domain."""

    name: str
    dim: int
    forward: Callable
    jac: Callable
    inverse: Optional[Callable] = None
    params: dict = field(default_factory=dict)

    @property
    def inverse_kind(self):
        return "closed-form" if self.inverse is not None else "iterative"

    def __call__(self, x):
        return map_point(self, x)


@dataclass(frozen=True)
class CoefficientField:
    """Operator data ``A(s)`` (symmetric, uniformly elliptic) and ``gamma(s) >= 0``.

    ``A`` and ``gamma`` take ``(P, d)`` physical points; ``A`` returns
    ``(P, d, d)`` and ``gamma`` returns ``(P,)``.  ``None`` means identity
    and zero respectively.
    """

    A: Optional[Callable] = None
    gamma: Optional[Callable] = None
    description: str = "A=I, gamma=0"

    def matrix(self, s):
        s = np.atleast_2d(s)
        if self.A is None:
            return np.broadcast_to(np.eye(s.shape[1]), (len(s), s.shape[1], s.shape[1]))
        return np.asarray(self.A(s), dtype=float)

    def scalar(self, s):
        s = np.atleast_2d(s)
        if self.gamma is None:
            return np.zeros(len(s))
        return np.broadcast_to(np.asarray(self.gamma(s), dtype=float), (len(s),))

    @property
    def has_gamma(self):
        return self.gamma is not None

    def validate(self, s, rng=None):
        """Spot-check symmetry, ellipticity and ``gamma >= 0`` at points ``s``.

        Returns the smallest observed ellipticity constant.
        """
        A = self.matrix(s)
        g = self.scalar(s)
        if not np.all(np.isfinite(A)) or not np.all(np.isfinite(g)):
            raise CoefficientError("coefficient field has non-finite values")
        asym = np.abs(A - np.swapaxes(A, 1, 2)).max()
        if asym > 1e-12 * max(1.0, np.abs(A).max()):
            raise CoefficientError(f"A(s) is not symmetric (max asymmetry {asym:.3g})")
        rng = np.random.default_rng(0) if rng is None else rng
        xi = rng.standard_normal((len(s), s.shape[1]))
        ratio = np.einsum("pi,pij,pj->p", xi, A, xi) / np.einsum("pi,pi->p", xi, xi)
        c0 = min(float(ratio.min()), float(np.linalg.eigvalsh(A).min()))
        if c0 <= 0:
            raise CoefficientError(f"A(s) is not uniformly elliptic (c0 estimate {c0:.3g})")
        if g.min() < 0:
            raise CoefficientError(f"gamma(s) is negative somewhere (min {g.min():.3g})")
        return c0


def constant_coefficients(A=None, gamma=0.0):
    """Coefficient field with a constant matrix and constant ``gamma``."""
    desc = []
    Afun = None
    if A is not None:
        A = np.array(A, dtype=float)
        Afun = lambda s: np.broadcast_to(A, (len(s),) + A.shape)
        desc.append(f"A={A.tolist()}")
    else:
        desc.append("A=I")
    gfun = None
    if gamma:
        c = float(gamma)
        gfun = lambda s: np.full(len(s), c)
    desc.append(f"gamma={float(gamma)!r}")
    return CoefficientField(Afun, gfun, ", ".join(desc))


def map_point(dmap, x):
    """Image of reference point(s) ``x`` under the map."""
    pts, single = _as_points(x, dmap.dim)
    _check_in_ball(pts)
    s = np.asarray(dmap.forward(pts), dtype=float)
    return s[0] if single else s


def jacobian(dmap, x):
    """Jacobian ``J(x)`` and ``|det J(x)|``; raises on a singular point."""
    pts, single = _as_points(x, dmap.dim)
    _check_in_ball(pts)
    J, det = _jacobian_checked(dmap, pts)
    return (J[0], det[0]) if single else (J, det)


def _jacobian_checked(dmap, pts):
    J = np.asarray(dmap.jac(pts), dtype=float)
    det = np.abs(np.linalg.det(J))
    bad = ~(det > DET_TOL)
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        raise SingularMapError(
            f"map {dmap.name!r} is singular at reference point {pts[i].tolist()} (|det J| = {det[i]:.3g})",
            point=pts[i],
        )
    return J, det


def inverse_map(dmap, s, tol=1e-13, maxiter=50):
    """Reference point(s) ``x`` with ``Phi(x) = s``.

    Uses the map's closed-form inverse when it has one, otherwise a damped
    Newton iteration started at the origin.
    """
    pts, single = _as_points(s, dmap.dim)
    if dmap.inverse is not None:
        x = np.asarray(dmap.inverse(pts), dtype=float)
    else:
        x = np.array([_newton_invert(dmap, si, tol, maxiter) for si in pts]).reshape(pts.shape)
    r = np.linalg.norm(x, axis=1)
    bad = r > 1.0 + 1e-10
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        raise DomainError(f"physical point {pts[i].tolist()} lies outside the domain (|Psi(s)| = {r[i]:.6g})")
    return x[0] if single else x


def _newton_invert(dmap, s, tol, maxiter):
    x = np.zeros(dmap.dim)
    res = dmap.forward(x[None])[0] - s
    nres = np.linalg.norm(res)
    scale = max(1.0, np.linalg.norm(s))
    for _ in range(maxiter):
        if nres <= tol * scale:
            return x
        J = dmap.jac(x[None])[0]
        try:
            step = np.linalg.solve(J, res)
        except np.linalg.LinAlgError:
            raise InversionError(f"singular Jacobian during inversion of {s.tolist()}") from None
        damp = 1.0
        while True:
            xn = x - damp * step
            rn = dmap.forward(xn[None])[0] - s
            nrn = np.linalg.norm(rn)
            if nrn < nres or damp < 1e-4:
                break
            damp *= 0.5
        if nrn >= nres:
            # stagnated at rounding level
            if nres <= 1e3 * tol * scale:
                return x
            raise InversionError(f"Newton inversion stagnated at residual {nres:.3g} for {s.tolist()}")
        x, res, nres = xn, rn, nrn
    if nres <= tol * scale:
        return x
    raise InversionError(f"Newton inversion did not converge in {maxiter} iterations for {s.tolist()}")


def transformed_coefficients(dmap, coeff, x):
    """Pulled-back coefficients at reference points ``x``.

    Returns ``(At, gt, w)`` where ``At = J^-1 A(Phi(x)) J^-T``,
    ``gt = gamma(Phi(x))`` and ``w = |det J(x)|``.
    """
    pts, single = _as_points(x, dmap.dim)
    J, w = _jacobian_checked(dmap, pts)
    s = dmap.forward(pts)
    Jinv = np.linalg.inv(J)
    A = coeff.matrix(s)
    At = Jinv @ A @ np.swapaxes(Jinv, 1, 2)
    At = 0.5 * (At + np.swapaxes(At, 1, 2))
    gt = coeff.scalar(s)
    if single:
        return At[0], gt[0], w[0]
    return At, gt, w


def validate_map(dmap, nodes):
    """Fail fast if ``det J`` vanishes or changes sign at any of ``nodes``."""
    J = np.asarray(dmap.jac(nodes), dtype=float)
    det = np.linalg.det(J)
    small = ~(np.abs(det) > DET_TOL)
    if small.any():
        i = int(np.flatnonzero(small)[0])
        raise SingularMapError(
            f"map {dmap.name!r} is singular at node {nodes[i].tolist()} (det J = {det[i]:.3g})",
            point=nodes[i],
        )
    if det.min() < 0 < det.max():
        i = int(np.argmin(det) if det[0] > 0 else np.argmax(det))
        raise SingularMapError(f"det J changes sign over the ball (e.g. at {nodes[i].tolist()})", point=nodes[i])


# -- built-in maps -----------------------------------------------------------


def identity_map(dim):
    return DomainMap(
        f"identity{dim}d",
        dim,
        forward=lambda x: np.array(x, dtype=float),
        jac=lambda x: np.broadcast_to(np.eye(dim), (len(x), dim, dim)).copy(),
        inverse=lambda s: np.array(s, dtype=float),
    )


def planar_quadratic_map(a=0.5):
    """``(s, t) = (x - y + a x^2, x + y)``, injective on the disk for 0 < a < 1."""
    if not 0.0 < a < 1.0:
        raise ValueError(f"parameter a must lie in (0, 1), got {a}")

    def forward(x):
        u, v = x[:, 0], x[:, 1]
        return np.column_stack([u - v + a * u**2, u + v])

    def jac(x):
        u = x[:, 0]
        J = np.empty((len(x), 2, 2))
        J[:, 0, 0] = 1.0 + 2.0 * a * u
        J[:, 0, 1] = -1.0
        J[:, 1, 0] = 1.0
        J[:, 1, 1] = 1.0
        return J

    def inverse(s):
        ss, tt = s[:, 0], s[:, 1]
        # 1 + a(s + t) = (1 + a x)^2; the form below avoids cancellation
        disc = np.sqrt(np.maximum(1.0 + a * (ss + tt), 0.0))
        u = (ss + tt) / (1.0 + disc)
        return np.column_stack([u, tt - u])

    return DomainMap("planar-quadratic", 2, forward, jac, inverse, {"a": float(a)})


ELLIPSOID_MATRIX = ((1.0, -3.0, 0.0), (2.0, 1.0, 0.0), (1.0, 1.0, 1.0))


def ellipsoid_map(matrix=ELLIPSOID_MATRIX):
    E = np.array(matrix, dtype=float)
    if E.shape != (3, 3):
        raise ValueError(f"ellipsoid matrix must be 3x3, got shape {E.shape}")
    if abs(np.linalg.det(E)) <= DET_TOL:
        raise SingularMapError("ellipsoid matrix is singular")
    Einv = np.linalg.inv(E)
    return DomainMap(
        "ellipsoid",
        3,
        forward=lambda x: x @ E.T,
        jac=lambda x: np.broadcast_to(E, (len(x), 3, 3)).copy(),
        inverse=lambda s: np.linalg.solve(E, np.asarray(s, dtype=float).T).T,
        params={"matrix": E.tolist(), "inverse": Einv.tolist()},
    )


def star_blend(rho):
    """``t(rho)``: 0 on [0, 1/2], ``(2 rho - 1)**5`` beyond; C^4 at 1/2."""
    u = np.maximum(2.0 * np.asarray(rho, dtype=float) - 1.0, 0.0)
    return u**5, 10.0 * u**4


def star_radius(w):
    """Boundary radius of the built-in star domain at unit directions ``w``.

    In spherical coordinates (azimuth phi, polar theta),
    ``S = 2 + 3/4 cos(2 phi) sin(theta)^2 (7 cos(theta)^2 - 1)``, which in
    Cartesian form is ``2 + 3/4 (x^2 - y^2)(7 z^2 - 1)``.  Returns ``S`` and
    its tangential gradient on the sphere.
    """
    x, y, z = w[:, 0], w[:, 1], w[:, 2]
    P = (x**2 - y**2) * (7.0 * z**2 - 1.0)
    # gradient of the degree-0 homogeneous extension P(w)/|w|^4 at |w| = 1;
    # the extension uses 7 z^2 - |w|^2 for the second factor
    q1 = x**2 - y**2
    q2 = 7.0 * z**2 - (x**2 + y**2 + z**2)
    dP = np.column_stack(
        [2 * x * q2 - 2 * x * q1, -2 * y * q2 - 2 * y * q1, 12.0 * z * q1]
    )
    grad = 0.75 * (dP - 4.0 * P[:, None] * w)
    return 2.0 + 0.75 * P, grad


def star_map(radius=star_radius):
    """Star-shaped domain ``rho -> (1 - t(rho)) rho + t(rho) S(w)`` along rays.

    ``radius(w)`` returns the boundary radius ``S > 1`` and its tangential
    gradient at unit vectors ``w``.  The map is the identity for
    ``|x| <= 1/2``.  The inverse solves the one-dimensional radial
    equation along the ray through the point.
    """

    def _split(x):
        rho = np.linalg.norm(x, axis=1)
        outer = rho > 0.5
        return rho, outer

    def forward(x):
        x = np.asarray(x, dtype=float)
        rho, outer = _split(x)
        s = x.copy()
        if outer.any():
            r, w = rho[outer], x[outer] / rho[outer, None]
            S, _ = radius(w)
            t, _ = star_blend(r)
            R = (1.0 - t) * r + t * S
            s[outer] = R[:, None] * w
        return s

    def jac(x):
        x = np.asarray(x, dtype=float)
        rho, outer = _split(x)
        J = np.broadcast_to(np.eye(3), (len(x), 3, 3)).copy()
        if outer.any():
            r, w = rho[outer], x[outer] / rho[outer, None]
            S, gS = radius(w)
            t, dt = star_blend(r)
            R = (1.0 - t) * r + t * S
            dR = (1.0 - t) + dt * (S - r)
            ww = np.einsum("pi,pj->pij", w, w)
            eye = np.eye(3)[None]
            J[outer] = (
                dR[:, None, None] * ww
                + (t / r)[:, None, None] * np.einsum("pi,pj->pij", w, gS)
                + (R / r)[:, None, None] * (eye - ww)
            )
        return J

    def inverse(s):
        # rays are preserved, so only the radius R(rho) = |s| needs solving;
        # R is increasing on [1/2, 1] because S > 1
        s = np.asarray(s, dtype=float)
        x = s.copy()
        r = np.linalg.norm(s, axis=1)
        outer = r > 0.5
        if not outer.any():
            return x
        target, w = r[outer], s[outer] / r[outer, None]
        S, _ = radius(w)

        def R(rho):
            t, dt = star_blend(rho)
            return (1.0 - t) * rho + t * S, (1.0 - t) + dt * (S - rho)

        lo, hi = np.full_like(target, 0.5), np.ones_like(target)
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            below = R(mid)[0] < target
            lo, hi = np.where(below, mid, lo), np.where(below, hi, mid)
        rho = 0.5 * (lo + hi)
        for _ in range(2):
            val, d = R(rho)
            rho = rho - (val - target) / d
        beyond = target > S
        # outside the domain: extrapolate past 1 so the caller sees |x| > 1
        rho = np.where(beyond, 1.0 + (target - S) / R(np.ones_like(S))[1], rho)
        x[outer] = rho[:, None] * w
        return x

    return DomainMap("star", 3, forward, jac, inverse, {"S": "2 + 3/4 cos(2 phi) sin(theta)^2 (7 cos(theta)^2 - 1)"})


BUILTIN_MAPS = {
    "identity2d": lambda **kw: identity_map(2),
    "identity3d": lambda **kw: identity_map(3),
    "planar-quadratic": lambda a=0.5, **kw: planar_quadratic_map(a),
    "ellipsoid": lambda matrix=ELLIPSOID_MATRIX, **kw: ellipsoid_map(matrix),
    "star": lambda **kw: star_map(),
}


def get_map(name, **params):
    """Built-in map by name; see the module docstring for the list."""
    try:
        factory = BUILTIN_MAPS[name]
    except KeyError:
        raise ValueError(f"unknown map {name!r}; available: {', '.join(BUILTIN_MAPS)}") from None
    return factory(**params)
