"""Empirical convergence measures for degree sweeps.

* eigenvalue differences between degrees,
* grid sup-norm differences of eigenfunctions,
* pointwise finite-difference residuals ``|-Lap u - lambda u|``,
* L2(Omega) angles between eigenfunctions.
"""

import csv
import json
from dataclasses import dataclass, field
from math import pi

import numpy as np

from .assembly import assemble, default_order
from .eigensolve import solve_generalized
from .errors import BallEigError
from .geometry import CoefficientField, inverse_map, map_point, transformed_coefficients
from .quadrature import reference_rule

DEFAULT_GRIDS = {2: (64, 128), 3: (32, 32, 64)}


def eigenvalue_diff(values):
    """Absolute differences of consecutive entries."""
    values = np.asarray(values, dtype=float)
    if values.size < 2:
        raise ValueError("need eigenvalues for at least two degrees")
    return np.abs(np.diff(values))


def reference_grid(dim, shape=None):
    """Polar (2D) or spherical (3D) tensor grid strictly inside the unit ball.

    2D: ``nr`` radii x ``na`` azimuths.  3D: ``nr`` radii x ``nt`` polar
    angles x ``na`` azimuths.  Radii and polar angles sit at cell midpoints.
    """
    shape = DEFAULT_GRIDS[dim] if shape is None else tuple(shape)
    nr = shape[0]
    r = (np.arange(nr) + 0.5) / nr
    if dim == 2:
        na = shape[1]
        a = 2 * pi * np.arange(na) / na
        rr, aa = np.meshgrid(r, a, indexing="ij")
        return np.column_stack([(rr * np.cos(aa)).ravel(), (rr * np.sin(aa)).ravel()])
    nt, na = shape[1], shape[2]
    t = (np.arange(nt) + 0.5) * pi / nt
    a = 2 * pi * np.arange(na) / na
    rr, tt, aa = np.meshgrid(r, t, a, indexing="ij")
    st = np.sin(tt)
    return np.column_stack([(rr * st * np.cos(aa)).ravel(), (rr * st * np.sin(aa)).ravel(), (rr * np.cos(tt)).ravel()])


def eigenfunction_diff(u_a, u_b, grid=None):
    """Max of ``|u_a - u_b|`` over a reference grid (default: :func:`reference_grid`)."""
    pts = reference_grid(u_a.basis.dim) if grid is None else np.asarray(grid, dtype=float)
    return float(np.max(np.abs(u_a.reference(pts) - u_b.reference(pts))))


def fd_laplacian(u, s, h):
    """Central second-difference Laplacian of the physical-space function ``u`` at ``s``."""
    s = np.asarray(s, dtype=float)
    d = s.size
    stencil = [s]
    for i in range(d):
        e = np.zeros(d)
        e[i] = h
        stencil += [s + e, s - e]
    vals = u(np.array(stencil))
    centre = vals[0]
    lap = (vals[1:].sum() - 2 * d * centre) / h**2
    return lap, centre


def residual_at_point(u, lam, s, h=1e-4):
    """``|-Lap u(s) - lam u(s)|`` with a 2d+1 point stencil of spacing ``h``.

    ``u`` is an :class:`~balleig.eigensolve.Eigenfunction`; stencil points are
    pulled back by the domain's inverse map, which rejects points outside it.
    """
    lap, centre = fd_laplacian(u, s, h)
    return float(abs(-lap - lam * centre))


def _l2_pair(u_a, u_b, q):
    if q is None:
        q = max(u_a.degree, u_b.degree) + 2
    rule = reference_rule(u_a.basis.dim, q)
    _, _, detj = transformed_coefficients(u_a.dmap, CoefficientField(), rule.nodes)
    w = rule.weights * detj
    va, vb = u_a.reference(rule.nodes), u_b.reference(rule.nodes)
    na, nb = np.sqrt(np.sum(w * va * va)), np.sqrt(np.sum(w * vb * vb))
    if na == 0.0 or nb == 0.0:
        raise BallEigError("cannot measure the angle to a zero function")
    return w, va / na, vb / nb


def l2_cosine(u_a, u_b, q=None):
    """``<u_a, u_b> / (|u_a| |u_b|)`` in L2 of the physical domain (unclamped)."""
    w, a, b = _l2_pair(u_a, u_b, q)
    return float(np.sum(w * a * b))


def l2_angle(u_a, u_b, q=None):
    """Angle in [0, pi/2] between two eigenfunctions in L2 of the physical domain.

    Computed from the chord between the unit vectors, ``2 asin(|a - b| / 2)``,
    which keeps full relative accuracy for tiny angles where ``arccos``
    bottoms out near 1e-8.
    """
    w, a, b = _l2_pair(u_a, u_b, q)
    if np.sum(w * a * b) < 0:
        b = -b
    chord = np.sqrt(np.sum(w * (a - b) ** 2))
    return float(2.0 * np.arcsin(min(1.0, 0.5 * chord)))


def default_fd_step(dmap):
    # the star map is only C^4, so its eigenfunctions carry 3-4 digits
    return 1e-2 if dmap.name == "star" else 1e-4


def resolve_order(q, n):
    """Quadrature order for degree ``n`` from ``None``/"auto", an int, or ``"n+K"``."""
    if q is None or q == "auto":
        return default_order(n)
    if callable(q):
        return int(q(n))
    if isinstance(q, str):
        text = q.replace(" ", "")
        if text == "n":
            return n
        if text.startswith("n+"):
            return n + int(text[2:])
        return int(text)
    return int(q)


@dataclass
class ConvergenceReport:
    """Per-degree diagnostics against a reference degree."""

    rows: list
    ranks: list
    reference_degree: int
    h: float
    residual_point: list
    grid: dict
    metadata: dict = field(default_factory=dict)
    residuals: bool = True

    def columns(self):
        cols = ["n", "N_n"] + [f"dlam_{k}" for k in self.ranks] + [f"angle_{k}" for k in self.ranks]
        if self.residuals:
            cols += [f"R_{k}" for k in self.ranks]
        return cols

    def column(self, name):
        return np.array([row[name] for row in self.rows], dtype=float)

    def write_csv(self, path):
        cols = self.columns()
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(cols)
            for row in self.rows:
                w.writerow([_fmt(row[c]) for c in cols])

    def to_dict(self):
        return {
            "reference_degree": self.reference_degree,
            "ranks": list(self.ranks),
            "h": self.h,
            "residual_point": self.residual_point,
            "grid": self.grid,
            "metadata": self.metadata,
            "rows": [{k: _json_num(v) for k, v in row.items()} for row in self.rows],
        }

    def write_json(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")

    def write_figure_data(self, outdir):
        """One two-column ``n,value`` file per measure and rank; returns the paths."""
        names = [("Lambda", "eigenvalue_diff"), ("D", "eigenfunction_diff")]
        if self.residuals:
            names.append(("R", "residual"))
        paths = []
        for key, stem in names:
            for k in self.ranks:
                path = f"{outdir}/{stem}_k{k}.csv"
                with open(path, "w", newline="") as fh:
                    w = csv.writer(fh, lineterminator="\n")
                    w.writerow(["n", "value"])
                    for row in self.rows:
                        v = row[f"{key}_{k}"]
                        if np.isfinite(v):
                            w.writerow([row["n"], _fmt(v)])
                paths.append(path)
        return paths


def _fmt(v):
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return f"{float(v):.17g}"


def _json_num(v):
    if isinstance(v, (int, np.integer)):
        return int(v)
    v = float(v)
    return v if np.isfinite(v) else None


def solve_sweep(dmap, coeff, bc, degrees, count, q=None):
    """Solve each degree; returns ``{n: EigenSolution}``."""
    out = {}
    for n in sorted(set(degrees)):
        system = assemble(dmap, coeff, bc, n, resolve_order(q, n))
        out[n] = solve_generalized(system, min(count, system.size))
    return out


def convergence_report(
    dmap,
    coeff=None,
    bc="dirichlet",
    degrees=range(1, 15),
    ranks=(1, 2),
    reference_degree=15,
    q=None,
    h=None,
    residual_point=None,
    residuals=True,
    grid=None,
):
    """Run a degree sweep and compare every degree with ``reference_degree``.

    Each row holds ``lam_k``, ``dlam_k = |lam_k(n) - lam_k(ref)|``,
    ``angle_k`` (and its unclamped cosine ``cos_k``), ``R_k`` and the
    consecutive-degree measures ``Lambda_k = |lam_k(n+1) - lam_k(n)|`` and
    ``D_k`` (NaN when degree ``n + 1`` was not solved).
    """
    coeff = CoefficientField() if coeff is None else coeff
    degrees = sorted(set(int(n) for n in degrees))
    if not degrees:
        raise ValueError("no degrees requested")
    if reference_degree < degrees[-1]:
        raise ValueError("reference degree must be at least the largest swept degree")
    ranks = list(ranks)
    first = 0 if bc == "neumann" else 1
    count = max(ranks) - first + 1
    h = default_fd_step(dmap) if h is None else float(h)
    if residual_point is None:
        residual_point = map_point(dmap, np.full(dmap.dim, 0.1))
    residual_point = np.asarray(residual_point, dtype=float)
    shape = DEFAULT_GRIDS[dmap.dim] if grid is None else tuple(grid)
    pts = reference_grid(dmap.dim, shape)

    sols = solve_sweep(dmap, coeff, bc, degrees + [reference_degree], count, q)
    ref = sols[reference_degree]
    rows = []
    for n in degrees:
        sol = sols[n]
        row = {"n": n, "N_n": sol.vectors.shape[0]}
        for k in ranks:
            lam = sol.eigenvalue(k)
            u = sol.eigenfunction(k)
            row[f"lam_{k}"] = lam
            row[f"dlam_{k}"] = abs(lam - ref.eigenvalue(k))
            c = l2_cosine(u, ref.eigenfunction(k))
            row[f"cos_{k}"] = c
            row[f"angle_{k}"] = l2_angle(u, ref.eigenfunction(k))
            row[f"R_{k}"] = residual_at_point(u, lam, residual_point, h) if residuals else float("nan")
            nxt = sols.get(n + 1)
            if nxt is not None:
                row[f"Lambda_{k}"] = abs(nxt.eigenvalue(k) - lam)
                row[f"D_{k}"] = eigenfunction_diff(nxt.eigenfunction(k), u, pts)
            else:
                row[f"Lambda_{k}"] = float("nan")
                row[f"D_{k}"] = float("nan")
        rows.append(row)
    meta = {
        "map": dmap.name,
        "map_params": dmap.params,
        "bc": bc,
        "coefficients": coeff.description,
        "q": {str(n): sols[n].system.q for n in sorted(sols)},
    }
    return ConvergenceReport(
        rows,
        ranks,
        reference_degree,
        h,
        residual_point.tolist(),
        {"kind": "polar" if dmap.dim == 2 else "spherical", "shape": list(shape)},
        meta,
        residuals,
    )
