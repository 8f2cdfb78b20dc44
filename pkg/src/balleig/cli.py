"""Command-line front end: ``balleig solve|sweep|sample``.

Exit codes: 0 success, 2 configuration error, 3 numerical error.
"""

import argparse
import csv
import json
import os
import sys

import numpy as np
import scipy

from . import __version__
from .assembly import assemble, dump_system
from .diagnostics import convergence_report, resolve_order
from .eigensolve import solve_generalized
from .errors import BallEigError, ConfigError
from .geometry import map_point

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 2, 3


def _versions():
    return {"balleig": __version__, "numpy": np.__version__, "scipy": scipy.__version__}


def _fmt(v):
    return f"{float(v):.17g}"


def _write_json(path, payload):
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _single_degree(config):
    if len(config.degrees) != 1:
        raise ConfigError(f"this command needs a single degree, got {config.degrees}")
    return config.degrees[0]


def _solve(config):
    n = _single_degree(config)
    system = assemble(config.domain_map(), config.coefficients(), config.bc, n, resolve_order(config.q, n))
    first = 0 if config.bc == "neumann" else 1
    count = min(system.size, config.k + (1 if first == 0 else 0))
    return system, solve_generalized(system, count)


def run_solve(config):
    """Solve one degree; write eigenvalues (CSV + JSON) and coefficient vectors."""
    os.makedirs(config.out, exist_ok=True)
    system, sol = _solve(config)
    ranks = list(range(sol.first_rank, sol.first_rank + sol.count))
    paths = []

    path = os.path.join(config.out, "eigenvalues.csv")
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["rank", "lambda", "residual"])
        for r, lam, res in zip(ranks, sol.values, sol.residuals):
            w.writerow([r, _fmt(lam), _fmt(res)])
    paths.append(path)

    path = os.path.join(config.out, "coefficients.csv")
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["index", "label"] + [f"alpha_{r}" for r in ranks])
        for i, label in enumerate(system.basis.indices):
            w.writerow([i, "-".join(map(str, label))] + [_fmt(v) for v in sol.vectors[i]])
    paths.append(path)

    if config.dump_matrices:
        path = os.path.join(config.out, "system.txt")
        dump_system(system, path)
        paths.append(path)

    path = os.path.join(config.out, "eigenvalues.json")
    _write_json(
        path,
        {
            "config": config.resolved(),
            "system": system.provenance,
            "eigenvalues": {str(r): float(v) for r, v in zip(ranks, sol.values)},
            "residuals": {str(r): float(v) for r, v in zip(ranks, sol.residuals)},
            "mass_condition": system.mass_condition(),
            "versions": _versions(),
        },
    )
    paths.append(path)
    return paths


def run_convergence(config):
    """Degree sweep against a reference degree; write table, metadata and plot data."""
    if len(config.degrees) < 2:
        raise ConfigError("a sweep needs at least two degrees")
    os.makedirs(config.out, exist_ok=True)
    ranks = list(range(1, config.k + 1))
    report = convergence_report(
        config.domain_map(),
        config.coefficients(),
        config.bc,
        config.degrees,
        ranks,
        config.reference_degree(),
        q=config.q,
        h=config.fd_step(),
        residuals=config.want_residuals(),
        grid=config.grid,
    )
    report.metadata["config"] = config.resolved()
    report.metadata["versions"] = _versions()
    table = os.path.join(config.out, "table.csv")
    report.write_csv(table)
    meta = os.path.join(config.out, "report.json")
    report.write_json(meta)
    return [table, meta] + report.write_figure_data(config.out)


def sample_grid(dim, shape=None):
    """Reference grid for surface plots: radii run from 0 to just inside the boundary."""
    if shape is None:
        shape = (21, 48) if dim == 2 else (11, 12, 24)
    r = np.linspace(0.0, 1.0 - 1e-12, shape[0])
    if dim == 2:
        a = 2 * np.pi * np.arange(shape[1]) / shape[1]
        rr, aa = np.meshgrid(r, a, indexing="ij")
        return np.column_stack([(rr * np.cos(aa)).ravel(), (rr * np.sin(aa)).ravel()])
    t = np.linspace(0.0, np.pi, shape[1])
    a = 2 * np.pi * np.arange(shape[2]) / shape[2]
    rr, tt, aa = np.meshgrid(r, t, a, indexing="ij")
    return np.column_stack(
        [(rr * np.sin(tt) * np.cos(aa)).ravel(), (rr * np.sin(tt) * np.sin(aa)).ravel(), (rr * np.cos(tt)).ravel()]
    )


def sample_eigenfunction(config, rank, grid=None):
    """Write ``(s, u(s))`` samples of eigenfunction ``rank`` over the image of a reference grid."""
    os.makedirs(config.out, exist_ok=True)
    system, sol = _solve(config)
    try:
        u = sol.eigenfunction(rank)
    except IndexError as exc:
        raise ConfigError(str(exc)) from None
    dmap = config.domain_map()
    x = sample_grid(dmap.dim, grid if grid is not None else config.sample_grid)
    s = map_point(dmap, x)
    vals = u.reference(x)
    path = os.path.join(config.out, f"eigenfunction_k{rank}.csv")
    names = ["s1", "s2", "s3"][: dmap.dim]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(names + ["u"])
        for si, v in zip(s, vals):
            w.writerow([_fmt(c) for c in si] + [_fmt(v)])
    return path


def build_parser():
    parser = argparse.ArgumentParser(prog="balleig", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (
        ("solve", "solve one degree and write eigenpairs"),
        ("sweep", "degree sweep with convergence diagnostics"),
        ("sample", "sample an eigenfunction on a grid"),
    ):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", help="INI file with a [run] section")
        p.add_argument("--out", help="output directory")
        p.add_argument("--degrees", help="degree or range, e.g. 8 or 1..14")
        p.add_argument("--bc", choices=["dirichlet", "neumann"])
        p.add_argument("--map", help="built-in map name")
        p.add_argument("--q", help="quadrature order: integer, auto (n+2) or n+K")
        p.add_argument("--k", help="number of eigenpairs / ranks")
        p.add_argument("--a", help="parameter of the planar-quadratic map")
        if name == "sweep":
            p.add_argument("--reference", help="reference degree (default: max degree + 1)")
        if name == "sample":
            p.add_argument("--rank", type=int, default=1, help="eigenpair rank to sample")
            p.add_argument("--grid", help="grid shape, e.g. 21,48 (2D) or 11,12,24 (3D)")
    return parser


def main(argv=None):
    from .config import load_config

    args = build_parser().parse_args(argv)
    overrides = {
        key: getattr(args, key, None)
        for key in ("out", "degrees", "bc", "map", "q", "k", "a", "reference")
    }
    try:
        config = load_config(args.config, overrides)
        if args.command == "solve":
            paths = run_solve(config)
        elif args.command == "sweep":
            paths = run_convergence(config)
        else:
            grid = [int(v) for v in args.grid.split(",")] if args.grid else None
            paths = [sample_eigenfunction(config, args.rank, grid)]
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (BallEigError, np.linalg.LinAlgError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    for p in paths:
        print(p)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
