import csv

import numpy as np
import pytest

from balleig.assembly import assemble
from balleig.diagnostics import (
    convergence_report,
    eigenfunction_diff,
    eigenvalue_diff,
    l2_angle,
    l2_cosine,
    reference_grid,
    residual_at_point,
    resolve_order,
)
from balleig.eigensolve import Eigenfunction, normalize_vector, solve_generalized
from balleig.geometry import get_map

from oracles import bessel_j0, bessel_j1, j0_first_zero

J01 = j0_first_zero()


def bessel_mode(s):
    return np.array([bessel_j0(J01 * r) for r in np.linalg.norm(np.atleast_2d(s), axis=1)])


def _disk_solution(n, count=2):
    return solve_generalized(assemble(get_map("identity2d"), n=n), count)


def test_eigenvalue_diff_examples():
    assert eigenvalue_diff([5, 5, 5]).tolist() == [0, 0]
    assert np.allclose(eigenvalue_diff([3, 2.9, 2.99]), [0.1, 0.09], atol=1e-15)
    with pytest.raises(ValueError):
        eigenvalue_diff([1.0])


def test_reference_grid_interior():
    for dim in (2, 3):
        g = reference_grid(dim)
        assert g.shape == (64 * 128, 2) if dim == 2 else (32 * 32 * 64, 3)
        assert np.linalg.norm(g, axis=1).max() < 1


def test_eigenfunction_diff_self_and_sign():
    sol = _disk_solution(6)
    u = sol.eigenfunction(1)
    assert eigenfunction_diff(u, u) == 0.0
    flipped = Eigenfunction(normalize_vector(-sol.m_vectors[:, 0]), u.basis, u.bc, u.dmap)
    assert eigenfunction_diff(u, flipped) == 0.0


def test_eigenfunction_diff_decay():
    ref = _disk_solution(16).eigenfunction(1)
    d4 = eigenfunction_diff(_disk_solution(4).eigenfunction(1), ref)
    d8 = eigenfunction_diff(_disk_solution(8).eigenfunction(1), ref)
    assert d8 / d4 < 1e-2


def test_disk_mode_matches_bessel():
    u = _disk_solution(12).eigenfunction(1)
    g = np.vstack([np.zeros((1, 2)), reference_grid(2, (16, 8))])
    v = u.reference(g)
    # both peak at the centre; compare after rescaling to max 1
    assert np.abs(v / v[np.argmax(np.abs(v))] - bessel_mode(g)).max() < 1e-6


def test_residual_of_exact_mode():
    lam = J01**2
    for s in ([0.1, 0.1], [0.5, -0.3], [0.0, 0.8]):
        assert residual_at_point(bessel_mode, lam, np.array(s), 1e-4) <= 1e-6


def test_residual_lambda_perturbation():
    s = np.array([0.3, 0.2])
    r = residual_at_point(bessel_mode, J01**2 + 1, s, 1e-4)
    assert abs(r - abs(bessel_mode(s)[0])) < 1e-6


def test_residual_of_computed_mode():
    sol = _disk_solution(12)
    u = sol.eigenfunction(1)
    assert residual_at_point(u, sol.eigenvalue(1), np.array([0.1, 0.1])) < 1e-6


def test_bessel_oracle_consistency():
    # J0' = -J1 and J0(j01) = 0
    assert abs(bessel_j0(J01)) < 1e-15
    h = 1e-6
    assert abs((bessel_j0(1.3 + h) - bessel_j0(1.3 - h)) / (2 * h) + bessel_j1(1.3)) < 1e-9


def test_angle_basics():
    sol = _disk_solution(6)
    u1, u2 = sol.eigenfunction(1), sol.eigenfunction(2)
    assert l2_angle(u1, u1) < 1e-7
    neg = Eigenfunction(-u1.coeffs, u1.basis, u1.bc, u1.dmap)
    assert l2_angle(u1, neg) < 1e-7
    assert abs(l2_cosine(u1, neg) + 1) < 1e-14
    assert abs(l2_angle(u1, u2) - np.pi / 2) < 1e-10
    assert abs(l2_angle(u1, u2) - l2_angle(u2, u1)) < 1e-15


def test_resolve_order():
    assert resolve_order(None, 5) == 7 and resolve_order("auto", 5) == 7
    assert resolve_order("n", 5) == 5 and resolve_order("n+1", 5) == 6
    assert resolve_order(9, 5) == 9 and resolve_order(lambda n: 2 * n, 5) == 10


def test_report_single_degree_self_reference():
    rep = convergence_report(get_map("identity2d"), degrees=[6], ranks=[1, 2], reference_degree=6)
    row = rep.rows[0]
    assert row["dlam_1"] == 0 and row["dlam_2"] == 0
    assert row["angle_1"] == 0 and row["angle_2"] == 0
    assert np.isnan(row["Lambda_1"])


def test_report_disk_bessel_decrease():
    degrees = [4, 6, 8, 10, 12]
    rep = convergence_report(get_map("identity2d"), degrees=degrees, ranks=[1], reference_degree=12)
    err = np.abs(rep.column("lam_1") - J01**2)
    for a, b in zip(err, err[1:]):
        assert b < a or b < 1e-8
    assert err[-1] < 1e-8


def test_planar_measures_decrease_on_average():
    rep = convergence_report(get_map("planar-quadratic", a=0.5), degrees=range(1, 12), ranks=[1], reference_degree=12, residuals=False)
    lam, d = rep.column("Lambda_1")[:-1], rep.column("D_1")[:-1]
    for seq in (lam, d):
        for a, b in zip(seq, seq[1:]):
            assert b <= 10 * a or b < 1e-11


def test_report_csv_layout(tmp_path):
    rep = convergence_report(get_map("planar-quadratic", a=0.5), degrees=[2, 3, 4], ranks=[1, 2], reference_degree=6)
    path = tmp_path / "t.csv"
    rep.write_csv(path)
    with open(path) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["n", "N_n", "dlam_1", "dlam_2", "angle_1", "angle_2", "R_1", "R_2"]
    assert [r[:2] for r in rows[1:]] == [["2", "6"], ["3", "10"], ["4", "15"]]
    files = rep.write_figure_data(str(tmp_path))
    assert len(files) == 6
    with open(tmp_path / "eigenvalue_diff_k1.csv") as fh:
        lines = fh.read().splitlines()
    # degree 4 has no successor in this sweep
    assert lines[0] == "n,value" and len(lines) == 3


def test_report_without_residuals():
    rep = convergence_report(get_map("identity3d"), bc="neumann", degrees=[1, 2], ranks=[1], reference_degree=3, residuals=False)
    assert rep.columns() == ["n", "N_n", "dlam_1", "angle_1"]
    assert rep.to_dict()["rows"][0]["R_1"] is None


def test_report_rejects_low_reference():
    with pytest.raises(ValueError):
        convergence_report(get_map("identity2d"), degrees=[4, 6], reference_degree=5)
