import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import roots_jacobi, roots_legendre

from balleig.errors import BallEigError
from balleig.quadrature import ball_rule, disk_rule, gauss_jacobi, gauss_nodes, integrate

from oracles import ball_moment, disk_moment


def test_gauss_unit_single_node():
    z, w = gauss_nodes(1)
    assert z.tolist() == [0.0]
    assert w.tolist() == [2.0]


def test_gauss_unit_quartic():
    z, w = gauss_nodes(3)
    assert abs(np.sum(w * z**4) - 2 / 5) < 1e-15


def test_gauss_radial_squared_cubic():
    # int (1+t)^2 t^3 = int t^3 + 2 t^4 + t^5 = 4/5
    z, w = gauss_nodes(4, "radial-squared")
    assert abs(np.sum(w * z**3) - 4 / 5) < 1e-14


@pytest.mark.parametrize("q", [1, 2, 5, 12, 30])
@pytest.mark.parametrize("beta", [0.0, 2.0, 1.5])
def test_gauss_jacobi_matches_scipy(q, beta):
    z, w = gauss_jacobi(q, 0.0, beta)
    zr, wr = roots_jacobi(q, 0.0, beta)
    assert np.allclose(z, zr, atol=1e-13)
    assert np.allclose(w, wr, rtol=1e-12, atol=1e-15)


def test_gauss_legendre_matches_scipy():
    z, w = gauss_nodes(17)
    zr, wr = roots_legendre(17)
    assert np.allclose(z, zr, atol=1e-14) and np.allclose(w, wr, atol=1e-14)


@pytest.mark.parametrize("q", [1, 3, 7])
def test_gauss_exactness_degree(q):
    for weight, mass in (("unit", lambda k: 2 / (k + 1) if k % 2 == 0 else 0.0),):
        z, w = gauss_nodes(q, weight)
        for k in range(2 * q):
            assert abs(np.sum(w * z**k) - mass(k)) < 1e-14


def test_unknown_weight():
    with pytest.raises(ValueError):
        gauss_nodes(3, "cubic")


@pytest.mark.parametrize("q", [1, 2, 4, 8])
def test_rule_sizes_and_weights(q):
    d, b = disk_rule(q), ball_rule(q)
    assert d.count == (q + 1) * (2 * q + 1)
    assert b.count == 2 * q * q * q
    for rule, vol in ((d, np.pi), (b, 4 * np.pi / 3)):
        assert np.all(rule.weights > 0)
        assert abs(rule.weights.sum() - vol) < 1e-13
        assert np.linalg.norm(rule.nodes, axis=1).max() < 1.0


def test_disk_second_moment():
    for q in (1, 2, 6):
        assert abs(integrate(disk_rule(q), lambda x: x[:, 0] ** 2) - np.pi / 4) < 1e-14


def test_ball_z_squared():
    for q in (2, 3, 7):
        assert abs(integrate(ball_rule(q), lambda x: x[:, 2] ** 2) - 4 * np.pi / 15) < 1e-13


def test_integrate_examples():
    assert abs(integrate(disk_rule(3), lambda x: np.full(len(x), 3.0)) - 3 * np.pi) < 1e-13
    assert abs(integrate(ball_rule(4), lambda x: np.sum(x * x, axis=1)) - 4 * np.pi / 5) < 1e-13
    assert abs(integrate(disk_rule(8), lambda x: (1 - np.sum(x * x, axis=1)) ** 2 / np.pi) - 1 / 3) < 1e-14


def test_integrate_rejects_nonfinite():
    rule = disk_rule(2)
    with pytest.raises(BallEigError, match="node"), np.errstate(divide="ignore"):
        integrate(rule, lambda x: 1.0 / (x[:, 0] - x[0, 0]))


@pytest.mark.parametrize("q", range(1, 7))
def test_disk_monomial_exactness(q):
    rule = disk_rule(q)
    x, y = rule.nodes.T
    for i in range(2 * q + 1):
        for j in range(2 * q + 1 - i):
            assert abs(integrate(rule, x**i * y**j) - disk_moment(i, j)) < 1e-12, (i, j)


@pytest.mark.parametrize("q", range(1, 6))
def test_ball_monomial_exactness(q):
    rule = ball_rule(q)
    x, y, z = rule.nodes.T
    for i in range(2 * q):
        for j in range(2 * q - i):
            for k in range(2 * q - i - j):
                assert abs(integrate(rule, x**i * y**j * z**k) - ball_moment(i, j, k)) < 1e-12, (i, j, k)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**31 - 1))
def test_disk_random_polynomial(q, seed):
    rng = np.random.default_rng(seed)
    rule = disk_rule(q)
    x, y = rule.nodes.T
    total, exact = 0.0, 0.0
    for i in range(2 * q + 1):
        for j in range(2 * q + 1 - i):
            c = rng.uniform(-1, 1)
            total += c * x**i * y**j
            exact += c * disk_moment(i, j)
    assert abs(integrate(rule, total) - exact) < 1e-12
