import math

import numpy as np
import pytest

import condreg


def test_fixed_kappa_quadratic():
    sol = condreg.solve_fixed_kappa(np.array([3.0, 1.0]), condreg.SpectralLoss.quadratic(), 2.0)
    assert sol.u_star == pytest.approx(1.4, rel=1e-15)
    assert sol.region == (1, 2)
    np.testing.assert_allclose(sol.lambdas, [2.8, 1.4])


def test_estimate_gaussian_example():
    omega = condreg.estimate(np.diag([4.0, 1.0]), condreg.SpectralLoss.gaussian(), 2.0)
    np.testing.assert_allclose(omega, np.diag([1 / 3, 2 / 3]), atol=1e-14)


def test_gaussian_path():
    path = condreg.gaussian_path(np.array([4.0, 1.0]))
    assert path.initial_u == 0.4
    assert path.terminal_kappa == pytest.approx(4.0)
    assert path.breakpoints == [1.0, pytest.approx(4.0)]
    assert path.regions == [(1, 2), (0, 3)]
    assert path.u_at(2.0) == pytest.approx(1 / 3)


def test_projection_properties():
    rng = np.random.default_rng(0)
    a = rng.standard_normal((6, 6))
    x = (a + a.T) / 2
    p = condreg.project(x, 5.0)
    assert condreg.condition_number(p) <= 5.0 * (1 + 1e-8)
    np.testing.assert_allclose(condreg.project(p, 5.0), p, atol=1e-12)
    pp = condreg.project_path(x)
    np.testing.assert_allclose(pp.at(5.0), p, atol=1e-10)
    np.testing.assert_allclose(condreg.project(np.diag([3.0, 1.0]), 2.0), np.diag([2.8, 1.4]))


def test_prox_and_soft_threshold():
    assert condreg.soft_threshold(1.5, 1.0) == pytest.approx(0.5)
    out = condreg.prox_l1_offdiag(np.array([[1.0, 0.4], [0.4, 1.0]]), 0.4)
    np.testing.assert_allclose(out, [[1.0, 0.2], [0.2, 1.0]])


def test_sparse_illustration_runs():
    x = condreg.sample_mvn(condreg.make_illustration_precision(), 200, 7)
    assert x.shape == (200, 10)
    np.testing.assert_array_equal(x, condreg.sample_mvn(condreg.make_illustration_precision(), 200, 7))
    s = condreg.sample_covariance(x)
    omega, report = condreg.estimate_sparse_wellconditioned(s, "concord", mu=0.1, kappa=10.0)
    assert report["cond"] <= 10.0 * (1 + 1e-6)
    assert condreg.condition_number(omega) == pytest.approx(report["cond"])
    _, free = condreg.estimate_sparse_unconstrained(s, "concord", mu=0.1)
    assert free["cond"] > report["cond"]


def test_errors_map_to_python_exceptions():
    with pytest.raises(condreg.InvalidInput):
        condreg.project(np.eye(2), 0.5)
    with pytest.raises(ValueError):
        condreg.project(np.eye(2), 0.5)
    with pytest.raises(condreg.NumericalError):
        condreg.solve_fixed_kappa(np.zeros(2), condreg.SpectralLoss.gaussian(), 2.0)
    with pytest.raises(condreg.DomainError):
        condreg.smooth_gradient("concord", np.eye(2), np.zeros((2, 2)), 1.0, np.zeros((2, 2)))


def test_nuclear_pair_minimizer():
    loss = condreg.SpectralLoss.nuclear_pair(1.0, 0.5)
    assert loss.unconstrained_minimizer(0.0) == pytest.approx(1 + math.sqrt(2))
