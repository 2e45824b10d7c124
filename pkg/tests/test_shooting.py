import numpy as np
import pytest

from stringmass import shooting as sh
from stringmass.coefficients import config_from_dict, constant_config
from stringmass.errors import NonFiniteState, StepBudgetExceeded

UNIT = constant_config()


def smooth_config():
    return config_from_dict({
        "mass": 1.0,
        "left": {"rho": {"kind": "poly", "coeffs": [1.0, 0.4, 0.2]},
                 "sigma": {"kind": "poly", "coeffs": [1.2, 0.3]},
                 "q": {"kind": "poly", "coeffs": [0.5, 0.1]}},
        "right": {"rho": {"kind": "poly", "coeffs": [0.8, -0.2]},
                  "sigma": {"kind": "constant", "value": 1.5},
                  "q": {"kind": "constant", "value": 0.2}},
    })


def test_left_unit_closed_form():
    # -y'' = lam y, y(-1)=0, y'(-1)=1: y = sin(s(x+1))/s with s = sqrt(lam)
    for lam in (0.7, 3.0, 40.0, 450.0):
        s = np.sqrt(lam)
        sol = sh.shoot_left(lam, UNIT)
        assert np.max(np.abs(sol.y - np.sin(s * (sol.x + 1.0)) / s)) < 1e-10
        assert np.max(np.abs(sol.yp - np.cos(s * (sol.x + 1.0)))) < 1e-9
        assert abs(sol.junction_value - np.sin(s) / s) < 1e-11
        assert abs(sol.junction_slope - np.cos(s)) < 1e-10


def test_right_unit_closed_form():
    # y(1)=0, y'(1)=-1: y = sin(s(1-x))/s
    for lam in (0.7, 3.0, 40.0, 450.0):
        s = np.sqrt(lam)
        sol = sh.shoot_right(lam, UNIT)
        assert sol.x[0] == 0.0 and sol.x[-1] == 1.0
        assert np.max(np.abs(sol.y - np.sin(s * (1.0 - sol.x)) / s)) < 1e-10
        assert np.max(np.abs(sol.yp + np.cos(s * (1.0 - sol.x)))) < 1e-9
        assert abs(sol.junction_value - np.sin(s) / s) < 1e-11
        assert abs(sol.junction_slope + np.cos(s)) < 1e-10


def test_negative_lambda_hyperbolic_branch():
    lam = -9.0
    k = 3.0
    sol = sh.shoot_left(lam, UNIT)
    assert abs(sol.junction_value - np.sinh(k) / k) < 1e-9


def test_scaled_density_closed_form():
    # rho = 4 on the left: y = sin(2 s (x+1)) / (2 s)
    cfg = constant_config(rho1=4.0)
    lam = 11.0
    c = 2.0 * np.sqrt(lam)
    sol = sh.shoot_left(lam, cfg)
    assert abs(sol.junction_value - np.sin(c) / c) < 1e-11


def test_junction_batch_matches_scalar_solves():
    cfg = smooth_config()
    lams = np.array([0.5, 7.0, 33.0, 210.0])
    y0, yp0 = sh.junction_values(lams, "left", cfg)
    for i, lam in enumerate(lams):
        sol = sh.shoot_left(lam, cfg)
        assert abs(y0[i] - sol.junction_value) < 1e-13
        assert abs(yp0[i] - sol.junction_slope) < 1e-13


def test_fourth_order_convergence():
    cfg = smooth_config()
    lam = 35.0
    ref = sh.junction_values(np.array([lam]), "left", cfg, n_steps=16384)[0][0]
    errs = []
    for n in (128, 256, 512):
        val = sh.junction_values(np.array([lam]), "left", cfg, n_steps=n)[0][0]
        errs.append(abs(val - ref))
    r1 = errs[0] / errs[1]
    r2 = errs[1] / errs[2]
    assert 10.0 < r1 < 24.0
    assert 10.0 < r2 < 24.0


def test_ode_residual_invariant():
    cfg = smooth_config()
    for side, shoot in (("left", sh.shoot_left), ("right", sh.shoot_right)):
        for lam in (2.0, 50.0, 400.0):
            sol = shoot(lam, cfg)
            assert sh.ode_residual(sol, cfg) <= 1e-4 * (1.0 + abs(lam))


def test_reflection_symmetry():
    # right coefficients are the mirror images of the left ones
    cfg = config_from_dict({
        "mass": 1.0,
        "left": {"rho": {"kind": "poly", "coeffs": [1.0, 0.3]},
                 "sigma": {"kind": "poly", "coeffs": [2.0, 0.5]},
                 "q": {"kind": "constant", "value": 0.1}},
        "right": {"rho": {"kind": "poly", "coeffs": [1.0, -0.3]},
                  "sigma": {"kind": "poly", "coeffs": [2.0, -0.5]},
                  "q": {"kind": "constant", "value": 0.1}},
    })
    for lam in (3.0, 57.0):
        left = sh.shoot_left(lam, cfg)
        right = sh.shoot_right(lam, cfg)
        assert abs(left.junction_value - right.junction_value) < 1e-11
        assert abs(left.junction_slope + right.junction_slope) < 1e-10


def test_lambda_derivative_matches_finite_difference():
    cfg = smooth_config()
    for side in ("left", "right"):
        for lam in (5.0, 80.0):
            d = sh.shoot_lambda_derivative(lam, side, cfg)
            eps = 1e-5 * (1.0 + abs(lam))
            yp, _ = sh.junction_values(np.array([lam + eps]), side, cfg)
            ym, _ = sh.junction_values(np.array([lam - eps]), side, cfg)
            fd = (yp[0] - ym[0]) / (2.0 * eps)
            assert abs(d.y0_lam - fd) < 1e-7 * (1.0 + abs(fd))
            _, sp = sh.junction_values(np.array([lam + eps]), side, cfg)
            _, sm = sh.junction_values(np.array([lam - eps]), side, cfg)
            fd_p = (sp[0] - sm[0]) / (2.0 * eps)
            assert abs(d.yp0_lam - fd_p) < 1e-6 * (1.0 + abs(fd_p))


def test_lambda_derivative_unit_closed_form():
    lam = 19.0
    s = np.sqrt(lam)
    d = sh.shoot_lambda_derivative(lam, "left", UNIT)
    # d/dlam [sin s / s] = (cos s / s - sin s / s**2) / (2 s)
    expect = (np.cos(s) / s - np.sin(s) / s ** 2) / (2.0 * s)
    assert abs(d.y0_lam - expect) < 1e-12
    # d/dlam cos s = -sin s / (2 s)
    assert abs(d.yp0_lam + np.sin(s) / (2.0 * s)) < 1e-12


def test_guards():
    with pytest.raises(NonFiniteState):
        sh.junction_values(np.array([-2.0e4]), "left", UNIT)
    with pytest.raises(StepBudgetExceeded):
        sh.shoot_left(1.0, UNIT, n_steps=1 << 20)
    with pytest.raises(StepBudgetExceeded):
        sh.shoot_left(1.0, UNIT, n_steps=4)
