import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stringmass import coefficients as co
from stringmass.errors import (ConfigError, DomainMismatch, NonPositiveCoefficient)


def test_constant_profile_values():
    p = co.build_profile({"kind": "constant", "value": 2.5}, "left", "rho")
    x = np.linspace(-1.0, 0.0, 7)
    assert np.allclose(p.value(x), 2.5)
    assert np.allclose(p.derivative(x), 0.0)


def test_poly_profile_matches_horner():
    # 1 + 0.3 x + 0.1 x^2, increasing-degree coefficients
    p = co.build_profile({"kind": "poly", "coeffs": [1.0, 0.3, 0.1]}, "right", "sigma")
    x = np.linspace(0.0, 1.0, 11)
    assert np.allclose(p.value(x), 1.0 + 0.3 * x + 0.1 * x ** 2, rtol=0, atol=1e-15)
    assert np.allclose(p.derivative(x), 0.3 + 0.2 * x, rtol=0, atol=1e-15)


def test_samples_profile_reproduces_smooth_function():
    xs = np.linspace(-1.0, 0.0, 41)
    ys = 1.0 + 0.2 * np.sin(np.pi * xs)
    p = co.build_profile({"kind": "samples", "x": list(xs), "y": list(ys)}, "left", "rho")
    xf = np.linspace(-1.0, 0.0, 401)
    assert np.max(np.abs(p.value(xf) - (1.0 + 0.2 * np.sin(np.pi * xf)))) < 2e-6
    assert np.max(np.abs(p.derivative(xf) - 0.2 * np.pi * np.cos(np.pi * xf))) < 2e-4


def test_positivity_enforced():
    with pytest.raises(NonPositiveCoefficient):
        co.build_profile({"kind": "constant", "value": 0.0}, "left", "rho")
    with pytest.raises(NonPositiveCoefficient):
        # dips below zero inside (0,1)
        co.build_profile({"kind": "poly", "coeffs": [0.05, -1.0, 1.0]}, "right", "sigma")
    with pytest.raises(NonPositiveCoefficient):
        co.build_profile({"kind": "constant", "value": -0.1}, "left", "q")
    # q = 0 is allowed
    co.build_profile({"kind": "constant", "value": 0.0}, "left", "q")


def test_domain_mismatch_rejected():
    xs = np.linspace(-0.9, 0.0, 12)
    with pytest.raises(DomainMismatch):
        co.build_profile({"kind": "samples", "x": list(xs), "y": [1.0] * 12}, "left", "rho")
    with pytest.raises(DomainMismatch):
        co.build_profile({"kind": "samples", "x": [0.0, 0.5, 0.2, 1.0], "y": [1.0] * 4},
                         "right", "rho")


def test_optical_length_constant_case():
    # sqrt(rho/sigma) = sqrt(4/1) = 2 over an interval of length 1
    cfg = co.constant_config(rho1=4.0, sigma1=1.0)
    assert abs(cfg.gamma1 - 2.0) < 1e-12
    assert abs(cfg.gamma2 - 1.0) < 1e-12


def test_optical_length_variable_case_against_riemann_sum():
    xs = np.linspace(0.0, 1.0, 33)
    cfg = co.config_from_dict({
        "mass": 1.0,
        "left": {"rho": {"kind": "constant", "value": 1.0},
                 "sigma": {"kind": "constant", "value": 1.0},
                 "q": {"kind": "constant", "value": 0.0}},
        "right": {"rho": {"kind": "poly", "coeffs": [1.0, 0.5]},
                  "sigma": {"kind": "constant", "value": 2.0},
                  "q": {"kind": "constant", "value": 0.0}},
    })
    # independent oracle: fine midpoint rule
    xm = np.linspace(0.0, 1.0, 2_000_001)
    xm = 0.5 * (xm[1:] + xm[:-1])
    oracle = np.mean(np.sqrt((1.0 + 0.5 * xm) / 2.0))
    assert abs(cfg.gamma2 - oracle) < 1e-10


@given(c=st.floats(min_value=0.01, max_value=100.0))
@settings(max_examples=25, deadline=None)
def test_optical_length_scaling_invariant(c):
    # scaling rho and sigma by the same factor leaves the optical length fixed
    base = co.constant_config(rho1=2.0, sigma1=0.5)
    scaled = co.constant_config(rho1=2.0 * c, sigma1=0.5 * c)
    assert abs(base.gamma1 - scaled.gamma1) < 1e-12 * max(1.0, base.gamma1)


def test_config_round_trip(tmp_path):
    cfg = co.constant_config(rho1=1.5, sigma2=2.0, q1=0.3, mass=0.7)
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg.to_dict()))
    back = co.config_from_file(path)
    assert back.mass == cfg.mass
    assert abs(back.gamma1 - cfg.gamma1) < 1e-14
    assert abs(back.gamma2 - cfg.gamma2) < 1e-14


def test_config_validation_errors():
    with pytest.raises(ConfigError):
        co.config_from_dict({"mass": 1.0, "left": {}})
    with pytest.raises(ConfigError):
        co.constant_config(mass=0.0)
    with pytest.raises(ConfigError):
        co.config_from_dict({
            "mass": 1.0,
            "left": {"rho": {"kind": "nope"}, "sigma": {"kind": "constant", "value": 1},
                     "q": {"kind": "constant", "value": 0}},
            "right": {"rho": {"kind": "constant", "value": 1},
                      "sigma": {"kind": "constant", "value": 1},
                      "q": {"kind": "constant", "value": 0}},
        })
