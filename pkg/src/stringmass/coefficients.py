"""Coefficient profiles and system configuration.

A configuration describes two strings on [-1,0] and [0,1], each with a
density rho, a stiffness sigma and a potential q, joined at x=0 by a
point mass M.  Profiles come in three kinds: constant, polynomial
(coefficients in increasing degree) and sampled (cubic spline through
strictly increasing abscissas covering the side interval).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import CubicSpline

from .errors import ConfigError, DomainMismatch, NonPositiveCoefficient, QuadratureFailure

SIDE_INTERVALS = {"left": (-1.0, 0.0), "right": (0.0, 1.0)}

# grid size used for the positivity sweep
_CHECK_POINTS = 10_000

_ROLES = ("rho", "sigma", "q")


class CoefficientProfile:
    """One scalar coefficient on one side interval.

    value/derivative accept scalars or arrays and broadcast.
    """

    def __init__(self, side, role, kind, params):
        if side not in SIDE_INTERVALS:
            raise ConfigError(f"unknown side {side!r}")
        if role not in _ROLES:
            raise ConfigError(f"unknown role {role!r}")
        self.side = side
        self.role = role
        self.kind = kind
        self.params = params
        a, b = SIDE_INTERVALS[side]
        self.interval = (a, b)
        if kind == "constant":
            v = float(params["value"])
            self._f = lambda x: np.full_like(np.asarray(x, dtype=float), v)
            self._df = lambda x: np.zeros_like(np.asarray(x, dtype=float))
        elif kind == "poly":
            coeffs = np.asarray(params["coeffs"], dtype=float)
            if coeffs.ndim != 1 or coeffs.size == 0:
                raise ConfigError("poly coeffs must be a non-empty 1-d list")
            dcoeffs = np.polynomial.polynomial.polyder(coeffs) if coeffs.size > 1 else np.zeros(1)
            self._f = lambda x: np.polynomial.polynomial.polyval(np.asarray(x, dtype=float), coeffs)
            self._df = lambda x: np.polynomial.polynomial.polyval(np.asarray(x, dtype=float), dcoeffs)
        elif kind == "samples":
            xs = np.asarray(params["x"], dtype=float)
            ys = np.asarray(params["y"], dtype=float)
            if xs.ndim != 1 or xs.shape != ys.shape or xs.size < 4:
                raise ConfigError("samples need matching 1-d x/y with at least 4 points")
            if np.any(np.diff(xs) <= 0):
                raise DomainMismatch("sample abscissas must be strictly increasing")
            if xs[0] > a + 1e-12 or xs[-1] < b - 1e-12:
                raise DomainMismatch(
                    f"samples cover [{xs[0]}, {xs[-1]}] but side interval is [{a}, {b}]")
            spline = CubicSpline(xs, ys)
            dspline = spline.derivative()
            self._f = lambda x: spline(np.asarray(x, dtype=float))
            self._df = lambda x: dspline(np.asarray(x, dtype=float))
        else:
            raise ConfigError(f"unknown profile kind {kind!r}")
        self._check_sign()

    def _check_sign(self):
        a, b = self.interval
        grid = np.linspace(a, b, _CHECK_POINTS)
        vals = self.value(grid)
        if not np.all(np.isfinite(vals)):
            raise ConfigError(f"{self.role} on {self.side} evaluates to non-finite values")
        vmin = float(vals.min())
        if self.role in ("rho", "sigma"):
            if vmin <= 0.0:
                raise NonPositiveCoefficient(
                    f"{self.role} on {self.side} side has min {vmin:.3e} <= 0")
        else:
            if vmin < 0.0:
                raise NonPositiveCoefficient(
                    f"q on {self.side} side has min {vmin:.3e} < 0")

    def value(self, x):
        return self._f(x)

    def derivative(self, x):
        return self._df(x)

    def to_dict(self):
        if self.kind == "constant":
            return {"kind": "constant", "value": float(self.params["value"])}
        if self.kind == "poly":
            return {"kind": "poly", "coeffs": [float(c) for c in self.params["coeffs"]]}
        return {"kind": "samples",
                "x": [float(v) for v in self.params["x"]],
                "y": [float(v) for v in self.params["y"]]}


def build_profile(spec, side, role):
    """Build a CoefficientProfile from a plain dict description."""
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ConfigError(f"profile description for {side}.{role} must be a dict with a 'kind'")
    return CoefficientProfile(side, role, spec["kind"], spec)


def optical_length(rho, sigma):
    """Integral of sqrt(rho/sigma) over the common side interval."""
    if rho.side != sigma.side:
        raise ConfigError("optical_length needs rho and sigma from the same side")
    a, b = rho.interval

    def integrand(x):
        return float(np.sqrt(rho.value(x) / sigma.value(x)))

    out = quad(integrand, a, b, epsabs=1e-13, epsrel=1e-11, limit=300, full_output=True)
    val, err = out[0], out[1]
    if len(out) > 3 or err > 1e-9 * max(1.0, abs(val)):
        raise QuadratureFailure(
            f"optical length on {rho.side}: estimated error {err:.2e}")
    return float(val)


@dataclass
class SystemConfig:
    """Two coefficient triples plus the point mass, with cached optical lengths."""

    rho1: CoefficientProfile
    sigma1: CoefficientProfile
    q1: CoefficientProfile
    rho2: CoefficientProfile
    sigma2: CoefficientProfile
    q2: CoefficientProfile
    mass: float
    gamma1: float = field(init=False)
    gamma2: float = field(init=False)
    _stage_cache: dict = field(init=False, default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self.mass = float(self.mass)
        if not np.isfinite(self.mass) or self.mass <= 0.0:
            raise ConfigError(f"point mass must be positive, got {self.mass}")
        for name, prof, side, role in (
                ("rho1", self.rho1, "left", "rho"), ("sigma1", self.sigma1, "left", "sigma"),
                ("q1", self.q1, "left", "q"), ("rho2", self.rho2, "right", "rho"),
                ("sigma2", self.sigma2, "right", "sigma"), ("q2", self.q2, "right", "q")):
            if prof.side != side or prof.role != role:
                raise ConfigError(f"{name} must be a {side}-side {role} profile")
        self.gamma1 = optical_length(self.rho1, self.sigma1)
        self.gamma2 = optical_length(self.rho2, self.sigma2)

    def side_profiles(self, side):
        if side == "left":
            return self.rho1, self.sigma1, self.q1
        if side == "right":
            return self.rho2, self.sigma2, self.q2
        raise ConfigError(f"unknown side {side!r}")

    @property
    def total_optical_length(self):
        return self.gamma1 + self.gamma2

    def to_dict(self):
        return {
            "mass": self.mass,
            "left": {"rho": self.rho1.to_dict(), "sigma": self.sigma1.to_dict(),
                     "q": self.q1.to_dict()},
            "right": {"rho": self.rho2.to_dict(), "sigma": self.sigma2.to_dict(),
                      "q": self.q2.to_dict()},
        }


def config_from_dict(d):
    if not isinstance(d, dict):
        raise ConfigError("configuration must be a dict")
    missing = {"mass", "left", "right"} - set(d)
    if missing:
        raise ConfigError(f"configuration missing keys: {sorted(missing)}")
    profs = {}
    for side in ("left", "right"):
        block = d[side]
        if not isinstance(block, dict):
            raise ConfigError(f"{side} block must be a dict")
        for role in _ROLES:
            if role not in block:
                raise ConfigError(f"{side} block missing {role!r}")
            profs[(side, role)] = build_profile(block[role], side, role)
    return SystemConfig(
        rho1=profs[("left", "rho")], sigma1=profs[("left", "sigma")], q1=profs[("left", "q")],
        rho2=profs[("right", "rho")], sigma2=profs[("right", "sigma")], q2=profs[("right", "q")],
        mass=d["mass"])


def config_from_file(path):
    try:
        with open(path) as fh:
            d = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read configuration {path}: {exc}") from exc
    return config_from_dict(d)


def constant_config(rho1=1.0, sigma1=1.0, q1=0.0, rho2=1.0, sigma2=1.0, q2=0.0, mass=1.0):
    """Convenience builder for piecewise-constant systems."""
    return config_from_dict({
        "mass": mass,
        "left": {"rho": {"kind": "constant", "value": rho1},
                 "sigma": {"kind": "constant", "value": sigma1},
                 "q": {"kind": "constant", "value": q1}},
        "right": {"rho": {"kind": "constant", "value": rho2},
                  "sigma": {"kind": "constant", "value": sigma2},
                  "q": {"kind": "constant", "value": q2}},
    })
