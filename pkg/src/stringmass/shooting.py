"""Initial-value solves for the two side problems.

Each side carries the equation -(sigma y')' + q y = lam rho y, integrated
as the first-order system (y, w) with w = sigma y', by classical RK4 on a
fixed uniform grid.  The left solution starts from y(-1)=0, y'(-1)=1 and
marches to the junction; the right solution starts from y(1)=0, y'(1)=-1
and marches down to the junction.  Everything is vectorized over the
spectral parameter so that scans and bracketed root solves stay cheap.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import ConfigError, NonFiniteState, StepBudgetExceeded

DEFAULT_STEPS = 4096
MAX_STEPS = 1 << 17
MIN_STEPS = 16

# IVPs are only trusted above this value; far below, solutions grow like
# exp(sqrt(|lam|) x) and junction values lose all relative accuracy
LAMBDA_FLOOR = -1.0e4


def _check_steps(n_steps):
    if not isinstance(n_steps, (int, np.integer)) or n_steps < MIN_STEPS:
        raise StepBudgetExceeded(f"n_steps must be an integer >= {MIN_STEPS}, got {n_steps}")
    if n_steps > MAX_STEPS:
        raise StepBudgetExceeded(f"n_steps {n_steps} above budget {MAX_STEPS}")


def _stage_data(config, side, n_steps):
    """Coefficient values at RK4 stage abscissas, cached per (side, n_steps)."""
    key = (side, n_steps)
    cache = config._stage_cache
    if key in cache:
        return cache[key]
    rho, sigma, q = config.side_profiles(side)
    if side == "left":
        x_start, x_end = -1.0, 0.0
    elif side == "right":
        x_start, x_end = 1.0, 0.0
    else:
        raise ConfigError(f"unknown side {side!r}")
    nodes = np.linspace(x_start, x_end, n_steps + 1)
    starts, ends = nodes[:-1], nodes[1:]
    mids = 0.5 * (starts + ends)
    data = {
        "h": (x_end - x_start) / n_steps,
        "nodes": nodes,
        "inv_sigma": (1.0 / sigma.value(starts), 1.0 / sigma.value(mids),
                      1.0 / sigma.value(ends)),
        "rho": (rho.value(starts), rho.value(mids), rho.value(ends)),
        "q": (q.value(starts), q.value(mids), q.value(ends)),
        "inv_sigma_nodes": 1.0 / sigma.value(nodes),
        "sigma_start": float(sigma.value(x_start)),
    }
    cache[key] = data
    return data


@njit(cache=True)
def _march(lam, h, is0, ism, ise, r0, rm, re, q0, qm, qe, w_seed):
    """RK4 march of (y, w) for every lambda in the batch; all nodes kept."""
    n = r0.shape[0]
    m = lam.shape[0]
    ys = np.empty((n + 1, m))
    ws = np.empty((n + 1, m))
    h2 = 0.5 * h
    h6 = h / 6.0
    for k in range(m):
        l = lam[k]
        y = 0.0
        w = w_seed
        ys[0, k] = y
        ws[0, k] = w
        for j in range(n):
            c0 = q0[j] - l * r0[j]
            cm = qm[j] - l * rm[j]
            ce = qe[j] - l * re[j]
            k1y = w * is0[j]
            k1w = c0 * y
            y2 = y + h2 * k1y
            w2 = w + h2 * k1w
            k2y = w2 * ism[j]
            k2w = cm * y2
            y3 = y + h2 * k2y
            w3 = w + h2 * k2w
            k3y = w3 * ism[j]
            k3w = cm * y3
            y4 = y + h * k3y
            w4 = w + h * k3w
            k4y = w4 * ise[j]
            k4w = ce * y4
            y = y + h6 * (k1y + 2.0 * (k2y + k3y) + k4y)
            w = w + h6 * (k1w + 2.0 * (k2w + k3w) + k4w)
            ys[j + 1, k] = y
            ws[j + 1, k] = w
    return ys, ws


@njit(cache=True)
def _march_with_derivative(lam, h, is0, ism, ise, r0, rm, re, q0, qm, qe, w_seed):
    """Same march plus the variational pair (forcing -rho y, zero seed)."""
    n = r0.shape[0]
    m = lam.shape[0]
    y0 = np.empty(m)
    w0 = np.empty(m)
    yl0 = np.empty(m)
    wl0 = np.empty(m)
    h2 = 0.5 * h
    h6 = h / 6.0
    for k in range(m):
        l = lam[k]
        y = 0.0
        w = w_seed
        yl = 0.0
        wl = 0.0
        for j in range(n):
            c0 = q0[j] - l * r0[j]
            cm = qm[j] - l * rm[j]
            ce = qe[j] - l * re[j]
            k1y = w * is0[j]
            k1w = c0 * y
            y2 = y + h2 * k1y
            w2 = w + h2 * k1w
            k2y = w2 * ism[j]
            k2w = cm * y2
            y3 = y + h2 * k2y
            w3 = w + h2 * k2w
            k3y = w3 * ism[j]
            k3w = cm * y3
            y4 = y + h * k3y
            w4 = w + h * k3w
            k4y = w4 * ise[j]
            k4w = ce * y4

            k1yl = wl * is0[j]
            k1wl = c0 * yl - r0[j] * y
            yl2 = yl + h2 * k1yl
            wl2 = wl + h2 * k1wl
            k2yl = wl2 * ism[j]
            k2wl = cm * yl2 - rm[j] * y2
            yl3 = yl + h2 * k2yl
            wl3 = wl + h2 * k2wl
            k3yl = wl3 * ism[j]
            k3wl = cm * yl3 - rm[j] * y3
            yl4 = yl + h * k3yl
            wl4 = wl + h * k3wl
            k4yl = wl4 * ise[j]
            k4wl = ce * yl4 - re[j] * y4

            y = y + h6 * (k1y + 2.0 * (k2y + k3y) + k4y)
            w = w + h6 * (k1w + 2.0 * (k2w + k3w) + k4w)
            yl = yl + h6 * (k1yl + 2.0 * (k2yl + k3yl) + k4yl)
            wl = wl + h6 * (k1wl + 2.0 * (k2wl + k3wl) + k4wl)
        y0[k] = y
        w0[k] = w
        yl0[k] = yl
        wl0[k] = wl
    return y0, w0, yl0, wl0


def _integrate(lams, side, config, n_steps, store=False, derivative=False):
    """Vectorized side IVP solve.

    Returns a dict with junction values; with store=True also the full
    node arrays (in march order, junction last).
    """
    _check_steps(n_steps)
    lam = np.atleast_1d(np.asarray(lams, dtype=float))
    if lam.ndim != 1:
        raise ConfigError("lambda batch must be scalar or 1-d")
    if not np.all(np.isfinite(lam)):
        raise NonFiniteState("non-finite spectral parameter")
    if np.any(lam < LAMBDA_FLOOR):
        raise NonFiniteState(f"lambda below trusted floor {LAMBDA_FLOOR:g}")

    st = _stage_data(config, side, n_steps)
    args = (lam, st["h"], *st["inv_sigma"], *st["rho"], *st["q"],
            st["sigma_start"] * (1.0 if side == "left" else -1.0))
    inv_sig_end = st["inv_sigma_nodes"][-1]
    if derivative:
        y, w, yl, wl = _march_with_derivative(*args)
        if not (np.all(np.isfinite(y)) and np.all(np.isfinite(wl))):
            raise NonFiniteState(f"{side} integration produced non-finite values")
        return {"y0": y, "w0": w, "yp0": w * inv_sig_end,
                "yl0": yl, "ylp0": wl * inv_sig_end}
    ys, ws = _march(*args)
    y, w = ys[-1], ws[-1]
    if not (np.all(np.isfinite(y)) and np.all(np.isfinite(w))):
        raise NonFiniteState(f"{side} integration produced non-finite values")
    out = {"y0": y, "w0": w, "yp0": w * inv_sig_end}
    if store:
        out["nodes"] = st["nodes"]
        out["ys"] = ys
        out["yps"] = ws * st["inv_sigma_nodes"][:, None]
    return out


def junction_values(lams, side, config, n_steps=DEFAULT_STEPS, derivative=False):
    """Vectorized junction data (y(0), y'(0)[, d/dlam pair]) for a lambda batch."""
    out = _integrate(lams, side, config, n_steps, derivative=derivative)
    if derivative:
        return out["y0"], out["yp0"], out["yl0"], out["ylp0"]
    return out["y0"], out["yp0"]


@dataclass
class SideSolution:
    """One side IVP solution sampled on its uniform grid (x ascending)."""

    side: str
    lam: float
    n_steps: int
    x: np.ndarray
    y: np.ndarray
    yp: np.ndarray

    @property
    def junction_value(self):
        idx = -1 if self.side == "left" else 0
        return float(self.y[idx])

    @property
    def junction_slope(self):
        idx = -1 if self.side == "left" else 0
        return float(self.yp[idx])


def _shoot(side, lam, config, n_steps):
    out = _integrate(float(lam), side, config, n_steps, store=True)
    x = out["nodes"]
    y = out["ys"][:, 0]
    yp = out["yps"][:, 0]
    if side == "right":
        # march order is 1 -> 0; store ascending in x
        x, y, yp = x[::-1].copy(), y[::-1].copy(), yp[::-1].copy()
    return SideSolution(side=side, lam=float(lam), n_steps=n_steps, x=x, y=y, yp=yp)


def shoot_left(lam, config, n_steps=DEFAULT_STEPS):
    return _shoot("left", lam, config, n_steps)


def shoot_right(lam, config, n_steps=DEFAULT_STEPS):
    return _shoot("right", lam, config, n_steps)


@dataclass
class LambdaDerivative:
    """Junction values of a side solution and its lambda-derivative."""

    side: str
    lam: float
    n_steps: int
    y0: float
    yp0: float
    y0_lam: float
    yp0_lam: float


def shoot_lambda_derivative(lam, side, config, n_steps=DEFAULT_STEPS):
    """Solve the variational system alongside the base solve.

    The lambda-derivative pair obeys the same equation with forcing
    -rho y, starting from zero data.
    """
    out = _integrate(float(lam), side, config, n_steps, derivative=True)
    return LambdaDerivative(
        side=side, lam=float(lam), n_steps=n_steps,
        y0=float(out["y0"][0]), yp0=float(out["yp0"][0]),
        y0_lam=float(out["yl0"][0]), yp0_lam=float(out["ylp0"][0]))


def ode_residual(sol, config):
    """Sup-norm of -(sigma y')' + (q - lam rho) y on the interior nodes,
    with the outer derivative taken by centered differences."""
    rho, sigma, q = config.side_profiles(sol.side)
    sig_yp = sigma.value(sol.x) * sol.yp
    hx = sol.x[1] - sol.x[0]
    dflux = (sig_yp[2:] - sig_yp[:-2]) / (2.0 * hx)
    xin = sol.x[1:-1]
    res = -dflux + (q.value(xin) - sol.lam * rho.value(xin)) * sol.y[1:-1]
    return float(np.max(np.abs(res)))
