"""Eigenfunction assembly and modal data.

A mode at lam_n glues the two side solutions at the junction.  Two
branches exist:

- generic (lam_n off both Dirichlet spectra): the mode is
  sqrt(lam_n) * [v(0) u(x) on the left, u(0) v(x) on the right];
- fused (lam_n is a coincidence of both Dirichlet spectra): the junction
  values vanish and the gluing uses slopes instead,
  [sigma2(0) v'(0) u(x) on the left, sigma1(0) u'(0) v(x) on the right].

Either way the end slope phi'(1) never vanishes: it equals
-sqrt(lam_n) u(0) generically and -sigma1(0) u'(0) on the fused branch.

Modal coefficients follow the convention of a two-sided expansion with
omega_{-n} = -omega_n and identical shapes for +-n: position data
expands with coefficients e_n, velocity data with sqrt(lam_n) f_n, and
the travelling amplitudes are a_{+-n} = (e_n -+ i f_n)/2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .errors import (BranchAmbiguity, CompatibilityViolation, ConfigError,
                     JumpConditionViolation)
from .shooting import DEFAULT_STEPS, shoot_left, shoot_right

_JUMP_RTOL = 1e-6


@dataclass
class ModeShape:
    n: int
    lam: float
    branch: str
    x_left: np.ndarray
    phi_left: np.ndarray
    dphi_left: np.ndarray
    x_right: np.ndarray
    phi_right: np.ndarray
    dphi_right: np.ndarray
    phi0: float
    slope_end: float
    norm_w: float
    norm_h0: float

    @property
    def omega(self):
        return float(np.sqrt(self.lam))


def _h0_inner(ul, vr, z, ul2, vr2, z2, xl, xr, config):
    rho1 = config.rho1.value(xl)
    rho2 = config.rho2.value(xr)
    return (np.trapezoid(rho1 * ul * ul2, xl) + np.trapezoid(rho2 * vr * vr2, xr)
            + config.mass * z * z2)


def assemble_mode(n, table, config, n_steps=DEFAULT_STEPS):
    """Build the n-th eigenfunction (n >= 1) from the side solutions."""
    if not 1 <= n <= table.count:
        raise ConfigError(f"mode index {n} outside table range 1..{table.count}")
    lam = float(table.lam[n - 1])
    fused = table.is_fused(n)
    left = shoot_left(lam, config, n_steps)
    right = shoot_right(lam, config, n_steps)
    u0, ux0 = left.junction_value, left.junction_slope
    v0, vx0 = right.junction_value, right.junction_slope
    s1 = float(config.sigma1.value(0.0))
    s2 = float(config.sigma2.value(0.0))
    root = np.sqrt(lam)

    # side solutions have amplitude ~ 1/(1+sqrt(lam)); junction values must
    # be consistent with the branch the spectrum table assigned
    amp = 1.0 / (1.0 + root)
    if fused:
        if abs(u0) > 1e-4 * amp or abs(v0) > 1e-4 * amp:
            raise BranchAmbiguity(
                f"mode {n}: fused branch but junction values {u0:.3e}, {v0:.3e}")
        cl, cr = s2 * vx0, s1 * ux0
        slope_end = -s1 * ux0
    else:
        if abs(u0) < 1e-12 * amp or abs(v0) < 1e-12 * amp:
            raise BranchAmbiguity(
                f"mode {n}: generic branch but junction values {u0:.3e}, {v0:.3e}")
        cl, cr = root * v0, root * u0
        slope_end = -root * u0

    phi_left = cl * left.y
    dphi_left = cl * left.yp
    phi_right = cr * right.y
    dphi_right = cr * right.yp
    phi0 = 0.5 * (phi_left[-1] + phi_right[0])

    jump = s1 * dphi_left[-1] - s2 * dphi_right[0] - lam * config.mass * phi0
    scale = (abs(s1 * dphi_left[-1]) + abs(s2 * dphi_right[0])
             + abs(lam * config.mass * phi0) + 1e-30)
    if abs(jump) > _JUMP_RTOL * scale:
        raise JumpConditionViolation(
            f"mode {n}: jump residual {jump:.3e} against scale {scale:.3e}")

    norm_w = float(np.trapezoid(dphi_left ** 2, left.x) + np.trapezoid(dphi_right ** 2, right.x))
    norm_h0 = float(_h0_inner(phi_left, phi_right, phi0,
                              phi_left, phi_right, phi0, left.x, right.x, config))
    return ModeShape(n=n, lam=lam, branch="fused" if fused else "generic",
                     x_left=left.x, phi_left=phi_left, dphi_left=dphi_left,
                     x_right=right.x, phi_right=phi_right, dphi_right=dphi_right,
                     phi0=float(phi0), slope_end=float(slope_end),
                     norm_w=norm_w, norm_h0=norm_h0)


def compute_modes(table, config, n_max=None, n_steps=DEFAULT_STEPS):
    n_max = table.count if n_max is None else n_max
    return [assemble_mode(n, table, config, n_steps) for n in range(1, n_max + 1)]


def boundary_slopes(modes):
    """phi'(1) keyed by positive mode index (shared by the mirror index)."""
    return {m.n: m.slope_end for m in modes}


def energy_norms(mode, config):
    """(norm_w, norm_h0, rayleigh): the stiffness form over the h0 norm
    recovers the eigenvalue, a cheap self-check."""
    sig1 = config.sigma1.value(mode.x_left)
    sig2 = config.sigma2.value(mode.x_right)
    q1 = config.q1.value(mode.x_left)
    q2 = config.q2.value(mode.x_right)
    stiff = (np.trapezoid(sig1 * mode.dphi_left ** 2 + q1 * mode.phi_left ** 2, mode.x_left)
             + np.trapezoid(sig2 * mode.dphi_right ** 2 + q2 * mode.phi_right ** 2,
                        mode.x_right))
    return mode.norm_w, mode.norm_h0, float(stiff / mode.norm_h0)


def orthogonality_matrix(modes, config):
    """Normalized h0 Gram matrix of the assembled modes."""
    k = len(modes)
    g = np.empty((k, k))
    for i, mi in enumerate(modes):
        for j in range(i, k):
            mj = modes[j]
            g[i, j] = g[j, i] = _h0_inner(
                mi.phi_left, mi.phi_right, mi.phi0,
                mj.phi_left, mj.phi_right, mj.phi0,
                mi.x_left, mi.x_right, config)
    d = 1.0 / np.sqrt(np.diag(g))
    return g * d[:, None] * d[None, :]


@dataclass
class ModalData:
    """Expansion coefficients of (position, velocity) initial data."""

    ns: np.ndarray
    lam: np.ndarray
    e: np.ndarray
    f: np.ndarray

    def a(self, n):
        """Travelling amplitude for a signed index."""
        i = abs(n) - 1
        if n > 0:
            return 0.5 * (self.e[i] - 1j * self.f[i])
        return 0.5 * (self.e[i] + 1j * self.f[i])

    def amplitudes(self):
        out = {}
        for n in self.ns:
            out[int(n)] = self.a(int(n))
            out[-int(n)] = self.a(-int(n))
        return out


def fourier_coefficients(position, velocity, modes, config, rtol=1e-6):
    """Project sampled initial data onto the assembled modes.

    position and velocity are triples (left samples, right samples,
    junction value) on the mode grids.  Position data must be continuous
    at the junction.
    """
    xl, xr = modes[0].x_left, modes[0].x_right
    ul, vr, z = position
    ul = np.asarray(ul, dtype=float)
    vr = np.asarray(vr, dtype=float)
    if ul.shape != xl.shape or vr.shape != xr.shape:
        raise ConfigError("initial data must be sampled on the mode grids")
    scale = float(np.max(np.abs(ul)) + np.max(np.abs(vr)) + abs(z) + 1e-30)
    if abs(ul[-1] - z) > rtol * scale or abs(vr[0] - z) > rtol * scale:
        raise CompatibilityViolation(
            f"position data discontinuous at the junction: {ul[-1]}, {z}, {vr[0]}")
    ul2, vr2, z2 = velocity

    ns = np.array([m.n for m in modes])
    lam = np.array([m.lam for m in modes])
    e = np.empty(len(modes))
    f = np.empty(len(modes))
    for i, m in enumerate(modes):
        pe = _h0_inner(ul, vr, z, m.phi_left, m.phi_right, m.phi0, xl, xr, config)
        pf = _h0_inner(np.asarray(ul2, dtype=float), np.asarray(vr2, dtype=float), z2,
                       m.phi_left, m.phi_right, m.phi0, xl, xr, config)
        e[i] = pe / m.norm_h0
        f[i] = pf / (np.sqrt(m.lam) * m.norm_h0)
    return ModalData(ns=ns, lam=lam, e=e, f=f)


@dataclass
class RieszPair:
    """Divided-difference basis vectors for one cluster pair (n, n+1).

    Stencils map signed mode indices to coefficients in the eigenvector
    basis.  For amplitudes a_n, a_{n+1} the combination
    (at_n + at_{n+1}) q + delta (at_{n+1} - at_n) p, with at = slope * a,
    reproduces a_n, a_{n+1} exactly.
    """

    n: int
    partner: int
    delta: float
    q: dict
    p: dict


def _next_index(n):
    return 1 if n == -1 else n + 1


def riesz_vectors(n, classification, slopes, table):
    if n not in classification.A:
        raise ConfigError(f"index {n} does not start a cluster pair")
    m = _next_index(n)
    om = lambda k: np.sign(k) * float(np.sqrt(table.lam[abs(k) - 1]))
    delta = om(m) - om(n)
    sn = slopes[abs(n)]
    sm = slopes[abs(m)]
    q = {n: 0.5 / sn, m: 0.5 / sm}
    p = {n: -0.5 / (delta * sn), m: 0.5 / (delta * sm)}
    return RieszPair(n=n, partner=m, delta=float(delta), q=q, p=p)


def asymmetric_norm(amplitudes, classification, slopes, table):
    """Squared asymmetric-space norm of a two-sided amplitude family.

    Cluster pairs contribute gap-weighted differences plus the sum;
    isolated indices contribute plainly.  Amplitudes are weighted by the
    end slopes throughout.
    """
    om = np.sqrt(table.lam)
    total = 0.0
    for n in classification.A:
        m = _next_index(n)
        delta = (np.sign(m) * om[abs(m) - 1]) - (np.sign(n) * om[abs(n) - 1])
        at_n = slopes[abs(n)] * amplitudes[n]
        at_m = slopes[abs(m)] * amplitudes[m]
        total += delta ** 2 * (abs(at_n) ** 2 + abs(at_m) ** 2) + abs(at_n + at_m) ** 2
    for n in classification.B:
        total += abs(slopes[abs(n)] * amplitudes[n]) ** 2
    return float(total)


def _optical_coordinate(config, x, side):
    rho, sigma, _ = config.side_profiles(side)
    dens = np.sqrt(rho.value(x) / sigma.value(x))
    tau = cumulative_trapezoid(dens, x, initial=0.0)
    if side == "right":
        # distance to the outer end x = 1
        tau = tau[-1] - tau
    return tau


def verify_mode_asymptotics(modes, config):
    """Fit each side of each mode to its leading high-frequency shape
    C (rho sigma)^(-1/4) sin(sqrt(lam) * optical distance from the outer
    end) and report the relative sup error of the fit."""
    xl, xr = modes[0].x_left, modes[0].x_right
    taul = _optical_coordinate(config, xl, "left")
    taur = _optical_coordinate(config, xr, "right")
    wl = (config.rho1.value(xl) * config.sigma1.value(xl)) ** -0.25
    wr = (config.rho2.value(xr) * config.sigma2.value(xr)) ** -0.25
    report = {}
    for m in modes:
        root = np.sqrt(m.lam)
        errs = []
        for phi, w, tau in ((m.phi_left, wl, taul), (m.phi_right, wr, taur)):
            shape = w * np.sin(root * tau)
            denom = float(shape @ shape)
            c = float(shape @ phi) / denom
            scale = np.max(np.abs(phi)) + 1e-30
            errs.append(float(np.max(np.abs(phi - c * shape)) / scale))
        report[m.n] = tuple(errs)
    return report
