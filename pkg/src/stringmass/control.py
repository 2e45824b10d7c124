"""Boundary control by the moment method.

Driving the outer right end v(1,t) = p(t) turns each modal coefficient
beta_n(t) (projection of the state onto mode n in the weighted inner
product) into a forced oscillator

    beta_n'' + lam_n beta_n = g_n p(t),
    g_n = -sigma2(1) phi'_n(1) / ||phi_n||^2.

With eta_n = beta_n' + i omega_n beta_n the evolution is
eta_n(T) = exp(i omega_n T) [eta_n(0) + g_n int_0^T p(s) exp(-i omega_n s) ds],
so steering the first N modes (and the mass) to rest at time T means
hitting the moments

    int_0^T p(s) exp(-i omega_n s) ds = -eta_n(0) / g_n,   n = +-1..+-N,

with omega_{-n} = -omega_n and conjugate targets.  The minimum-L2 control
is an exponential sum over the same frequencies; its coefficients solve a
Hermitian Gram system with closed-form entries, solved here with a small
Tikhonov shift.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, IllConditioned, TruncationTooAggressive
from .observability import _required_samples

_COND_LIMIT = 1e14


@dataclass
class MomentProblem:
    ns: np.ndarray            # signed indices, -N..-1, 1..N
    omegas: np.ndarray
    targets: np.ndarray       # complex moments
    gains: np.ndarray         # g_n for positive n (order 1..N)
    eta0: np.ndarray          # initial eta for positive n
    norms_h0: np.ndarray
    T: float


def modal_reduction(data, modes, table, config, T, n_control, tail_tol=0.01):
    """Build the moment problem for steering the first n_control modes.

    `data` carries coefficients for all modes in `modes`; the energy the
    truncation drops must stay under tail_tol of the total.
    """
    if n_control < 1 or n_control > len(modes):
        raise ConfigError(f"n_control {n_control} outside 1..{len(modes)}")
    om_all = np.sqrt(data.lam)
    eta_all = om_all * data.f + 1j * om_all * data.e
    energy = np.array([m.norm_h0 for m in modes]) * np.abs(eta_all) ** 2
    total = float(energy.sum())
    tail = float(energy[n_control:].sum())
    if total > 0.0 and tail > tail_tol * total:
        raise TruncationTooAggressive(
            f"truncation at {n_control} drops {tail / total:.2%} of the energy")

    s2_end = float(config.sigma2.value(1.0))
    norms = np.array([m.norm_h0 for m in modes[:n_control]])
    slopes = np.array([m.slope_end for m in modes[:n_control]])
    gains = -s2_end * slopes / norms
    eta0 = eta_all[:n_control]
    targets_pos = -eta0 / gains

    ns = np.array(list(range(-n_control, 0)) + list(range(1, n_control + 1)))
    om_pos = om_all[:n_control]
    omegas = np.concatenate([-om_pos[::-1], om_pos])
    targets = np.concatenate([np.conjugate(targets_pos[::-1]), targets_pos])
    return MomentProblem(ns=ns, omegas=omegas, targets=targets, gains=gains,
                         eta0=eta0, norms_h0=norms, T=float(T))


def _gram(omegas, T):
    d = omegas[None, :] - omegas[:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(d == 0.0, T, (np.exp(1j * d * T) - 1.0) / (1j * d + (d == 0.0)))


@dataclass
class ControlSignal:
    T: float
    t: np.ndarray
    p: np.ndarray             # real samples
    omegas: np.ndarray
    coeffs: np.ndarray
    targets: np.ndarray
    achieved: np.ndarray
    moment_residual: float
    l2_norm: float
    gram_cond: float

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.real(np.exp(1j * np.multiply.outer(t, self.omegas)) @ self.coeffs)
        return float(out) if out.ndim == 0 else out


def solve_min_norm(problem, regularization=None, n_samples=None):
    """Minimum-norm exponential-sum control hitting the moment targets."""
    g = _gram(problem.omegas, problem.T)
    size = g.shape[0]
    if regularization is None:
        regularization = 1e-10 * float(np.real(np.trace(g))) / size
    a = g + regularization * np.eye(size)
    evals = np.linalg.eigvalsh(a)
    cond = float(evals[-1] / evals[0]) if evals[0] > 0.0 else np.inf
    if not np.isfinite(cond) or cond > _COND_LIMIT:
        raise IllConditioned(
            f"Gram condition {cond:.3e} at regularization {regularization:.3e}")
    c = np.linalg.solve(a, problem.targets)
    # exact conjugate symmetry keeps the control real
    c = 0.5 * (c + np.conjugate(c[::-1]))
    achieved = g @ c
    resid = float(np.linalg.norm(achieved - problem.targets))
    l2 = float(np.sqrt(np.real(np.conjugate(c) @ g @ c)))
    need = _required_samples(float(np.max(np.abs(problem.omegas))), problem.T)
    if n_samples is None or n_samples < need:
        n_samples = need
    t = np.linspace(0.0, problem.T, n_samples)
    p = np.real(np.exp(1j * np.outer(t, problem.omegas)) @ c)
    return ControlSignal(T=problem.T, t=t, p=p, omegas=problem.omegas, coeffs=c,
                         targets=problem.targets, achieved=achieved,
                         moment_residual=resid, l2_norm=l2, gram_cond=cond)


def duhamel_report(signal, problem):
    """Residual modal energy at time T implied by the achieved moments.

    Exact in the exponential-sum representation: no time stepping is
    involved, only the closed-form moments.
    """
    n = problem.gains.size
    mom_pos = signal.achieved[n:]
    eta_T = problem.eta0 + problem.gains * mom_pos
    res_energy = float(np.sum(problem.norms_h0 * np.abs(eta_T) ** 2))
    init_energy = float(np.sum(problem.norms_h0 * np.abs(problem.eta0) ** 2))
    return {
        "residual_energy": res_energy,
        "initial_energy": init_energy,
        "relative": res_energy / init_energy if init_energy > 0.0 else 0.0,
        "moment_residual": signal.moment_residual,
        "gram_cond": signal.gram_cond,
        "control_l2": signal.l2_norm,
    }


def cluster_cost(table, slopes_map, n, T, norms_map=None):
    """L2 cost of separating the cluster pair (n, n+1): drive opposite
    unit moments on the pair (and mirrors).  Scales like the inverse gap."""
    om = np.sqrt(table.lam)
    om_pair = np.array([om[n - 1], om[n]])
    omegas = np.concatenate([-om_pair[::-1], om_pair])
    # +1 on the pair's lower frequency, -1 on the upper, mirrored conjugate
    targets = np.array([-1.0, 1.0, 1.0, -1.0], dtype=complex)
    g = _gram(omegas, T)
    reg = 1e-12 * float(np.real(np.trace(g))) / 4.0
    c = np.linalg.solve(g + reg * np.eye(4), targets)
    return float(np.sqrt(np.real(np.conjugate(c) @ g @ c)))
