"""Boundary trace of free solutions and Ingham-type sandwich checks.

A free solution with travelling amplitudes a_n (two-sided indices) has
outer-end slope trace

    f(t) = sum_n a_n phi'_{|n|}(1) exp(i omega_n t),

with omega_{-n} = -omega_n.  Over a horizon exceeding twice the total
optical length, the squared L2 norm of f is equivalent to a gap-adapted
quadratic form: cluster pairs enter through their weighted sum and their
gap-weighted difference, isolated indices enter plainly.  The bracketing
constants are not pinned by theory at desk scale, so they are estimated
empirically from randomized draws.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import TimeHorizonTooShort, UnderResolvedTrace
from .gaps import classify_indices, two_sided_indices

# minimum time samples per period of the fastest retained frequency
SAMPLES_PER_PERIOD = 40


@dataclass
class ExponentialSum:
    omegas: np.ndarray
    amps: np.ndarray
    T: float
    t: np.ndarray
    samples: np.ndarray


def _required_samples(omega_max, T):
    return max(256, int(np.ceil(SAMPLES_PER_PERIOD * T * omega_max / (2.0 * np.pi))) + 1)


def _two_sided(data, slopes, table):
    ns = two_sided_indices(table.count)
    om = np.sqrt(table.lam)
    omegas = np.array([np.sign(n) * om[abs(n) - 1] for n in ns])
    amps = np.array([data.a(n) * slopes[abs(n)] for n in ns], dtype=complex)
    return np.array(ns), omegas, amps


def boundary_trace(data, slopes, table, T, n_samples=None):
    """Sampled end-slope trace of the free evolution of `data`."""
    _, omegas, amps = _two_sided(data, slopes, table)
    need = _required_samples(float(np.max(np.abs(omegas))), T)
    if n_samples is None:
        n_samples = need
    elif n_samples < need:
        raise UnderResolvedTrace(f"need at least {need} samples over [0, {T}]")
    t = np.linspace(0.0, T, n_samples)
    samples = (np.exp(1j * np.outer(t, omegas)) @ amps)
    return ExponentialSum(omegas=omegas, amps=amps, T=float(T), t=t, samples=samples)


def trace_l2_sampled(es):
    return float(np.trapezoid(np.abs(es.samples) ** 2, es.t))


def trace_l2_exact(es):
    """Closed-form squared L2 norm of the exponential sum on [0, T]."""
    d = es.omegas[None, :] - es.omegas[:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        kern = np.where(d == 0.0, es.T, (np.exp(1j * d * es.T) - 1.0) / (1j * d + (d == 0.0)))
    val = np.conjugate(es.amps) @ kern @ es.amps
    return float(np.real(val))


def gap_bracket(data, classification, slopes, table):
    """The gap-adapted quadratic form bracketing the trace energy."""
    om = np.sqrt(table.lam)
    total = 0.0
    for n in classification.A:
        m = 1 if n == -1 else n + 1
        delta = (np.sign(m) * om[abs(m) - 1]) - (np.sign(n) * om[abs(n) - 1])
        at_n = slopes[abs(n)] * data.a(n)
        at_m = slopes[abs(m)] * data.a(m)
        total += delta ** 2 * (abs(at_n) ** 2 + abs(at_m) ** 2) + abs(at_n + at_m) ** 2
    for n in classification.B:
        total += abs(slopes[abs(n)] * data.a(n)) ** 2
    return float(total)


def ingham_sandwich(data, slopes, table, T, classification=None):
    """Trace energy against the gap bracket; valid only above the critical
    horizon 2 (gamma1 + gamma2)."""
    horizon = 2.0 * (table.gamma1 + table.gamma2)
    if T <= horizon:
        raise TimeHorizonTooShort(f"T={T:g} <= 2(gamma1+gamma2)={horizon:g}")
    if classification is None:
        classification = classify_indices(table)
    es = boundary_trace(data, slopes, table, T)
    integral = trace_l2_exact(es)
    bracket = gap_bracket(data, classification, slopes, table)
    return {
        "T": float(T),
        "critical_horizon": horizon,
        "density_upper": (table.gamma1 + table.gamma2) / np.pi,
        "integral": integral,
        "bracket": bracket,
        "ratio": integral / bracket if bracket > 0.0 else float("nan"),
    }


def empirical_constants(table, slopes, T, trials=100, seed=0, decay=1.0,
                        classification=None):
    """Ratios integral/bracket over randomized modal draws.

    Draws have real position/velocity coefficients of size ~ n^-decay.
    Returns (ratios, c_min, c_max).
    """
    from .modes import ModalData

    if classification is None:
        classification = classify_indices(table)
    rng = np.random.default_rng(seed)
    ns = np.arange(1, table.count + 1)
    weight = ns.astype(float) ** -decay
    ratios = np.empty(trials)
    for k in range(trials):
        e = rng.standard_normal(table.count) * weight
        f = rng.standard_normal(table.count) * weight
        data = ModalData(ns=ns, lam=table.lam, e=e, f=f)
        rep = ingham_sandwich(data, slopes, table, T, classification)
        ratios[k] = rep["ratio"]
    return ratios, float(ratios.min()), float(ratios.max())
