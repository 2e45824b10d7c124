"""Independent closed-form oracles used to pin expected values in tests.

Everything here is derived from elementary solutions for piecewise
constant coefficients, without touching the package's solvers.

For unit coefficients (rho = sigma = 1, q = 0) on both sides the side
solutions are sin(s(x+1))/s and sin(s(1-x))/s with s = sqrt(lam), the
Dirichlet values are (k pi)^2 on both sides (all coincidences), the
characteristic function is F = 2 s cot(s), the massless eigenvalues are
(n pi / 2)^2 and the M = 1 eigenvalues interleave the roots of
2 cot(s) = M s with (k pi)^2.
"""

import numpy as np
from scipy.optimize import brentq


def unit_dirichlet(count):
    return (np.arange(1, count + 1) * np.pi) ** 2


def unit_regular_spectrum(count):
    return (np.arange(1, count + 1) * np.pi / 2.0) ** 2


def unit_mass_spectrum(count, mass=1.0):
    vals = []
    k = 1
    eps = 1e-9
    while len(vals) < count:
        lo = (k - 1) * np.pi + eps
        hi = k * np.pi - eps
        s = brentq(lambda t: 2.0 * np.cos(t) / np.sin(t) - mass * t, lo, hi,
                   xtol=1e-14, rtol=8.9e-16)
        vals.append(s * s)
        vals.append((k * np.pi) ** 2)
        k += 1
    return np.array(vals[:count])


def unit_characteristic(lam):
    s = np.sqrt(lam)
    return 2.0 * s * np.cos(s) / np.sin(s)
