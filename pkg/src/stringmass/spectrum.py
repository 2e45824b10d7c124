"""Spectral families of the coupled system.

Three families are computed per configuration:

- the two Dirichlet side spectra (junction value of a side solution
  vanishes), merged into one tagged sequence mu_1 <= mu_2 <= ...;
  coincidences of the two side spectra occupy two consecutive slots;
- the zeros lambda'_n of the characteristic function F (the massless
  coupled problem);
- the eigenvalues lambda_n of the full problem, solving F(lam) = M lam.

F has simple poles exactly at the merged Dirichlet values and decreases
strictly on each interval between consecutive distinct poles, which makes
bracketed root solving safe.  All solves run vectorized over brackets.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (BracketFailure, InterlacingViolation, PoleProximity,
                     RootCountShortfall)
from .shooting import DEFAULT_STEPS, junction_values

# relative tolerance under which a left and a right Dirichlet value are
# treated as one coincidence
FUSION_RTOL = 1e-7

_ROOT_RTOL = 1e-13
_BRACKET_LO = -1.0e3


@dataclass
class CharacteristicValue:
    """Junction data and characteristic-function value at one lam."""

    lam: float
    u0: float
    ux0: float
    v0: float
    vx0: float
    f_left: float
    f_right: float

    @property
    def value(self):
        return self.f_left - self.f_right


def _junction_batch(lams, config, n_steps):
    u0, ux0 = junction_values(lams, "left", config, n_steps)
    v0, vx0 = junction_values(lams, "right", config, n_steps)
    return u0, ux0, v0, vx0


def _char_batch(lams, config, n_steps):
    u0, ux0, v0, vx0 = _junction_batch(lams, config, n_steps)
    s1 = float(config.sigma1.value(0.0))
    s2 = float(config.sigma2.value(0.0))
    return s1 * ux0 / u0 - s2 * vx0 / v0


def eval_characteristic(lam, config, n_steps=DEFAULT_STEPS):
    """Scalar characteristic evaluation with a pole-proximity guard."""
    lam = float(lam)
    u0, ux0, v0, vx0 = (float(a[0]) for a in
                        _junction_batch(np.array([lam]), config, n_steps))
    # side solutions have amplitude ~ 1/(1+sqrt(lam)); junction values far
    # smaller than that mean lam sits essentially on a Dirichlet pole
    amp = 1.0 / (1.0 + np.sqrt(max(lam, 0.0)))
    if abs(u0) < 1e-10 * amp or abs(v0) < 1e-10 * amp:
        raise PoleProximity(f"lam={lam!r} is too close to a Dirichlet value")
    s1 = float(config.sigma1.value(0.0))
    s2 = float(config.sigma2.value(0.0))
    return CharacteristicValue(lam=lam, u0=u0, ux0=ux0, v0=v0, vx0=vx0,
                               f_left=s1 * ux0 / u0, f_right=s2 * vx0 / v0)


def _illinois(f, a, b, fa, fb, rtol=_ROOT_RTOL, maxit=90):
    """Vectorized Illinois (modified regula falsi) on bracket arrays."""
    a = a.astype(float).copy()
    b = b.astype(float).copy()
    fa = fa.astype(float).copy()
    fb = fb.astype(float).copy()
    if np.any(fa * fb > 0.0):
        k = int(np.argmax(fa * fb > 0.0))
        raise BracketFailure(
            f"no sign change on bracket [{a[k]!r}, {b[k]!r}]: f = {fa[k]!r}, {fb[k]!r}")
    last = np.zeros(a.shape, dtype=int)  # +1: kept a last time, -1: kept b
    for _ in range(maxit):
        tol = rtol * (1.0 + np.abs(a) + np.abs(b))
        if np.all(np.abs(b - a) <= tol):
            break
        denom = fb - fa
        m = np.where(denom != 0.0, (a * fb - b * fa) / np.where(denom == 0.0, 1.0, denom),
                     0.5 * (a + b))
        # keep strictly inside the bracket
        lo = a + 0.01 * tol
        hi = b - 0.01 * tol
        m = np.minimum(np.maximum(m, np.minimum(lo, hi)), np.maximum(lo, hi))
        fm = f(m)
        left_side = fa * fm < 0.0
        # Illinois: halve the value kept at the stagnant endpoint
        fa = np.where(left_side & (last == -1), 0.5 * fa, fa)
        fb = np.where((~left_side) & (last == +1), 0.5 * fb, fb)
        a = np.where(left_side, a, m)
        fa = np.where(left_side, fa, fm)
        b = np.where(left_side, m, b)
        fb = np.where(left_side, fm, fb)
        last = np.where(left_side, -1, +1)
    return np.where(np.abs(fa) <= np.abs(fb), a, b)


def dirichlet_eigenvalues(side, count, config, n_steps=DEFAULT_STEPS):
    """First `count` values lam with vanishing junction value on one side.

    In s = sqrt(lam) the roots sit near multiples of pi over the side
    optical length, so a scan step well below that spacing isolates them.
    """
    if count < 1:
        return np.empty(0)
    gamma = config.gamma1 if side == "left" else config.gamma2
    spacing = np.pi / gamma

    def f(s):
        return junction_values(s * s, side, config, n_steps)[0]

    per_spacing = 8
    for _ in range(3):
        s_max = (count + 2) * spacing
        grid = np.linspace(spacing * 1e-3, s_max, int(per_spacing * (count + 2)) + 1)
        vals = f(grid)
        sign_change = np.nonzero(vals[:-1] * vals[1:] < 0.0)[0]
        if sign_change.size >= count:
            break
        per_spacing *= 4
    else:
        raise RootCountShortfall(
            f"{side} Dirichlet scan found {sign_change.size} roots, wanted {count}")
    idx = sign_change[:count]
    roots_s = _illinois(f, grid[idx], grid[idx + 1], vals[idx], vals[idx + 1])
    return roots_s ** 2


def merge_spectra(left_values, right_values, rtol=FUSION_RTOL):
    """Merge the two side spectra into tagged slots.

    Returns (values, tags) with tags in {'left','right','both'}.  A
    coincidence occupies two consecutive slots, both tagged 'both' and
    carrying the averaged value.
    """
    left_values = np.sort(np.asarray(left_values, dtype=float))
    right_values = np.sort(np.asarray(right_values, dtype=float))
    vals, tags = [], []
    i = j = 0
    while i < left_values.size or j < right_values.size:
        if i >= left_values.size:
            vals.append(right_values[j]); tags.append("right"); j += 1
        elif j >= right_values.size:
            vals.append(left_values[i]); tags.append("left"); i += 1
        else:
            lv, rv = left_values[i], right_values[j]
            if abs(lv - rv) <= rtol * (1.0 + abs(lv)):
                m = 0.5 * (lv + rv)
                vals.extend([m, m]); tags.extend(["both", "both"])
                i += 1; j += 1
            elif lv < rv:
                vals.append(lv); tags.append("left"); i += 1
            else:
                vals.append(rv); tags.append("right"); j += 1
    return np.array(vals), tags


def _char_roots(count, config, mu, mass, n_steps):
    """Roots of F(lam) - mass*lam = 0 interlaced with the tagged slots.

    One root lives below mu_1 and one in each gap between consecutive
    distinct slots; a fused pair of slots contributes the slot value itself.
    """
    def g(lams):
        return _char_batch(lams, config, n_steps) - mass * lams

    # collect solve intervals and remember which output position they feed
    positions, left_ends, right_ends = [0], [_BRACKET_LO], [mu[0]]
    out = np.empty(count)
    n = 1
    while n < count:
        if abs(mu[n] - mu[n - 1]) <= FUSION_RTOL * (1.0 + abs(mu[n])):
            out[n] = mu[n - 1]
            n += 1
            continue
        positions.append(n)
        left_ends.append(mu[n - 1])
        right_ends.append(mu[n])
        n += 1
    positions = np.array(positions, dtype=int)
    lo_raw = np.array(left_ends)
    hi_raw = np.array(right_ends)
    width = hi_raw - lo_raw
    # guards keep evaluations off the poles; F -> +inf at the left pole and
    # -inf at the right one, so shrink any guard that lands with wrong sign
    ga = 1e-6 * width
    gb = 1e-6 * width
    a = lo_raw + ga
    b = hi_raw - gb
    fa = g(a)
    fb = g(b)
    for _ in range(8):
        bad_a = fa <= 0.0
        bad_b = fb >= 0.0
        if not (np.any(bad_a) or np.any(bad_b)):
            break
        ga = np.where(bad_a, ga * 1e-2, ga)
        gb = np.where(bad_b, gb * 1e-2, gb)
        a = lo_raw + ga
        b = hi_raw - gb
        fa = np.where(bad_a, g(a), fa)
        fb = np.where(bad_b, g(b), fb)
    else:
        raise BracketFailure("could not establish sign change against the poles")
    roots = _illinois(g, a, b, fa, fb)
    out[positions] = roots
    return out


def regular_eigenvalues(count, config, mu=None, n_steps=DEFAULT_STEPS):
    """Zeros of F: the eigenvalues of the massless coupled problem."""
    if mu is None:
        mu, _ = merge_spectra(dirichlet_eigenvalues("left", count, config, n_steps),
                              dirichlet_eigenvalues("right", count, config, n_steps))
        mu = mu[:count]
    return _char_roots(count, config, mu, 0.0, n_steps)


def mass_eigenvalues(count, config, mu=None, n_steps=DEFAULT_STEPS):
    """Eigenvalues of the full problem: F(lam) = M lam."""
    if mu is None:
        mu, _ = merge_spectra(dirichlet_eigenvalues("left", count, config, n_steps),
                              dirichlet_eigenvalues("right", count, config, n_steps))
        mu = mu[:count]
    return _char_roots(count, config, mu, config.mass, n_steps)


@dataclass
class SpectrumTable:
    """Aligned spectral families mu, lambda', lambda for one configuration."""

    count: int
    mu: np.ndarray
    mu_tags: list
    lambda_prime: np.ndarray
    lam: np.ndarray
    gamma1: float
    gamma2: float
    mass: float
    n_steps: int
    fused: np.ndarray = field(init=False)

    def __post_init__(self):
        # fused[n-1] marks lambda_n sitting on a coincidence of both
        # Dirichlet spectra
        tol = FUSION_RTOL * (1.0 + np.abs(self.lam))
        hit = np.zeros(self.count, dtype=bool)
        both = np.array([t == "both" for t in self.mu_tags])
        for i in range(self.count):
            hit[i] = bool(np.any(both & (np.abs(self.mu - self.lam[i]) <= tol[i])))
        self.fused = hit

    @property
    def sqrt_lam(self):
        return np.sqrt(self.lam)

    @property
    def gaps(self):
        s = self.sqrt_lam
        return s[1:] - s[:-1]

    def is_fused(self, n):
        return bool(self.fused[n - 1])


def _verify_interlacing(mu, lambda_prime, lam):
    slack = lambda v: 1e-9 * (1.0 + abs(v))
    if not (lam[0] < lambda_prime[0] - slack(lam[0])
            and lambda_prime[0] < mu[0] - slack(mu[0])):
        raise InterlacingViolation(
            f"head violates lam_1 < lam'_1 < mu_1: {lam[0]}, {lambda_prime[0]}, {mu[0]}")
    for n in range(1, mu.size):
        if abs(mu[n] - mu[n - 1]) <= FUSION_RTOL * (1.0 + abs(mu[n])):
            if (abs(lam[n] - mu[n - 1]) > slack(mu[n - 1])
                    or abs(lambda_prime[n] - mu[n - 1]) > slack(mu[n - 1])):
                raise InterlacingViolation(
                    f"fused slot {n + 1} not pinned to mu: {lam[n]}, {mu[n - 1]}")
        else:
            ok = (mu[n - 1] < lam[n] - slack(lam[n])
                  and lam[n] < lambda_prime[n] - slack(lambda_prime[n])
                  and lambda_prime[n] < mu[n] - slack(mu[n]))
            if not ok:
                raise InterlacingViolation(
                    f"slot {n + 1}: expected {mu[n - 1]} < {lam[n]} < "
                    f"{lambda_prime[n]} < {mu[n]}")


def build_spectrum_table(count, config, n_steps=DEFAULT_STEPS):
    """Compute all three families, check interlacing, return the table."""
    left = dirichlet_eigenvalues("left", count, config, n_steps)
    right = dirichlet_eigenvalues("right", count, config, n_steps)
    mu, tags = merge_spectra(left, right)
    mu, tags = mu[:count], tags[:count]
    lp = _char_roots(count, config, mu, 0.0, n_steps)
    lm = _char_roots(count, config, mu, config.mass, n_steps)
    _verify_interlacing(mu, lp, lm)
    return SpectrumTable(count=count, mu=mu, mu_tags=list(tags), lambda_prime=lp,
                         lam=lm, gamma1=config.gamma1, gamma2=config.gamma2,
                         mass=config.mass, n_steps=n_steps)
