"""Gap classification of the frequency sequence.

Frequencies are two-sided: omega_n = sqrt(lam_n) for n >= 1 and
omega_{-n} = -omega_n.  Indices split into clustered pairs and isolated
points relative to a gap threshold delta':

- n is in A when the gap to the next frequency is below delta' while the
  gap from the previous one is not (n starts a cluster pair (n, n+1));
- n is in B when both neighbouring gaps are at least delta'.

Every index is then in A, A+1 or B because two consecutive gaps can
never both be small (two-step gaps are bounded below).  Isolated indices
split further: n in B+ when the preceding Dirichlet value mu_{n-1}
belongs to the right string, n in B- when it belongs to the left one.
Lambda collects indices whose eigenvalue is a coincidence of both
Dirichlet spectra.

The extreme indices +-count see an infinite outer gap and always land in
B; keep the table a little longer than the index range of interest.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ThresholdTooLarge


def two_sided_indices(count):
    return list(range(-count, 0)) + list(range(1, count + 1))


def two_sided_omegas(table):
    s = table.sqrt_lam
    return np.concatenate([-s[::-1], s])


@dataclass
class GapClassification:
    count: int
    delta_prime: float
    A: tuple
    B: tuple
    Bplus: tuple
    Bminus: tuple
    Lambda: tuple
    LambdaStar: tuple

    def cluster_pairs(self):
        """Pairs (n, n+1) for n in A, in index order."""
        return [(n, n + 1) for n in self.A]


def _min_two_step(omegas):
    return float(np.min(omegas[2:] - omegas[:-2]))


def default_threshold(table):
    """Slightly below half the minimal two-step frequency gap."""
    return 0.45 * _min_two_step(two_sided_omegas(table))


def classify_indices(table, delta_prime=None):
    idx = two_sided_indices(table.count)
    om = two_sided_omegas(table)
    min2 = _min_two_step(om)
    if delta_prime is None:
        delta_prime = default_threshold(table)
    if delta_prime >= 0.5 * min2:
        raise ThresholdTooLarge(
            f"delta'={delta_prime:g} >= half the minimal two-step gap {0.5 * min2:g}")
    if delta_prime <= 0.0:
        raise ThresholdTooLarge("delta' must be positive")

    big = np.inf
    gaps = np.diff(om)
    left = np.concatenate([[big], gaps])
    right = np.concatenate([gaps, [big]])
    a_set, b_set = [], []
    for i, n in enumerate(idx):
        if right[i] < delta_prime <= left[i]:
            a_set.append(n)
        elif left[i] >= delta_prime and right[i] >= delta_prime:
            b_set.append(n)

    lam_pos = tuple(n for n in range(1, table.count + 1) if table.fused[n - 1])
    lam_star = tuple(sorted([-n for n in lam_pos] + list(lam_pos)))

    bplus, bminus = [], []
    for n in b_set:
        m = abs(n)
        if m == 1:
            # no preceding Dirichlet value; the first mode behaves like an
            # isolated right-side index
            bplus.append(n)
        else:
            tag = table.mu_tags[m - 2]
            (bplus if tag in ("right", "both") else bminus).append(n)

    return GapClassification(
        count=table.count, delta_prime=float(delta_prime),
        A=tuple(a_set), B=tuple(b_set),
        Bplus=tuple(bplus), Bminus=tuple(bminus),
        Lambda=lam_pos, LambdaStar=lam_star)


def counting_density(table, r):
    """Largest number of frequencies in any window of length r, and the
    implied upper density estimate count/r."""
    om = two_sided_omegas(table)
    best = 0
    j = 0
    for i in range(om.size):
        if j < i:
            j = i
        while j + 1 < om.size and om[j + 1] <= om[i] + r:
            j += 1
        best = max(best, j - i + 1)
    return best, best / float(r)


def verify_gap_asymptotics(table, tau=None):
    """Desk-scale checks of the gap structure. Returns a report dict.

    - cluster pairs shrink like 1/n: n * delta_n stays comparable to its
      median over A;
    - two-step gaps stay bounded below;
    - sqrt(lam_n) follows the counting slope n pi / (gamma1 + gamma2);
    - on indices whose preceding Dirichlet gap exceeds tau, the distance
      sqrt(lam_n) - sqrt(mu_{n-1}) decays like 1/n.
    """
    cls = classify_indices(table)
    s = table.sqrt_lam
    gaps = table.gaps
    gamma = table.gamma1 + table.gamma2

    a_pos = [n for n in cls.A if 0 < n < table.count]
    n_delta = np.array([n * gaps[n - 1] for n in a_pos])
    min_two_step = _min_two_step(two_sided_omegas(table))

    n_arr = np.arange(1, table.count + 1)
    weyl_dev = np.abs(s * gamma / (n_arr * np.pi) - 1.0)

    mu = table.mu
    mu_gaps = np.diff(mu)
    if tau is None:
        tau = float(np.median(mu_gaps))
    pole_chase = []
    for n in range(2, table.count + 1):
        if mu[n - 1] - mu[n - 2] >= tau and not table.fused[n - 1]:
            pole_chase.append(n * (s[n - 1] - np.sqrt(mu[n - 2])))
    pole_chase = np.array(pole_chase)

    return {
        "delta_prime": cls.delta_prime,
        "min_two_step": min_two_step,
        "a_indices": a_pos,
        "n_delta_max": float(n_delta.max()) if n_delta.size else float("nan"),
        "n_delta_median": float(np.median(n_delta)) if n_delta.size else float("nan"),
        "weyl_dev": weyl_dev,
        "weyl_dev_tail_max": float(weyl_dev[2 * table.count // 3:].max()),
        "tau": tau,
        "pole_chase_max": float(pole_chase.max()) if pole_chase.size else float("nan"),
    }
