"""Exception types raised by the toolkit.

Every failure mode gets its own class so callers (and the CLI) can map
errors to exit codes without string matching.
"""


class StringmassError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(StringmassError):
    """Malformed configuration input (bad keys, wrong kinds, bad shapes)."""


class NonPositiveCoefficient(ConfigError):
    """A density or stiffness profile is not strictly positive, or a
    potential is negative, somewhere on its interval."""


class DomainMismatch(ConfigError):
    """Sample abscissas or polynomial domain do not cover the side interval."""


class QuadratureFailure(StringmassError):
    """Adaptive quadrature did not reach the requested tolerance."""


class NonFiniteState(StringmassError):
    """An initial-value integration produced NaN/inf, or the spectral
    parameter is outside the trusted window."""


class StepBudgetExceeded(StringmassError):
    """Requested step count is above the hard budget."""


class RootCountShortfall(StringmassError):
    """Fewer roots found in a scan window than the asymptotic count predicts."""


class BracketFailure(StringmassError):
    """A root bracket does not show the expected sign change."""


class PoleProximity(StringmassError):
    """Characteristic-function evaluation requested too close to a pole."""


class InterlacingViolation(StringmassError):
    """Computed spectra violate the strict interlacing chain."""


class ThresholdTooLarge(StringmassError):
    """Gap threshold exceeds half the minimal two-step gap."""


class JumpConditionViolation(StringmassError):
    """Assembled mode fails the point-mass jump condition."""


class BranchAmbiguity(StringmassError):
    """Junction values contradict the fused/generic branch tag of a mode."""


class CompatibilityViolation(StringmassError):
    """Initial data violates continuity at the junction."""


class TruncationTooAggressive(StringmassError):
    """Truncated modal expansion drops a non-negligible energy fraction."""


class IllConditioned(StringmassError):
    """Moment-problem Gram matrix is numerically singular at the requested
    regularization."""


class TimeHorizonTooShort(StringmassError):
    """Time horizon does not exceed twice the total optical length."""


class UnderResolvedTrace(StringmassError):
    """Requested time sampling is below the resolution rule for the
    highest retained frequency."""


class CFLViolation(StringmassError):
    """Explicit time step violates the CFL bound."""
