"""Spectral analysis, observability and boundary control for two strings
coupled by a point mass."""

from .coefficients import (CoefficientProfile, SystemConfig, build_profile,
                           config_from_dict, config_from_file, constant_config,
                           optical_length)

__all__ = [
    "CoefficientProfile", "SystemConfig", "build_profile", "config_from_dict",
    "config_from_file", "constant_config", "optical_length",
]
