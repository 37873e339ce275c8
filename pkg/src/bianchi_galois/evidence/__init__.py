"""Numerical evidence for the analytic claims about the model."""

from .checks import (DEFAULT_THRESHOLDS, REFERENCE_PATH, Resolution, ResidualReport, ave_check,
                     default_path, galois_identities, omega_p_check, printed_log_derivative,
                     printed_log_ratio_square, printed_wronskian, reference_path, residual_check,
                     resolve_constants, second_ve_equivalence, wronskian_check)
from .monodromy import MonodromyReport, default_loops, monodromy_increments, singular_set

__all__ = ["DEFAULT_THRESHOLDS", "REFERENCE_PATH", "Resolution", "ResidualReport", "ave_check",
           "default_path", "galois_identities", "omega_p_check", "printed_log_derivative",
           "printed_log_ratio_square", "printed_wronskian", "reference_path", "residual_check",
           "resolve_constants", "second_ve_equivalence", "wronskian_check", "MonodromyReport",
           "default_loops", "monodromy_increments", "singular_set"]
