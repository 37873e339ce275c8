"""Kovacic's algorithm for Liouvillian solutions of ``xi'' = r xi``."""

from .cases import (CaseAttempt, Family, KovacicInput, case1, case2, case2_identity, case3,
                    case3_exponent_set, case3_family_exhaustive, necessary_conditions)
from .core import GALOIS_LABELS, KovacicReport, OmegaBranch, quadratic_variant_audit, run

__all__ = ["CaseAttempt", "Family", "KovacicInput", "KovacicReport", "GALOIS_LABELS",
           "OmegaBranch", "case1", "case2", "case2_identity", "case3", "case3_exponent_set",
           "case3_family_exhaustive", "necessary_conditions", "quadratic_variant_audit", "run"]
