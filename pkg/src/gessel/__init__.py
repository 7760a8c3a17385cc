"""Gessel walks in the quarter plane: exact counts, the elliptic uniformization
of the kernel curve, zeta-function generating functions and hypergeometric
identities, together with a verification suite.
"""

from .kernel_curve import GESSEL_GROUP, kernel_eval, orbit, orbit_sum
from .reports import CriterionResult, VerificationReport
from .uniformization import compute_periods, make_context
from .walk_counting import GESSEL, SIMPLE, StepSet, count_table, gessel_excursions_closed_form
from .zeta_gf import make_ry_context, q00_zeta, ry_zeta

__version__ = "0.1.0"

__all__ = [
    "GESSEL",
    "SIMPLE",
    "StepSet",
    "count_table",
    "gessel_excursions_closed_form",
    "kernel_eval",
    "orbit",
    "orbit_sum",
    "GESSEL_GROUP",
    "compute_periods",
    "make_context",
    "q00_zeta",
    "make_ry_context",
    "ry_zeta",
    "VerificationReport",
    "CriterionResult",
]
