"""Hermite–Hadamard type bounds for geometrically convex functions.

Closed-form bounds are checked against an independent adaptive quadrature,
over a catalog of test functions with exact derivatives.
"""

from .bounds import (
    BoundReport,
    best_bound,
    bound_thm1,
    bound_thm2,
    bound_thm3,
    bound_thm4,
    bound_thm5,
    classic_hh_check,
    corollary_equal_endpoints,
    evaluate_bound,
    midpoint_lhs,
    ostrowski_lhs,
    trapezoid_lhs,
)
from .catalog import FunctionTriple, catalog_list, make_family
from .errors import (
    ConfigError,
    ConvergenceError,
    DomainError,
    EvaluationError,
    PreconditionError,
)
from .hypotheses import CheckReport, check_hypotheses
from .identities import EvalConfig, IdentityReport, lemma1_check, lemma2_check
from .kernels import HolderPair, kernel_k2, kernel_k3, log_mean, prefactor
from .quadrature import QuadResult, integrate

__version__ = "0.1.0"
