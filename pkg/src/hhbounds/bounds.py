"""Left-hand deviations and right-hand bounds for each inequality.

Every ``bound_*`` function returns a :class:`BoundReport` pairing the
quadrature-computed deviation with the closed-form bound. Theorem labels:

====  ===================  =========================  ==================
T1    |f(x) - mean|        Hölder, first derivative   ``(p+1)^(-1/p)``
T2    midpoint deviation   Hölder, second derivative  ``(2p+1)^(-1/p)``
T3    midpoint deviation   power mean, ``f''``        ``(1/3)^(1-1/q)``
T4    trapezoid deviation  Hölder, first derivative   ``(p+1)^(-1/p)``
T5    trapezoid deviation  power mean, ``f'``         ``(1/2)^(1-1/q)``
C1    midpoint deviation   T2 with equal endpoints
C3    trapezoid deviation  T4 with equal endpoints
====  ===================  =========================  ==================

Hypothesis failures never abort an evaluation; they are recorded in
``BoundReport.hyp`` so that negative controls can be swept like anything else.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import FrozenSet, Optional, Sequence

import numpy as np

from .errors import DomainError, PreconditionError
from .hypotheses import CheckReport, check_hypotheses
from .identities import EvalConfig, _scalar, integral_mean, segment_integral
from .kernels import (
    HolderPair,
    kernel_k2_from_log,
    kernel_k3_from_log,
    log_mean,
    prefactor,
)
from .quadrature import DEFAULT_TOL

__all__ = [
    "BoundReport",
    "THEOREMS",
    "LHS_KIND",
    "midpoint_lhs",
    "trapezoid_lhs",
    "ostrowski_lhs",
    "bound_thm1",
    "bound_thm2",
    "bound_thm3",
    "bound_thm4",
    "bound_thm5",
    "corollary_equal_endpoints",
    "best_bound",
    "classic_hh_check",
    "absolute_integrand_bound",
    "evaluate_bound",
    "is_violation",
]

THEOREMS = ("T1", "T2", "T3", "T4", "T5", "C1", "C3")
LHS_KIND = {
    "T1": "ostrowski",
    "T2": "midpoint",
    "T3": "midpoint",
    "C1": "midpoint",
    "T4": "trapezoid",
    "T5": "trapezoid",
    "C3": "trapezoid",
}
ORDER = {"T1": "first", "T2": "second", "T3": "second", "T4": "first",
         "T5": "first", "C1": "second", "C3": "first"}

ZERO_MAGNITUDE = 1e-300
VIOLATION_RTOL = 1e-12
_ROUNDOFF = 64 * np.finfo(float).eps
_EQUAL_ENDPOINT_RTOL = 1e-9


def is_violation(lhs: float, rhs: float) -> bool:
    """``rhs - lhs < -1e-12 * max(1, rhs)``."""
    if math.isnan(lhs) or math.isnan(rhs):
        return False
    return rhs - lhs < -VIOLATION_RTOL * max(1.0, rhs)


@dataclass(frozen=True)
class BoundReport:
    theorem: str
    variant: str
    lhs: float
    rhs: float
    cfg: EvalConfig
    hyp: Optional[CheckReport] = None
    flags: FrozenSet[str] = field(default_factory=frozenset)

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    @property
    def ratio(self) -> float:
        if self.rhs == 0:
            return 0.0 if self.lhs == 0 else math.inf
        if math.isinf(self.rhs):
            return 0.0
        return self.lhs / self.rhs

    @property
    def lhs_kind(self) -> str:
        return LHS_KIND[self.theorem]

    @property
    def violated(self) -> bool:
        return is_violation(self.lhs, self.rhs)

    @property
    def hyp_ok(self) -> Optional[bool]:
        return None if self.hyp is None else self.hyp.passed


# -- left-hand sides ---------------------------------------------------------


def _snap(value, *terms):
    # differences below the rounding noise of their own terms are reported as 0
    noise = _ROUNDOFF * sum(abs(t) for t in terms)
    return 0.0 if abs(value) <= noise else abs(value)


def midpoint_lhs(triple, cfg: EvalConfig, tol: float = DEFAULT_TOL) -> float:
    """``|mean(f) - f(x) + (x - (a+b)/2) f'(x)|``."""
    mean = integral_mean(triple.f, cfg.a, cfg.b, tol)
    fx = _scalar(triple.f, cfg.x)
    tangent = (cfg.x - cfg.midpoint) * _scalar(triple.f1, cfg.x)
    return _snap(mean - fx + tangent, mean, fx, tangent)


def trapezoid_lhs(triple, cfg: EvalConfig, tol: float = DEFAULT_TOL) -> float:
    """``|((b-x) f(b) + (x-a) f(a))/(b-a) - mean(f)|``."""
    a, b, x = cfg.a, cfg.b, cfg.x
    mean = integral_mean(triple.f, a, b, tol)
    wb = (b - x) * _scalar(triple.f, b) / cfg.width
    wa = (x - a) * _scalar(triple.f, a) / cfg.width
    return _snap(wb + wa - mean, wb, wa, mean)


def ostrowski_lhs(triple, cfg: EvalConfig, tol: float = DEFAULT_TOL) -> float:
    """``|f(x) - mean(f)|``."""
    mean = integral_mean(triple.f, cfg.a, cfg.b, tol)
    fx = _scalar(triple.f, cfg.x)
    return _snap(fx - mean, fx, mean)


_LHS = {"ostrowski": ostrowski_lhs, "midpoint": midpoint_lhs, "trapezoid": trapezoid_lhs}


# -- helpers -----------------------------------------------------------------


def _magnitude(g, x) -> float:
    value = abs(_scalar(g, x))
    return 0.0 if value < ZERO_MAGNITUDE else value


def _log_ratio(num: float, den: float) -> float:
    """``ln(num/den)`` for non-negative magnitudes, allowing 0 and inf."""
    if num == 0:
        return -math.inf
    if den == 0:
        return math.inf
    ratio = num / den
    if ratio == 0 or math.isinf(ratio):
        return math.log(num) - math.log(den)
    return math.log(ratio)


def _log_mean_root(u: float, v: float, q: float) -> float:
    """``L(u^q, v^q)^(1/q)``, rescaled by ``max(u, v)`` so the powers cannot overflow."""
    m = max(u, v)
    if m == 0:
        return 0.0
    return m * log_mean((u / m) ** q, (v / m) ** q) ** (1.0 / q)


def _exps(cfg: EvalConfig, mode: Optional[str], theorem: str) -> HolderPair:
    exps = cfg.exps
    if exps is None:
        raise PreconditionError(f"{theorem} needs exponents in the configuration")
    if mode == "holder" and exps.mode != "holder":
        raise PreconditionError(f"{theorem} needs a Hölder pair (p > 1), got q={exps.q!r} alone")
    return exps


def _terms(cfg: EvalConfig, power: int):
    """Yield ``(endpoint, weight)`` for the non-vanishing terms."""
    a, b, x = cfg.a, cfg.b, cfg.x
    denom = 2 * cfg.width if power == 3 else cfg.width
    if x > a:
        yield a, (x - a) ** power / denom
    if x < b:
        yield b, (b - x) ** power / denom


def _base_flags(cfg: EvalConfig):
    flags = set()
    if cfg.x == cfg.a or cfg.x == cfg.b:
        flags.add("x_at_endpoint")
    return flags


def _note_pair(flags, gx, ge):
    if gx == 0 or ge == 0:
        flags.add("zero_derivative")
    if gx == 0 or ge == 0 or gx == ge:
        flags.add("degenerate_k")


def _hypothesis(triple, cfg, q, order, hyp):
    if hyp is not None:
        return hyp
    return check_hypotheses(triple, cfg.a, cfg.b, q, order)


def _report(theorem, variant, triple, cfg, rhs, flags, tol, hyp, q):
    lhs = _LHS[LHS_KIND[theorem]](triple, cfg, tol)
    hyp = _hypothesis(triple, cfg, q, ORDER[theorem], hyp)
    return BoundReport(theorem, variant, lhs, rhs, cfg, hyp, frozenset(flags))


# -- Hölder bounds (logarithmic mean) -----------------------------------------


def _holder_rhs(deriv, cfg, exps, kind, power):
    flags = _base_flags(cfg)
    gx = _magnitude(deriv, cfg.x)
    total = 0.0
    for end, weight in _terms(cfg, power):
        ge = _magnitude(deriv, end)
        _note_pair(flags, gx, ge)
        total += weight * _log_mean_root(gx, ge, exps.q)
    return prefactor(kind, exps) * total, flags


def bound_thm2(triple, cfg: EvalConfig, tol: float = DEFAULT_TOL,
               hyp: Optional[CheckReport] = None) -> BoundReport:
    """Midpoint deviation against ``(2p+1)^(-1/p)`` times log-mean terms in ``|f''|^q``."""
    cfg.require_positive()
    exps = _exps(cfg, "holder", "T2")
    rhs, flags = _holder_rhs(triple.f2, cfg, exps, "holder_t2", 3)
    return _report("T2", "standard", triple, cfg, rhs, flags, tol, hyp, exps.q)


def bound_thm4(triple, cfg: EvalConfig, tol: float = DEFAULT_TOL,
               hyp: Optional[CheckReport] = None) -> BoundReport:
    """Trapezoid deviation against ``(p+1)^(-1/p)`` times log-mean terms in ``|f'|^q``."""
    cfg.require_positive()
    exps = _exps(cfg, "holder", "T4")
    rhs, flags = _holder_rhs(triple.f1, cfg, exps, "holder_t1t4", 2)
    return _report("T4", "standard", triple, cfg, rhs, flags, tol, hyp, exps.q)


def bound_thm1(triple, cfg: EvalConfig, tol: float = DEFAULT_TOL,
               hyp: Optional[CheckReport] = None) -> BoundReport:
    """``|f(x) - mean(f)|`` against the same right-hand side as :func:`bound_thm4`."""
    cfg.require_positive()
    exps = _exps(cfg, "holder", "T1")
    rhs, flags = _holder_rhs(triple.f1, cfg, exps, "holder_t1t4", 2)
    return _report("T1", "standard", triple, cfg, rhs, flags, tol, hyp, exps.q)


# -- power-mean bounds (kernels) ----------------------------------------------


def _k3_printed(lk: float) -> float:
    # k/ln k - 2k/(ln k)^2 + 2k/(ln k)^3, exactly as printed; diverges at k = 1
    if lk == -math.inf:
        return 0.0
    if lk == 0 or lk > 700:
        return math.inf
    k = math.exp(lk)
    return k / lk - 2.0 * k / lk**2 + 2.0 * k / lk**3


def _kernel_rhs(deriv, cfg, q, kernel, power, multiply_endpoint=True, flags=None):
    flags = _base_flags(cfg) if flags is None else flags
    gx = _magnitude(deriv, cfg.x)
    total = 0.0
    for end, weight in _terms(cfg, power):
        ge = _magnitude(deriv, end)
        _note_pair(flags, gx, ge)
        value = kernel(_log_ratio(gx, ge) * q)
        if value < 0:
            # the printed kernel goes negative for k < 1; its magnitude is used
            flags.add("negative_kernel")
            value = -value
        if multiply_endpoint:
            if ge == 0:
                continue
            total += weight * ge * value ** (1.0 / q)
        else:
            total += weight * value ** (1.0 / q)
    return total, flags


def bound_thm3(triple, cfg: EvalConfig, tol: float = DEFAULT_TOL,
               variant: str = "standard", hyp: Optional[CheckReport] = None) -> BoundReport:
    """Midpoint deviation against the power-mean bound with kernel ``∫₀¹ t² kᵗ dt``.

    ``standard`` keeps the endpoint factor ``|f''(a)|`` (resp. ``|f''(b)|``)
    and the exact kernel. ``paper_literal`` drops the endpoint factors and
    uses ``2k/(ln k)³`` as the last kernel term; its right-hand side is
    therefore invariant under ``f -> c f`` and fails for large ``c``.
    """
    if variant not in ("standard", "paper_literal"):
        raise DomainError(f"unknown T3 variant {variant!r}")
    cfg.require_positive()
    exps = _exps(cfg, None, "T3")
    q = exps.q
    if variant == "standard":
        total, flags = _kernel_rhs(triple.f2, cfg, q, kernel_k3_from_log, 3)
    else:
        total, flags = _kernel_rhs(triple.f2, cfg, q, _k3_printed, 3, multiply_endpoint=False)
    rhs = prefactor("pmean_t3", exps) * total
    return _report("T3", variant, triple, cfg, rhs, flags, tol, hyp, q)


def bound_thm5(triple, cfg: EvalConfig, tol: float = DEFAULT_TOL,
               hyp: Optional[CheckReport] = None) -> BoundReport:
    """Trapezoid deviation against the power-mean bound with kernel ``∫₀¹ (1-t) kᵗ dt``."""
    cfg.require_positive()
    exps = _exps(cfg, None, "T5")
    total, flags = _kernel_rhs(triple.f1, cfg, exps.q, kernel_k2_from_log, 2)
    rhs = prefactor("pmean_t5", exps) * total
    return _report("T5", "standard", triple, cfg, rhs, flags, tol, hyp, exps.q)


# -- corollaries and combinators ---------------------------------------------


def corollary_equal_endpoints(order: str, triple, cfg: EvalConfig, q: float,
                              tol: float = DEFAULT_TOL,
                              hyp: Optional[CheckReport] = None) -> BoundReport:
    """Equal-endpoint simplification of T2 (``order="second"``) or T4 (``"first"``).

    Requires ``|f^(order)(a)| == |f^(order)(b)|`` to 1e-9 relative. The Hölder
    constant is replaced by 1, so the result dominates the theorem's bound.
    """
    if order not in ("first", "second"):
        raise DomainError(f"order must be 'first' or 'second', got {order!r}")
    if not q >= 1:
        raise DomainError(f"q must be at least 1, got {q!r}")
    cfg.require_positive()
    deriv = triple.derivative(order)
    ga = _magnitude(deriv, cfg.a)
    gb = _magnitude(deriv, cfg.b)
    if abs(ga - gb) > _EQUAL_ENDPOINT_RTOL * max(ga, gb):
        raise PreconditionError(f"|f^({order})| differs at the endpoints: {ga!r} vs {gb!r}")
    a, b, x = cfg.a, cfg.b, cfg.x
    flags = _base_flags(cfg)
    gx = _magnitude(deriv, x)
    _note_pair(flags, gx, ga)
    if order == "second":
        theorem, weight = "C1", ((x - a) ** 3 + (b - x) ** 3) / (2 * cfg.width)
    else:
        theorem, weight = "C3", ((x - a) ** 2 + (b - x) ** 2) / cfg.width
    rhs = weight * _log_mean_root(gx, ga, q)
    return _report(theorem, "standard", triple, cfg, rhs, flags, tol, hyp, q)


def best_bound(reports: Sequence[BoundReport]) -> BoundReport:
    """The report with the smallest right-hand side (first one on ties).

    Pairing T2 with T3 gives ``min{v1, v2}``; pairing T4 with T5 gives
    ``min{eta1, eta2}``, measured against the trapezoid deviation.
    """
    if not reports:
        raise PreconditionError("best_bound needs at least one report")
    kind = reports[0].lhs_kind
    cfg = reports[0].cfg
    for rep in reports[1:]:
        if rep.lhs_kind != kind:
            raise PreconditionError(f"mixed deviations: {kind} and {rep.lhs_kind}")
        if (rep.cfg.a, rep.cfg.b, rep.cfg.x) != (cfg.a, cfg.b, cfg.x):
            raise PreconditionError("reports come from different configurations")
    return min(reports, key=lambda rep: rep.rhs)


def classic_hh_check(f, a: float, b: float, tol: float = DEFAULT_TOL):
    """``f((a+b)/2) <= mean(f) <= (f(a)+f(b))/2`` for convex ``f``, each to 1e-10."""
    if not a < b:
        raise DomainError(f"need a < b, got a={a!r}, b={b!r}")
    mean = integral_mean(f, a, b, tol)
    left = _scalar(f, 0.5 * (a + b)) <= mean + 1e-10
    right = mean <= 0.5 * (_scalar(f, a) + _scalar(f, b)) + 1e-10
    return left, right


def absolute_integrand_bound(theorem: str, triple, cfg: EvalConfig,
                             tol: float = DEFAULT_TOL) -> float:
    """First step of every proof: integrals of absolute values.

    For T2/T3 this is ``(x-a)³/(2(b-a)) ∫ t² |f''(tx+(1-t)a)| dt + (b-side)``;
    for T4/T5 the weight is ``|1 - t|`` with ``f'`` and squared lengths; for
    T1 the weight is ``t``. The value sits between the deviation and every
    valid right-hand side.
    """
    if theorem not in ("T1", "T2", "T3", "T4", "T5"):
        raise DomainError(f"no integrand chain for {theorem!r}")
    deriv = triple.derivative(ORDER[theorem])

    def absolute(u):
        return np.abs(deriv(u))

    if theorem in ("T2", "T3"):
        power, weight = 3, (lambda t: t * t)
    elif theorem == "T1":
        power, weight = 2, (lambda t: t)
    else:
        power, weight = 2, (lambda t: 1.0 - t)
    return sum(w * segment_integral(absolute, weight, cfg.x, end, tol)
               for end, w in _terms(cfg, power))


def evaluate_bound(theorem: str, triple, cfg: EvalConfig, tol: float = DEFAULT_TOL,
                   variant: str = "standard", hyp: Optional[CheckReport] = None) -> BoundReport:
    """Dispatch on a theorem label; corollaries take ``q`` from ``cfg.exps``."""
    if theorem == "T3":
        return bound_thm3(triple, cfg, tol, variant, hyp)
    if variant != "standard":
        raise DomainError(f"{theorem} has no {variant!r} variant")
    if theorem == "T1":
        return bound_thm1(triple, cfg, tol, hyp)
    if theorem == "T2":
        return bound_thm2(triple, cfg, tol, hyp)
    if theorem == "T4":
        return bound_thm4(triple, cfg, tol, hyp)
    if theorem == "T5":
        return bound_thm5(triple, cfg, tol, hyp)
    if theorem in ("C1", "C3"):
        if cfg.exps is None:
            raise PreconditionError(f"{theorem} needs an exponent q")
        return corollary_equal_endpoints(ORDER[theorem], triple, cfg, cfg.exps.q, tol, hyp)
    raise DomainError(f"unknown theorem {theorem!r}")
