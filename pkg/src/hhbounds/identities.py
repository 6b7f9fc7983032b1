"""Numerical checks of the two integral identities behind the bounds.

Second-derivative (midpoint) identity::

    (1/(b-a)) ∫ₐᵇ f - f(x) + (x - (a+b)/2) f'(x)
        = (x-a)³/(2(b-a)) ∫₀¹ t² f''(tx+(1-t)a) dt
        + (b-x)³/(2(b-a)) ∫₀¹ t² f''(tx+(1-t)b) dt

First-derivative (weighted trapezoid) identity, correct orientation::

    ((b-x) f(b) + (x-a) f(a))/(b-a) - (1/(b-a)) ∫ₐᵇ f
        = (x-a)²/(b-a) ∫₀¹ (t-1) f'(tx+(1-t)a) dt
        + (b-x)²/(b-a) ∫₀¹ (1-t) f'(tx+(1-t)b) dt

The ``paper_literal`` variant swaps the two weights, which negates the right
side; it is kept so the discrepancy can be reproduced.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError
from .kernels import HolderPair
from .quadrature import DEFAULT_TOL, integrate

__all__ = [
    "EvalConfig",
    "IdentityReport",
    "segment_integral",
    "integral_mean",
    "lemma1_check",
    "lemma2_check",
    "VARIANTS",
]

VARIANTS = ("corrected", "paper_literal")


@dataclass(frozen=True)
class EvalConfig:
    """Interval ``[a, b]``, evaluation point ``x`` and optional exponents."""

    a: float
    b: float
    x: float
    exps: Optional[HolderPair] = None

    def __post_init__(self):
        a, b, x = self.a, self.b, self.x
        if not all(math.isfinite(v) for v in (a, b, x)):
            raise DomainError(f"non-finite configuration ({a!r}, {b!r}, {x!r})")
        if not a < b:
            raise DomainError(f"need a < b, got a={a!r}, b={b!r}")
        if not a <= x <= b:
            raise DomainError(f"x={x!r} lies outside [{a!r}, {b!r}]")

    @classmethod
    def at_position(cls, a, b, r, exps=None):
        """Config with ``x = a + r (b - a)``; ``r`` of 0 and 1 hit the ends exactly."""
        if not 0 <= r <= 1:
            raise DomainError(f"relative position must lie in [0, 1], got {r!r}")
        x = a if r == 0 else b if r == 1 else a + r * (b - a)
        return cls(a, b, x, exps)

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.a + self.b)

    @property
    def width(self) -> float:
        return self.b - self.a

    def require_positive(self):
        if not self.a > 0:
            raise DomainError(f"bounds need a positive interval, got a={self.a!r}")


@dataclass(frozen=True)
class IdentityReport:
    lhs: float
    rhs: float
    residual: float
    tol_used: float
    variant: str
    lemma: int = 1

    @property
    def ok(self) -> bool:
        return abs(self.residual) <= 10 * self.tol_used


def segment_integral(g, weight, x, end, tol=DEFAULT_TOL):
    """``∫₀¹ weight(t) g(t x + (1 - t) end) dt`` by quadrature."""
    return integrate(lambda t: weight(t) * g(t * x + (1.0 - t) * end), 0.0, 1.0, tol).value


def integral_mean(f, a, b, tol=DEFAULT_TOL):
    return integrate(f, a, b, tol).value / (b - a)


def _scalar(g, x):
    return float(np.asarray(g(np.asarray(x, dtype=float)), dtype=float))


def _t_squared(t):
    return t * t


def _one_minus_t(t):
    return 1.0 - t


def _t_minus_one(t):
    return t - 1.0


def lemma1_check(triple, cfg: EvalConfig, tol: float = DEFAULT_TOL) -> IdentityReport:
    a, b, x = cfg.a, cfg.b, cfg.x
    mean = integral_mean(triple.f, a, b, tol)
    lhs = mean - _scalar(triple.f, x) + (x - cfg.midpoint) * _scalar(triple.f1, x)
    rhs = 0.0
    if x > a:
        rhs += (x - a) ** 3 / (2 * cfg.width) * segment_integral(triple.f2, _t_squared, x, a, tol)
    if x < b:
        rhs += (b - x) ** 3 / (2 * cfg.width) * segment_integral(triple.f2, _t_squared, x, b, tol)
    return IdentityReport(lhs, rhs, lhs - rhs, tol, "corrected", 1)


def lemma2_check(triple, cfg: EvalConfig, tol: float = DEFAULT_TOL,
                 variant: str = "corrected") -> IdentityReport:
    if variant not in VARIANTS:
        raise DomainError(f"variant must be one of {VARIANTS}, got {variant!r}")
    a, b, x = cfg.a, cfg.b, cfg.x
    mean = integral_mean(triple.f, a, b, tol)
    lhs = ((b - x) * _scalar(triple.f, b) + (x - a) * _scalar(triple.f, a)) / cfg.width - mean
    if variant == "corrected":
        w_a, w_b = _t_minus_one, _one_minus_t
    else:
        w_a, w_b = _one_minus_t, _t_minus_one
    rhs = 0.0
    if x > a:
        rhs += (x - a) ** 2 / cfg.width * segment_integral(triple.f1, w_a, x, a, tol)
    if x < b:
        rhs += (b - x) ** 2 / cfg.width * segment_integral(triple.f1, w_b, x, b, tol)
    return IdentityReport(lhs, rhs, lhs - rhs, tol, variant, 2)
