"""Test functions with exact first and second derivatives.

Each entry bundles ``f``, ``f'`` and ``f''`` as numpy-vectorised evaluators
together with analytic notes on whether ``|f'|^q`` and ``|f''|^q`` are
geometrically convex and decreasing. The power family ``c * x**(-alpha)`` is
log-log linear, so it meets both hypotheses for every ``q > 0`` on any
positive interval; ``exp(-x)`` is the standard counterexample.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Tuple

import numpy as np

from .errors import DomainError

__all__ = [
    "FunctionTriple",
    "CatalogEntry",
    "make_power",
    "make_exp_reciprocal",
    "make_negative_example",
    "make_constant",
    "make_quadratic",
    "make_linear",
    "make_family",
    "FAMILIES",
    "catalog_list",
    "catalog_lookup",
]

Evaluator = Callable[[np.ndarray], np.ndarray]

POSITIVE = (0.0, math.inf)
REAL_LINE = (-math.inf, math.inf)

ROLES = ("hypothesis_satisfying", "hypothesis_violating", "degenerate")


def _fmt(value) -> str:
    return format(float(value), ".15g")


def _label(family, params):
    if not params:
        return family
    inner = ",".join(f"{key}={_fmt(val)}" for key, val in params.items())
    return f"{family}({inner})"


@dataclass(frozen=True, eq=False)
class FunctionTriple:
    f: Evaluator
    f1: Evaluator
    f2: Evaluator
    name: str
    family: str
    params: Dict[str, float] = field(default_factory=dict)
    valid_domain: Tuple[float, float] = POSITIVE
    # order ("first" / "second") -> "yes" | "no" | "unknown"
    hypothesis_notes: Dict[str, str] = field(default_factory=dict)

    def derivative(self, order: str) -> Evaluator:
        if order in ("first", 1, "1"):
            return self.f1
        if order in ("second", 2, "2"):
            return self.f2
        raise DomainError(f"derivative order must be 'first' or 'second', got {order!r}")

    def covers(self, lo: float, hi: float) -> bool:
        dlo, dhi = self.valid_domain
        return dlo < lo and hi < dhi

    def params_label(self) -> str:
        return ";".join(f"{key}={_fmt(val)}" for key, val in self.params.items())


@dataclass(frozen=True, eq=False)
class CatalogEntry:
    triple: FunctionTriple
    intended_role: str

    @property
    def name(self) -> str:
        return self.triple.name


def _positive(name, value):
    if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
        raise DomainError(f"{name} must be a positive finite number, got {value!r}")
    return float(value)


def make_power(c: float = 1.0, alpha: float = 1.0) -> FunctionTriple:
    """``f(x) = c * x**(-alpha)`` on ``(0, inf)``."""
    c = _positive("c", c)
    alpha = _positive("alpha", alpha)
    k1 = -alpha
    k2 = alpha * (alpha + 1.0)

    # c multiplies last so that scaling c is exact in floating point
    def f(x):
        return c * np.power(x, -alpha)

    def f1(x):
        return c * (k1 * np.power(x, -alpha - 1.0))

    def f2(x):
        return c * (k2 * np.power(x, -alpha - 2.0))

    params = {"c": c, "alpha": alpha}
    return FunctionTriple(
        f, f1, f2, _label("power", params), "power", params, POSITIVE,
        {"first": "yes", "second": "yes"},
    )


def make_exp_reciprocal(beta: float = 1.0) -> FunctionTriple:
    """``f(x) = exp(beta / x)`` on ``(0, inf)``.

    ``ln|f'|(e^u) = beta e^-u + ln beta - 2u`` is convex and decreasing; the
    second-order note is left to the sampled checker.
    """
    beta = _positive("beta", beta)

    def f(x):
        return np.exp(beta / x)

    def f1(x):
        return -(beta / x**2) * np.exp(beta / x)

    def f2(x):
        return np.exp(beta / x) * (beta**2 / x**4 + 2.0 * beta / x**3)

    params = {"beta": beta}
    return FunctionTriple(
        f, f1, f2, _label("exp_reciprocal", params), "exp_reciprocal", params, POSITIVE,
        {"first": "yes", "second": "unknown"},
    )


def make_negative_example() -> FunctionTriple:
    """``f(x) = exp(-x)``: ``|f'|`` decreases but ``ln|f'|(e^u) = -e^u`` is concave."""

    def f(x):
        return np.exp(-x)

    def f1(x):
        return -np.exp(-x)

    def f2(x):
        return np.exp(-x)

    return FunctionTriple(
        f, f1, f2, "exp_neg", "exp_neg", {}, REAL_LINE,
        {"first": "no", "second": "no"},
    )


def make_constant(c: float = 1.0) -> FunctionTriple:
    c = float(c)

    def f(x):
        return np.full(np.shape(x), c)

    def zero(x):
        return np.zeros(np.shape(x))

    params = {"c": c}
    return FunctionTriple(
        f, zero, zero, _label("constant", params), "constant", params, REAL_LINE,
        {"first": "no", "second": "no"},
    )


def make_quadratic(c: float = 1.0) -> FunctionTriple:
    """``f(u) = c u²``; ``|f''|`` is constant, the boundary case of both hypotheses."""
    c = _positive("c", c)

    def f(x):
        return c * np.square(x)

    def f1(x):
        return 2.0 * c * np.asarray(x, dtype=float)

    def f2(x):
        return np.full(np.shape(x), 2.0 * c)

    params = {"c": c}
    return FunctionTriple(
        f, f1, f2, _label("quadratic", params), "quadratic", params, REAL_LINE,
        {"first": "no", "second": "yes"},
    )


def make_linear(m: float = 1.0, c0: float = 0.0) -> FunctionTriple:
    """``f(u) = c0 - m u``, so ``|f'| = m`` and ``f'' = 0``."""
    m = _positive("m", m)
    c0 = float(c0)

    def f(x):
        return c0 - m * np.asarray(x, dtype=float)

    def f1(x):
        return np.full(np.shape(x), -m)

    def f2(x):
        return np.zeros(np.shape(x))

    params = {"m": m, "c0": c0}
    return FunctionTriple(
        f, f1, f2, _label("linear", params), "linear", params, REAL_LINE,
        {"first": "yes", "second": "no"},
    )


FAMILIES: Dict[str, Callable[..., FunctionTriple]] = {
    "power": make_power,
    "exp_reciprocal": make_exp_reciprocal,
    "exp_neg": make_negative_example,
    "constant": make_constant,
    "quadratic": make_quadratic,
    "linear": make_linear,
}


def make_family(family: str, **params) -> FunctionTriple:
    """Build a triple from a family name and keyword parameters."""
    try:
        factory = FAMILIES[family]
    except KeyError:
        raise DomainError(f"unknown family {family!r}; known: {', '.join(FAMILIES)}") from None
    try:
        return factory(**params)
    except TypeError as exc:
        raise DomainError(f"bad parameters for {family}: {exc}") from None


def catalog_list() -> List[CatalogEntry]:
    """The built-in registry, in a fixed order."""
    entries = []
    for c in (1.0, 100.0):
        for alpha in (0.5, 1.0, 2.0, 3.0):
            entries.append(CatalogEntry(make_power(c, alpha), "hypothesis_satisfying"))
    for beta in (0.5, 1.0, 2.0):
        entries.append(CatalogEntry(make_exp_reciprocal(beta), "hypothesis_satisfying"))
    entries.append(CatalogEntry(make_negative_example(), "hypothesis_violating"))
    entries.append(CatalogEntry(make_constant(1.0), "degenerate"))
    entries.append(CatalogEntry(make_quadratic(1.0), "degenerate"))
    entries.append(CatalogEntry(make_linear(1.0, 0.0), "degenerate"))
    return entries


def catalog_lookup(name: str) -> FunctionTriple:
    for entry in catalog_list():
        if entry.name == name:
            return entry.triple
    raise DomainError(f"no catalog entry named {name!r}")
