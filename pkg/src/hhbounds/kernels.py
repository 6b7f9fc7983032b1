"""Scalar means, power-mean kernels and Hölder constants.

Every bound in the package is assembled from four scalar pieces:

* the logarithmic mean ``L(u, v) = (u - v) / (ln u - ln v)``, which equals
  ``∫₀¹ uᵗ v¹⁻ᵗ dt``;
* ``K3(k) = ∫₀¹ t² kᵗ dt`` and ``K2(k) = ∫₀¹ (1 - t) kᵗ dt``;
* the constants produced by Hölder's and the power-mean inequality.

Close to the removable singularities (``u == v``, ``k == 1``) the closed
forms cancel catastrophically, so short Taylor series take over there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .errors import DomainError

__all__ = [
    "HolderPair",
    "log_mean",
    "kernel_k3",
    "kernel_k2",
    "kernel_k3_from_log",
    "kernel_k2_from_log",
    "prefactor",
    "LOG_MEAN_SWITCH",
    "KERNEL_SWITCH",
]

LOG_MEAN_SWITCH = 1e-6
KERNEL_SWITCH = 0.1
_SERIES_RTOL = 1e-17
_CONJUGATE_ATOL = 1e-12


@dataclass(frozen=True)
class HolderPair:
    """Exponent pair.

    Hölder mode has ``p > 1`` and ``q`` its conjugate. Power-mean mode has
    ``p = None`` and ``q >= 1``.
    """

    p: Optional[float]
    q: float

    def __post_init__(self):
        q = self.q
        if not math.isfinite(q):
            raise DomainError(f"q must be finite, got {q!r}")
        if self.p is None:
            if q < 1:
                raise DomainError(f"power-mean mode needs q >= 1, got {q!r}")
            return
        p = self.p
        if not (math.isfinite(p) and p > 1 and q > 1):
            raise DomainError(f"Hölder mode needs p, q > 1, got p={p!r}, q={q!r}")
        if abs(1 / p + 1 / q - 1) > _CONJUGATE_ATOL:
            raise DomainError(f"p={p!r} and q={q!r} are not conjugate")

    @classmethod
    def holder(cls, p: float) -> "HolderPair":
        if not p > 1:
            raise DomainError(f"Hölder exponent p must exceed 1, got {p!r}")
        return cls(p, p / (p - 1))

    @classmethod
    def holder_from_q(cls, q: float) -> "HolderPair":
        if not q > 1:
            raise DomainError(f"Hölder exponent q must exceed 1, got {q!r}")
        return cls(q / (q - 1), q)

    @classmethod
    def power_mean(cls, q: float) -> "HolderPair":
        return cls(None, q)

    @property
    def mode(self) -> str:
        return "power_mean" if self.p is None else "holder"


def log_mean(u: float, v: float) -> float:
    """Logarithmic mean of two non-negative numbers.

    ``L(c, c) = c`` and ``L(0, v) = L(u, 0) = 0`` are the continuous
    extensions. The result always lies between ``min(u, v)`` and ``max(u, v)``.
    """
    if u < 0 or v < 0 or math.isnan(u) or math.isnan(v):
        raise DomainError(f"logarithmic mean needs non-negative arguments, got ({u!r}, {v!r})")
    if u == 0 or v == 0:
        return 0.0
    if u == v:
        return float(u)
    # ordering makes the result exactly symmetric
    hi, lo = (u, v) if u > v else (v, u)
    if math.isinf(hi):
        return math.inf
    ratio = hi / lo
    if ratio <= 2.0:
        # hi - lo is exact here (Sterbenz), log1p keeps d accurate
        d = math.log1p((hi - lo) / lo)
    elif math.isfinite(ratio):
        d = math.log(ratio)
    else:
        d = math.log(hi) - math.log(lo)
    if d < LOG_MEAN_SWITCH:
        # L = sqrt(uv) * sinh(d/2) / (d/2)
        d2 = d * d
        value = math.sqrt(hi) * math.sqrt(lo) * (1.0 + d2 / 24.0 + d2 * d2 / 1920.0)
    else:
        value = (hi - lo) / d
    return min(max(value, lo), hi)


def _k3_series(lk: float) -> float:
    # sum_n lk^n / (n! (n+3))
    total = 1.0 / 3.0
    power = 1.0
    n = 0
    while True:
        n += 1
        power *= lk / n
        term = power / (n + 3)
        total += term
        if abs(term) < _SERIES_RTOL * abs(total) or n > 60:
            return total


def _k3_closed(lk: float) -> float:
    if lk > 700:
        return math.inf
    k = math.exp(lk)
    km1 = math.expm1(lk)
    return k / lk - 2.0 * k / lk**2 + 2.0 * km1 / lk**3


def _k2_series(lk: float) -> float:
    # sum_n lk^n / (n! (n+1) (n+2))
    total = 0.5
    power = 1.0
    n = 0
    while True:
        n += 1
        power *= lk / n
        term = power / ((n + 1) * (n + 2))
        total += term
        if abs(term) < _SERIES_RTOL * abs(total) or n > 60:
            return total


def _k2_closed(lk: float) -> float:
    if lk > 700:
        return math.inf
    return (math.expm1(lk) - lk) / lk**2


def kernel_k3_from_log(lk: float) -> float:
    """``∫₀¹ t² kᵗ dt`` as a function of ``ln k``; ``-inf`` gives the k = 0 limit."""
    if math.isnan(lk):
        raise DomainError("ln k is NaN")
    if lk == -math.inf:
        return 0.0
    if lk == math.inf:
        return math.inf
    if abs(lk) < KERNEL_SWITCH:
        return _k3_series(lk)
    return _k3_closed(lk)


def kernel_k2_from_log(lk: float) -> float:
    """``∫₀¹ (1 - t) kᵗ dt`` as a function of ``ln k``."""
    if math.isnan(lk):
        raise DomainError("ln k is NaN")
    if lk == -math.inf:
        return 0.0
    if lk == math.inf:
        return math.inf
    if abs(lk) < KERNEL_SWITCH:
        return _k2_series(lk)
    return _k2_closed(lk)


def _log_of_ratio(k: float) -> float:
    if math.isnan(k) or k < 0:
        raise DomainError(f"kernel argument must be non-negative, got {k!r}")
    if k == 0:
        return -math.inf
    return math.log(k)


def kernel_k3(k: float) -> float:
    """Closed form of ``∫₀¹ t² kᵗ dt`` for ``k >= 0``.

    The last term of the closed form is ``2(k - 1)/(ln k)³``; ``kernel_k3(1)``
    is exactly 1/3 and ``kernel_k3(0)`` is the limit 0.
    """
    return kernel_k3_from_log(_log_of_ratio(k))


def kernel_k2(k: float) -> float:
    """Closed form of ``∫₀¹ (1 - t) kᵗ dt = (k - ln k - 1)/(ln k)²`` for ``k >= 0``."""
    return kernel_k2_from_log(_log_of_ratio(k))


_PREFACTOR_KINDS = ("holder_t2", "holder_t1t4", "pmean_t3", "pmean_t5")


def prefactor(kind: str, exps: HolderPair) -> float:
    """Constant in front of a bound.

    ``holder_t2``: ``(2p+1)^(-1/p)``, ``holder_t1t4``: ``(p+1)^(-1/p)``,
    ``pmean_t3``: ``(1/3)^(1-1/q)``, ``pmean_t5``: ``(1/2)^(1-1/q)``.
    """
    if kind not in _PREFACTOR_KINDS:
        raise DomainError(f"unknown prefactor kind {kind!r}")
    if kind.startswith("holder"):
        p = exps.p
        if p is None:
            raise DomainError(f"{kind} needs a Hölder exponent p")
        base = 2 * p + 1 if kind == "holder_t2" else p + 1
        return base ** (-1.0 / p)
    q = exps.q
    if q < 1:
        raise DomainError(f"{kind} needs q >= 1, got {q!r}")
    base = 1.0 / 3.0 if kind == "pmean_t3" else 0.5
    return base ** (1.0 - 1.0 / q)
