"""Sampled checks of geometric convexity and monotone decrease.

The bound theorems assume that ``|f'|^q`` (or ``|f''|^q``) is geometrically
convex, ``g(x^t y^(1-t)) <= g(x)^t g(y)^(1-t)``, and non-increasing. These
checks certify the hypotheses on a grid only; they are a practical gate, not
a proof.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from .errors import DomainError, EvaluationError
from .quadrature import evaluate

__all__ = [
    "CheckReport",
    "check_geometric_convexity",
    "check_monotone_decreasing",
    "check_hypotheses",
    "DEFAULT_GRID_N",
    "T_VALUES",
]

DEFAULT_GRID_N = 33
T_VALUES = np.arange(1, 10) / 10.0
_RTOL = 1e-12


@dataclass(frozen=True)
class CheckReport:
    """Outcome of a sampled check.

    ``worst_violation`` is signed: positive means the inequality fails by that
    margin. ``passed`` holds exactly when it does not exceed ``tolerance``.
    """

    passed: bool
    worst_violation: float
    witness: Optional[Tuple[float, ...]]
    samples_used: int
    tolerance: float
    kind: str
    zero_samples: int = 0
    parts: Tuple["CheckReport", ...] = field(default=(), repr=False)


def _sample(g, xs):
    ys = evaluate(g, xs)
    bad = ~np.isfinite(ys)
    if bad.any():
        i = int(np.argmax(bad))
        raise EvaluationError(float(xs.flat[i]), float(ys.flat[i]))
    return ys


def _check_grid(lo, hi, grid_n):
    if not lo < hi:
        raise DomainError(f"need lo < hi, got [{lo!r}, {hi!r}]")
    if grid_n < 5:
        raise DomainError(f"grid_n must be at least 5, got {grid_n!r}")


def check_geometric_convexity(g, lo: float, hi: float, grid_n: int = DEFAULT_GRID_N) -> CheckReport:
    """Test ``g(x^t y^(1-t)) <= g(x)^t g(y)^(1-t)`` on a geometric grid.

    All pairs of the ``grid_n`` grid points are combined with
    ``t in {0.1, ..., 0.9}``. Pairs where ``g`` vanishes at an end are counted
    in ``zero_samples`` and skipped. Equivalent to midpoint convexity of
    ``u -> ln g(e^u)`` on the sampled set.
    """
    _check_grid(lo, hi, grid_n)
    if not lo > 0:
        raise DomainError(f"geometric convexity needs a positive interval, got lo={lo!r}")
    xs = np.geomspace(lo, hi, grid_n)
    gx = _sample(g, xs)
    if (gx < 0).any():
        raise DomainError("geometric convexity is defined for non-negative functions only")
    i, j = np.triu_indices(grid_n, k=1)
    xi, xj = xs[i][:, None], xs[j][:, None]
    gi, gj = gx[i][:, None], gx[j][:, None]
    t = T_VALUES[None, :]
    mids = xi**t * xj ** (1.0 - t)
    gm = _sample(g, mids)
    positive = (gi > 0) & (gj > 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        # written as gj * (gi/gj)**t so equal values give an exact 0 margin
        bound = np.where(positive, gj * (gi / np.where(positive, gj, 1.0)) ** t, 0.0)
    violation = np.where(np.broadcast_to(positive, gm.shape), gm - bound, -np.inf)
    zero_samples = int((~positive).sum()) * T_VALUES.size
    scale = max(1.0, float(np.max(np.abs(gx))), float(np.max(np.abs(gm))))
    tolerance = _RTOL * scale
    samples = grid_n + gm.size
    if not positive.any():
        return CheckReport(True, 0.0, None, samples, tolerance, "geometric_convexity", zero_samples)
    k = np.unravel_index(int(np.argmax(violation)), violation.shape)
    worst = float(violation[k])
    witness = (float(xi[k[0], 0]), float(xj[k[0], 0]), float(T_VALUES[k[1]]))
    return CheckReport(worst <= tolerance, worst, witness, samples, tolerance,
                       "geometric_convexity", zero_samples)


def check_monotone_decreasing(g, lo: float, hi: float, grid_n: int = DEFAULT_GRID_N) -> CheckReport:
    """Test ``g(x1) >= g(x2)`` for every grid pair ``x1 < x2`` (non-strict)."""
    _check_grid(lo, hi, grid_n)
    xs = np.linspace(lo, hi, grid_n)
    gx = _sample(g, xs)
    i, j = np.triu_indices(grid_n, k=1)
    rise = gx[j] - gx[i]
    k = int(np.argmax(rise))
    worst = float(rise[k])
    tolerance = _RTOL * max(1.0, float(np.max(np.abs(gx))))
    return CheckReport(worst <= tolerance, worst, (float(xs[i[k]]), float(xs[j[k]])),
                       grid_n, tolerance, "monotone_decreasing")


def check_hypotheses(triple, lo: float, hi: float, q: float, order: str,
                     grid_n: int = DEFAULT_GRID_N) -> CheckReport:
    """Check both hypotheses for ``x -> |f^(order)(x)|^q`` on ``[lo, hi]``."""
    if not q > 0:
        raise DomainError(f"q must be positive, got {q!r}")
    deriv = triple.derivative(order)

    def g(x):
        return np.abs(deriv(x)) ** q

    convex = check_geometric_convexity(g, lo, hi, grid_n)
    monotone = check_monotone_decreasing(g, lo, hi, grid_n)
    worse = convex if convex.worst_violation - convex.tolerance >= \
        monotone.worst_violation - monotone.tolerance else monotone
    return CheckReport(
        convex.passed and monotone.passed,
        worse.worst_violation,
        worse.witness,
        convex.samples_used + monotone.samples_used,
        worse.tolerance,
        "hypotheses",
        convex.zero_samples,
        (convex, monotone),
    )
