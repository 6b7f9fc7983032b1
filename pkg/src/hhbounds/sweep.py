"""Batch verification over grids of functions, intervals, points and exponents.

A sweep expands a :class:`SweepConfig` into one row per
(entry, interval, x, exponent, theorem, variant), evaluates every row and
aggregates the slack statistics. Rows are buffered and returned in declaration
order, so the output does not depend on ``parallelism``. Failures inside a row
are recorded in the row and never abort the sweep.

Config files are JSON with the field names of :class:`SweepConfig`::

    {
      "entries": [{"family": "power", "params": {"c": 1, "alpha": 2}},
                  "exp_reciprocal(beta=1)"],
      "intervals": [[1, 2], [0.5, 3]],
      "x_positions": [0, 0.25, 0.5, 0.75, 1],
      "exponents": [{"value": 2, "mode": "holder"}, [1.5, "power_mean"]],
      "theorems": ["T1", "T2", "T3", "T4", "T5", "lemmas"],
      "variants": ["standard", "paper_literal"],
      "tol": 1e-10, "parallelism": 1, "seed": 0
    }

Hölder exponents (``p``) feed T1, T2 and T4; power-mean exponents (``q``)
feed T3 and T5; the corollaries C1 and C3 accept either and use ``q``.
Identity rows (``"lemmas"``) do not depend on the exponent and are emitted
once per (entry, interval, x).
"""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from functools import lru_cache
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from .bounds import ORDER, evaluate_bound, is_violation
from .catalog import FunctionTriple, catalog_list, make_family
from .errors import ConfigError, DomainError
from .hypotheses import check_hypotheses
from .identities import EvalConfig, lemma1_check, lemma2_check
from .kernels import HolderPair
from .quadrature import DEFAULT_TOL

__all__ = [
    "EntrySpec",
    "ExponentSpec",
    "SweepConfig",
    "SweepRow",
    "SweepSummary",
    "run_sweep",
    "summarize",
    "tightness_search",
    "golden_section_max",
    "emit_report",
    "read_csv_report",
    "CSV_COLUMNS",
]

CSV_COLUMNS = ("entry", "params", "a", "b", "x", "p", "q", "theorem", "variant",
               "lhs", "rhs", "slack", "ratio", "hyp_ok", "flags")
BOUND_THEOREMS = ("T1", "T2", "T3", "T4", "T5", "C1", "C3")
ALL_THEOREMS = BOUND_THEOREMS + ("lemmas",)
HOLDER_THEOREMS = ("T1", "T2", "T4")
POWER_MEAN_THEOREMS = ("T3", "T5")
VARIANTS = ("standard", "paper_literal")
_CONFIG_KEYS = ("entries", "intervals", "x_positions", "exponents", "theorems",
                "tol", "variants", "parallelism", "seed")
_REQUIRED_KEYS = ("entries", "intervals", "x_positions", "theorems")


# -- configuration -------------------------------------------------------------


@dataclass(frozen=True)
class EntrySpec:
    family: str
    params: Tuple[Tuple[str, float], ...] = ()

    def build(self) -> FunctionTriple:
        return _build_triple(self.family, self.params)


@lru_cache(maxsize=None)
def _build_triple(family, params):
    return make_family(family, **dict(params))


@dataclass(frozen=True)
class ExponentSpec:
    value: float
    mode: str  # "holder" (value is p) or "power_mean" (value is q)

    def pair(self) -> HolderPair:
        if self.mode == "holder":
            return HolderPair.holder(self.value)
        return HolderPair.power_mean(self.value)

    def serves(self, theorem: str) -> bool:
        if theorem in HOLDER_THEOREMS:
            return self.mode == "holder"
        if theorem in POWER_MEAN_THEOREMS:
            return self.mode == "power_mean"
        return True


@dataclass(frozen=True)
class SweepConfig:
    entries: Tuple[EntrySpec, ...] = ()
    intervals: Tuple[Tuple[float, float], ...] = ()
    x_positions: Tuple[float, ...] = ()
    exponents: Tuple[ExponentSpec, ...] = ()
    theorems: Tuple[str, ...] = ()
    tol: float = DEFAULT_TOL
    variants: Tuple[str, ...] = ("standard",)
    parallelism: int = 1
    seed: int = 0

    def __post_init__(self):
        self.validate()

    def validate(self):
        for i, th in enumerate(self.theorems):
            if th not in ALL_THEOREMS:
                raise ConfigError(f"theorems[{i}]", f"unknown theorem {th!r}")
        bounds_requested = any(th != "lemmas" for th in self.theorems)
        for i, iv in enumerate(self.intervals):
            if len(iv) != 2 or not all(isinstance(v, (int, float)) and math.isfinite(v) for v in iv):
                raise ConfigError(f"intervals[{i}]", "expected two finite numbers")
            a, b = iv
            if not a < b:
                raise ConfigError(f"intervals[{i}]", f"need a < b, got {list(iv)}")
            if bounds_requested and not a > 0:
                raise ConfigError(f"intervals[{i}]", "bound theorems need 0 < a")
        for i, r in enumerate(self.x_positions):
            if not (isinstance(r, (int, float)) and 0 <= r <= 1):
                raise ConfigError(f"x_positions[{i}]", f"must lie in [0, 1], got {r!r}")
        for i, ex in enumerate(self.exponents):
            try:
                ex.pair()
            except DomainError as exc:
                raise ConfigError(f"exponents[{i}]", str(exc)) from None
        for i, v in enumerate(self.variants):
            if v not in VARIANTS:
                raise ConfigError(f"variants[{i}]", f"unknown variant {v!r}")
        if not (isinstance(self.tol, (int, float)) and self.tol > 0):
            raise ConfigError("tol", f"must be positive, got {self.tol!r}")
        if not (isinstance(self.parallelism, int) and self.parallelism >= 1):
            raise ConfigError("parallelism", f"must be a positive integer, got {self.parallelism!r}")
        if not isinstance(self.seed, int):
            raise ConfigError("seed", f"must be an integer, got {self.seed!r}")
        for i, entry in enumerate(self.entries):
            try:
                entry.build()
            except DomainError as exc:
                raise ConfigError(f"entries[{i}]", str(exc)) from None

    @classmethod
    def from_dict(cls, data) -> "SweepConfig":
        if not isinstance(data, dict):
            raise ConfigError("<root>", "expected a JSON object")
        for key in data:
            if key not in _CONFIG_KEYS:
                raise ConfigError(key, "unknown key")
        for key in _REQUIRED_KEYS:
            if key not in data:
                raise ConfigError(key, "missing required key")
        for key in ("entries", "intervals", "x_positions", "exponents", "theorems", "variants"):
            if key in data and not isinstance(data[key], list):
                raise ConfigError(key, "expected a list")
        kwargs = {
            "entries": tuple(_parse_entry(e, f"entries[{i}]") for i, e in enumerate(data["entries"])),
            "intervals": tuple(_parse_interval(iv, f"intervals[{i}]")
                               for i, iv in enumerate(data["intervals"])),
            "x_positions": tuple(data["x_positions"]),
            "exponents": tuple(_parse_exponent(e, f"exponents[{i}]")
                               for i, e in enumerate(data.get("exponents", []))),
            "theorems": tuple(data["theorems"]),
        }
        for key in ("tol", "parallelism", "seed"):
            if key in data:
                kwargs[key] = data[key]
        if "variants" in data:
            kwargs["variants"] = tuple(data["variants"])
        return cls(**kwargs)

    @classmethod
    def load(cls, path) -> "SweepConfig":
        path = Path(path)
        try:
            text = path.read_text()
        except OSError as exc:
            raise ConfigError(str(path), f"cannot read config: {exc.strerror or exc}") from None
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(str(path), f"invalid JSON: {exc}") from None
        return cls.from_dict(data)


def _parse_entry(raw, path) -> EntrySpec:
    if isinstance(raw, str):
        for entry in catalog_list():
            if entry.name == raw:
                triple = entry.triple
                return EntrySpec(triple.family, tuple(triple.params.items()))
        return EntrySpec(raw)
    if isinstance(raw, dict):
        for key in raw:
            if key not in ("family", "params"):
                raise ConfigError(f"{path}.{key}", "unknown key")
        if "family" not in raw:
            raise ConfigError(f"{path}.family", "missing required key")
        params = raw.get("params", {})
        if not isinstance(params, dict):
            raise ConfigError(f"{path}.params", "expected an object")
        return EntrySpec(raw["family"], tuple((str(k), v) for k, v in params.items()))
    raise ConfigError(path, "expected a catalog name or {family, params}")


def _parse_interval(raw, path):
    if not isinstance(raw, (list, tuple)) or len(raw) != 2:
        raise ConfigError(path, "expected [a, b]")
    return tuple(raw)


def _parse_exponent(raw, path) -> ExponentSpec:
    if isinstance(raw, dict):
        for key in raw:
            if key not in ("value", "mode"):
                raise ConfigError(f"{path}.{key}", "unknown key")
        value, mode = raw.get("value"), raw.get("mode")
    elif isinstance(raw, (list, tuple)) and len(raw) == 2:
        value, mode = raw
    else:
        raise ConfigError(path, "expected {value, mode} or [value, mode]")
    if mode not in ("holder", "power_mean"):
        raise ConfigError(f"{path}.mode", f"must be 'holder' or 'power_mean', got {mode!r}")
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise ConfigError(f"{path}.value", f"expected a number, got {value!r}")
    return ExponentSpec(float(value), mode)


# -- rows ------------------------------------------------------------------------


@dataclass(frozen=True)
class SweepRow:
    entry: str
    params: str
    a: float
    b: float
    x: float
    p: Optional[float]
    q: Optional[float]
    theorem: str
    variant: str
    lhs: float
    rhs: float
    slack: float
    ratio: float
    hyp_ok: Optional[bool]
    flags: Tuple[str, ...] = ()
    tol: float = field(default=DEFAULT_TOL, compare=False)
    error: Optional[str] = field(default=None, compare=False)

    @property
    def is_identity(self) -> bool:
        return self.theorem in ("L1", "L2")

    @property
    def violated(self) -> bool:
        if self.error is not None:
            return False
        if self.is_identity:
            return abs(self.lhs - self.rhs) > 10 * self.tol
        return is_violation(self.lhs, self.rhs)

    @property
    def degenerate(self) -> bool:
        return "degenerate_k" in self.flags or "zero_derivative" in self.flags

    @classmethod
    def from_bound(cls, triple, report, tol=DEFAULT_TOL) -> "SweepRow":
        exps = report.cfg.exps
        return cls(
            triple.name, triple.params_label(), report.cfg.a, report.cfg.b, report.cfg.x,
            None if exps is None else exps.p, None if exps is None else exps.q,
            report.theorem, report.variant, report.lhs, report.rhs, report.slack,
            report.ratio, report.hyp_ok, tuple(sorted(report.flags)), tol,
        )


def _ratio(lhs, rhs):
    if rhs == 0:
        return 0.0 if lhs == 0 else math.inf
    return abs(lhs / rhs)


def _identity_row(triple, cfg, lemma, variant, tol):
    if lemma == 1:
        rep = lemma1_check(triple, cfg, tol)
    else:
        rep = lemma2_check(triple, cfg, tol, variant)
    flags = []
    if not rep.ok:
        flags.append("residual_fail")
    if cfg.x in (cfg.a, cfg.b):
        flags.append("x_at_endpoint")
    return SweepRow(triple.name, triple.params_label(), cfg.a, cfg.b, cfg.x, None, None,
                    f"L{lemma}", rep.variant, rep.lhs, rep.rhs, rep.rhs - rep.lhs,
                    _ratio(rep.lhs, rep.rhs), None, tuple(sorted(flags)), tol)


@lru_cache(maxsize=4096)
def _cached_hypotheses(entry: EntrySpec, a, b, q, order):
    return check_hypotheses(entry.build(), a, b, q, order)


def _error_row(triple_name, params, a, b, x, exps, theorem, variant, tol, exc):
    p = q = None
    if exps is not None:
        p, q = exps.p, exps.q
    nan = math.nan
    return SweepRow(triple_name, params, a, b, x, p, q, theorem, variant, nan, nan, nan, nan,
                    None, ("error",), tol, f"{type(exc).__name__}: {exc}")


def _evaluate_row(job):
    entry, a, b, r, exponent, theorem, variant, tol = job
    exps = exponent.pair() if exponent is not None else None
    try:
        triple = entry.build()
    except DomainError as exc:
        return _error_row(entry.family, "", a, b, math.nan, exps, theorem, variant, tol, exc)
    x = a if r == 0 else b if r == 1 else a + r * (b - a)
    try:
        if not triple.covers(a, b):
            raise DomainError(f"[{a}, {b}] leaves the domain {triple.valid_domain} of {triple.name}")
        cfg = EvalConfig(a, b, x, exps)
        if theorem in ("L1", "L2"):
            return _identity_row(triple, cfg, int(theorem[1]), variant, tol)
        hyp = _cached_hypotheses(entry, a, b, exps.q, ORDER[theorem])
        report = evaluate_bound(theorem, triple, cfg, tol, variant, hyp)
        return SweepRow.from_bound(triple, report, tol)
    except (ArithmeticError, ValueError) as exc:
        return _error_row(triple.name, triple.params_label(), a, b, x, exps, theorem, variant,
                          tol, exc)


def _jobs(config: SweepConfig):
    bound_theorems = [th for th in config.theorems if th != "lemmas"]
    lemmas = "lemmas" in config.theorems
    for entry in config.entries:
        for a, b in config.intervals:
            for r in config.x_positions:
                if lemmas:
                    for variant in config.variants:
                        if variant == "standard":
                            yield entry, a, b, r, None, "L1", "corrected", config.tol
                            yield entry, a, b, r, None, "L2", "corrected", config.tol
                        else:
                            yield entry, a, b, r, None, "L2", "paper_literal", config.tol
                for exponent in config.exponents:
                    for theorem in bound_theorems:
                        if not exponent.serves(theorem):
                            continue
                        for variant in config.variants:
                            if variant == "paper_literal" and theorem != "T3":
                                continue
                            yield entry, a, b, r, exponent, theorem, variant, config.tol


# -- summary ---------------------------------------------------------------------


@dataclass(frozen=True)
class SweepSummary:
    rows: int = 0
    passed: int = 0
    violations: int = 0
    degenerate: int = 0
    hyp_fail: int = 0
    errors: int = 0
    min_slack: Optional[float] = None
    min_slack_row: Optional[int] = None
    max_ratio: Optional[float] = None
    max_ratio_row: Optional[int] = None
    seed: int = 0

    def as_dict(self) -> Dict:
        return asdict(self)


def summarize(rows: Sequence[SweepRow], seed: int = 0) -> SweepSummary:
    """Counts plus the smallest slack and largest ratio over bound rows.

    Identity rows count towards ``violations`` when their residual exceeds
    ten times the tolerance; slack and ratio extremes cover bound rows only.
    """
    counts = dict(passed=0, violations=0, degenerate=0, hyp_fail=0, errors=0)
    min_slack = max_ratio = None
    min_row = max_row = None
    for i, row in enumerate(rows):
        if row.error is not None:
            counts["errors"] += 1
            continue
        if row.violated:
            counts["violations"] += 1
        else:
            counts["passed"] += 1
        if row.degenerate:
            counts["degenerate"] += 1
        if row.hyp_ok is False:
            counts["hyp_fail"] += 1
        if row.is_identity:
            continue
        if min_slack is None or row.slack < min_slack:
            min_slack, min_row = row.slack, i
        if max_ratio is None or row.ratio > max_ratio:
            max_ratio, max_row = row.ratio, i
    return SweepSummary(len(rows), min_slack=min_slack, min_slack_row=min_row,
                        max_ratio=max_ratio, max_ratio_row=max_row, seed=seed, **counts)


def run_sweep(config: SweepConfig) -> Tuple[List[SweepRow], SweepSummary]:
    """Evaluate every row of ``config``; rows come back in declaration order."""
    jobs = list(_jobs(config))
    if config.parallelism > 1 and len(jobs) > 1:
        chunk = max(1, len(jobs) // (4 * config.parallelism))
        with ProcessPoolExecutor(max_workers=config.parallelism) as pool:
            rows = list(pool.map(_evaluate_row, jobs, chunksize=chunk))
    else:
        rows = [_evaluate_row(job) for job in jobs]
    return rows, summarize(rows, config.seed)


# -- tightness -------------------------------------------------------------------

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section_max(fun, lo: float, hi: float, iterations: int = 20):
    """Maximise ``fun`` on ``[lo, hi]`` by golden-section search.

    Returns ``(x, value)`` for the best point evaluated, including the ends.
    """
    best_x, best_v = lo, fun(lo)
    v_hi = fun(hi)
    if v_hi > best_v:
        best_x, best_v = hi, v_hi
    a, b = lo, hi
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = fun(c), fun(d)
    for _ in range(iterations):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = fun(d)
        for xv, fv in ((c, fc), (d, fd)):
            if fv > best_v:
                best_x, best_v = xv, fv
    return best_x, best_v


def tightness_search(theorem: str, triple: FunctionTriple, interval, exponent: HolderPair,
                     coarse_n: int = 33, refine_iters: int = 20, variant: str = "standard",
                     tol: float = DEFAULT_TOL) -> SweepRow:
    """Largest ``lhs / rhs`` over ``x`` in the interval.

    A ``coarse_n``-point grid locates the best bracket, which golden-section
    search then refines. Rows whose right-hand side vanishes everywhere get
    the ``degenerate_rhs`` flag.
    """
    a, b = interval
    hyp = check_hypotheses(triple, a, b, exponent.q, ORDER[theorem])
    cache = {}

    def row_at(x):
        if x not in cache:
            report = evaluate_bound(theorem, triple, EvalConfig(a, b, x, exponent), tol, variant, hyp)
            cache[x] = SweepRow.from_bound(triple, report, tol)
        return cache[x]

    def ratio_at(x):
        ratio = row_at(x).ratio
        return -math.inf if math.isnan(ratio) else ratio

    grid = [a + (b - a) * i / (coarse_n - 1) for i in range(coarse_n)]
    grid[-1] = b
    ratios = [ratio_at(x) for x in grid]
    i = max(range(coarse_n), key=lambda j: (ratios[j], -j))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, coarse_n - 1)]
    x_best, r_best = golden_section_max(ratio_at, lo, hi, refine_iters)
    if ratios[i] >= r_best:
        x_best = grid[i]
    best = row_at(x_best)
    if all(row.rhs == 0 for row in cache.values()):
        best = replace(best, flags=tuple(sorted(set(best.flags) | {"degenerate_rhs"})))
    return best


# -- reports ---------------------------------------------------------------------


def _num(value) -> str:
    if value is None:
        return ""
    return format(float(value), ".17g")


def _csv_record(row: SweepRow):
    flags = list(row.flags)
    if row.error is not None:
        flags.append(f"error={row.error}")
    return [row.entry, row.params, _num(row.a), _num(row.b), _num(row.x), _num(row.p),
            _num(row.q), row.theorem, row.variant, _num(row.lhs), _num(row.rhs),
            _num(row.slack), _num(row.ratio),
            "" if row.hyp_ok is None else str(row.hyp_ok).lower(), "|".join(flags)]


def _json_value(value):
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    return value


def _json_row(row: SweepRow):
    record = {col: getattr(row, col) for col in CSV_COLUMNS}
    record["flags"] = list(row.flags)
    record["error"] = row.error
    return {key: _json_value(val) for key, val in record.items()}


def emit_report(rows: Sequence[SweepRow], summary: SweepSummary, fmt: str, path) -> None:
    """Write rows (and, for JSON, the summary) to ``path``.

    CSV has exactly the columns in ``CSV_COLUMNS`` with 17 significant digits,
    enough for every float to round-trip.
    """
    if fmt not in ("csv", "json"):
        raise DomainError(f"format must be 'csv' or 'json', got {fmt!r}")
    path = Path(path)
    try:
        with path.open("w", newline="") as fh:
            if fmt == "csv":
                writer = csv.writer(fh, lineterminator="\n")
                writer.writerow(CSV_COLUMNS)
                for row in rows:
                    writer.writerow(_csv_record(row))
            else:
                payload = {
                    "rows": [_json_row(row) for row in rows],
                    "summary": {k: _json_value(v) for k, v in summary.as_dict().items()},
                }
                json.dump(payload, fh, indent=2)
                fh.write("\n")
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc.strerror or exc}") from exc


def _parse_num(text):
    return None if text == "" else float(text)


def read_csv_report(path) -> List[SweepRow]:
    """Parse a CSV written by :func:`emit_report` back into rows."""
    rows = []
    with Path(path).open(newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
            raise ValueError(f"{path}: unexpected columns {reader.fieldnames}")
        for rec in reader:
            flags, error = [], None
            for flag in filter(None, rec["flags"].split("|")):
                if flag.startswith("error="):
                    error = flag[len("error="):]
                else:
                    flags.append(flag)
            hyp = {"true": True, "false": False, "": None}[rec["hyp_ok"]]
            rows.append(SweepRow(
                rec["entry"], rec["params"], float(rec["a"]), float(rec["b"]), float(rec["x"]),
                _parse_num(rec["p"]), _parse_num(rec["q"]), rec["theorem"], rec["variant"],
                float(rec["lhs"]), float(rec["rhs"]), float(rec["slack"]), float(rec["ratio"]),
                hyp, tuple(flags), error=error,
            ))
    return rows
