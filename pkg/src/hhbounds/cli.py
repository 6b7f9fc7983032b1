"""Command-line front end.

Exit codes: 0 when every check passed, 1 when at least one bound was violated
or an identity residual was too large, 2 for usage and configuration errors.
Summaries go to stdout; sweep reports are written to files only.
"""

from __future__ import annotations

import argparse
import sys

from .bounds import ORDER, evaluate_bound
from .catalog import FAMILIES, catalog_list, make_family
from .errors import ConfigError, DomainError, PreconditionError
from .hypotheses import DEFAULT_GRID_N, check_hypotheses
from .identities import EvalConfig, lemma1_check, lemma2_check
from .kernels import HolderPair
from .quadrature import DEFAULT_TOL
from .sweep import SweepConfig, emit_report, run_sweep, tightness_search

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
_FAMILY_FLAGS = ("c", "alpha", "beta", "m", "c0")
_THEOREM_CHOICES = ("1", "2", "3", "4", "5", "c1", "c3")


def _g(value) -> str:
    return format(value, ".9g")


def _add_family(parser):
    parser.add_argument("--family", required=True, choices=sorted(FAMILIES))
    for name in _FAMILY_FLAGS:
        parser.add_argument(f"--{name}", type=float, default=None)
    parser.add_argument("--params", default=None,
                        help="extra family parameters as key=value[,key=value]")


def _add_interval(parser, with_x=True):
    parser.add_argument("--a", type=float, required=True)
    parser.add_argument("--b", type=float, required=True)
    if with_x:
        parser.add_argument("--x", type=float, required=True)
    parser.add_argument("--tol", type=float, default=DEFAULT_TOL)


def _add_exponents(parser):
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--p", type=float)
    group.add_argument("--q", type=float)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hhbounds",
        description="Verify Hermite-Hadamard type bounds for geometrically convex functions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    cat = sub.add_parser("catalog", help="inspect the built-in function catalog")
    cat.add_argument("action", choices=["list"])

    chk = sub.add_parser("check", help="sampled hypothesis check of |f^(order)|^q")
    _add_family(chk)
    _add_interval(chk, with_x=False)
    chk.add_argument("--q", type=float, required=True)
    chk.add_argument("--order", choices=["1", "2"], required=True)
    chk.add_argument("--grid-n", type=int, default=DEFAULT_GRID_N)

    ident = sub.add_parser("identity", help="check one of the two integral identities")
    ident.add_argument("--lemma", choices=["1", "2"], required=True)
    ident.add_argument("--variant", choices=["corrected", "paper-literal"], default="corrected")
    _add_family(ident)
    _add_interval(ident)

    bnd = sub.add_parser("bound", help="evaluate one bound at one point")
    bnd.add_argument("--theorem", choices=_THEOREM_CHOICES, required=True)
    bnd.add_argument("--variant", choices=["standard", "paper-literal"], default="standard")
    _add_family(bnd)
    _add_interval(bnd)
    _add_exponents(bnd)

    swp = sub.add_parser("sweep", help="run a parameter sweep from a JSON config")
    swp.add_argument("--config", required=True)
    swp.add_argument("--out", required=True)
    swp.add_argument("--format", choices=["csv", "json"], default="csv")
    swp.add_argument("--jobs", type=int, default=None, help="override the config's parallelism")

    tight = sub.add_parser("tightness", help="maximise lhs/rhs over x")
    tight.add_argument("--theorem", choices=_THEOREM_CHOICES, required=True)
    tight.add_argument("--variant", choices=["standard", "paper-literal"], default="standard")
    _add_family(tight)
    _add_interval(tight, with_x=False)
    _add_exponents(tight)
    tight.add_argument("--coarse-n", type=int, default=33)
    tight.add_argument("--iters", type=int, default=20)
    return parser


def _triple(args):
    params = {name: getattr(args, name) for name in _FAMILY_FLAGS if getattr(args, name) is not None}
    if args.params:
        for item in args.params.split(","):
            key, sep, value = item.partition("=")
            if not sep:
                raise DomainError(f"--params item {item!r} is not key=value")
            params[key.strip()] = float(value)
    return make_family(args.family, **params)


def _theorem(label: str) -> str:
    return label.upper() if label.startswith("c") else f"T{label}"


def _exps(theorem: str, args) -> HolderPair:
    if theorem in ("T1", "T2", "T4"):
        return HolderPair.holder(args.p) if args.p is not None else HolderPair.holder_from_q(args.q)
    if args.p is not None:
        return HolderPair.holder(args.p)
    return HolderPair.power_mean(args.q)


def _variant(label: str) -> str:
    return label.replace("-", "_")


def _cmd_catalog(args):
    for entry in catalog_list():
        notes = ", ".join(f"{k}={v}" for k, v in entry.triple.hypothesis_notes.items())
        print(f"{entry.name:32s} {entry.intended_role:22s} {notes}")
    return EXIT_OK


def _cmd_check(args):
    order = "first" if args.order == "1" else "second"
    rep = check_hypotheses(_triple(args), args.a, args.b, args.q, order, args.grid_n)
    print(f"passed: {rep.passed}")
    print(f"worst_violation: {_g(rep.worst_violation)}  (tolerance {_g(rep.tolerance)})")
    print(f"witness: {rep.witness}")
    print(f"samples: {rep.samples_used}")
    return EXIT_OK if rep.passed else EXIT_FAIL


def _cmd_identity(args):
    triple = _triple(args)
    cfg = EvalConfig(args.a, args.b, args.x)
    if args.lemma == "1":
        rep = lemma1_check(triple, cfg, args.tol)
    else:
        rep = lemma2_check(triple, cfg, args.tol, _variant(args.variant))
    print(f"identity: L{rep.lemma} ({rep.variant})  f = {triple.name}")
    print(f"lhs: {_g(rep.lhs)}")
    print(f"rhs: {_g(rep.rhs)}")
    print(f"residual: {_g(rep.residual)}")
    return EXIT_OK if rep.ok else EXIT_FAIL


def _print_bound(rep, name):
    print(f"theorem: {rep.theorem} ({rep.variant})  f = {name}")
    print(f"x: {_g(rep.cfg.x)}")
    print(f"lhs: {_g(rep.lhs)}")
    print(f"rhs: {_g(rep.rhs)}")
    print(f"slack: {_g(rep.slack)}")
    print(f"ratio: {_g(rep.ratio)}")
    print(f"hypotheses: {'passed' if rep.hyp_ok else 'FAILED'}")
    if rep.flags:
        print(f"flags: {', '.join(sorted(rep.flags))}")
    print("status: " + ("VIOLATION" if rep.violated else "ok"))


def _cmd_bound(args):
    triple = _triple(args)
    theorem = _theorem(args.theorem)
    cfg = EvalConfig(args.a, args.b, args.x, _exps(theorem, args))
    rep = evaluate_bound(theorem, triple, cfg, args.tol, _variant(args.variant))
    _print_bound(rep, triple.name)
    return EXIT_FAIL if rep.violated else EXIT_OK


def _cmd_sweep(args):
    config = SweepConfig.load(args.config)
    if args.jobs is not None:
        config = SweepConfig(**{**config.__dict__, "parallelism": args.jobs})
    rows, summary = run_sweep(config)
    emit_report(rows, summary, args.format, args.out)
    print(f"rows: {summary.rows}  passed: {summary.passed}  violations: {summary.violations}  "
          f"degenerate: {summary.degenerate}  hyp_fail: {summary.hyp_fail}  errors: {summary.errors}")
    if summary.min_slack is not None:
        row = rows[summary.min_slack_row]
        print(f"min slack: {_g(summary.min_slack)} at {row.theorem} {row.entry} "
              f"[{_g(row.a)}, {_g(row.b)}] x={_g(row.x)}")
        row = rows[summary.max_ratio_row]
        print(f"max ratio: {_g(summary.max_ratio)} at {row.theorem} {row.entry} "
              f"[{_g(row.a)}, {_g(row.b)}] x={_g(row.x)}")
    print(f"report: {args.out}")
    return EXIT_OK if summary.violations == 0 and summary.errors == 0 else EXIT_FAIL


def _cmd_tightness(args):
    triple = _triple(args)
    theorem = _theorem(args.theorem)
    exps = _exps(theorem, args)
    row = tightness_search(theorem, triple, (args.a, args.b), exps, args.coarse_n, args.iters,
                           _variant(args.variant), args.tol)
    print(f"theorem: {row.theorem} ({row.variant})  f = {row.entry}")
    print(f"x*: {_g(row.x)}")
    print(f"lhs: {_g(row.lhs)}")
    print(f"rhs: {_g(row.rhs)}")
    print(f"slack: {_g(row.slack)}")
    print(f"ratio: {_g(row.ratio)}")
    if row.flags:
        print(f"flags: {', '.join(row.flags)}")
    return EXIT_OK if row.ratio <= 1 + 1e-12 else EXIT_FAIL


_COMMANDS = {
    "catalog": _cmd_catalog,
    "check": _cmd_check,
    "identity": _cmd_identity,
    "bound": _cmd_bound,
    "sweep": _cmd_sweep,
    "tightness": _cmd_tightness,
}


def dispatch(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return _COMMANDS[args.command](args)
    except (ConfigError, DomainError, PreconditionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ArithmeticError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main():
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
