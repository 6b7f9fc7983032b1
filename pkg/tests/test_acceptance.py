"""Acceptance criteria, each at its stated tolerance.

Tests are named ``test_criterion_<n>_...``; ``conftest.py`` prints one
PASS/FAIL line per criterion at the end of the run.
"""

import json
import math
import time

import numpy as np
import pytest

from hhbounds.bounds import (
    absolute_integrand_bound,
    bound_thm3,
    evaluate_bound,
    midpoint_lhs,
    trapezoid_lhs,
)
from hhbounds.catalog import catalog_list, catalog_lookup, make_family, make_power
from hhbounds.cli import dispatch
from hhbounds.identities import EvalConfig, lemma1_check, lemma2_check
from hhbounds.kernels import HolderPair, kernel_k2, kernel_k3, log_mean
from hhbounds.quadrature import integrate
from hhbounds.sweep import SweepConfig, run_sweep


def _rel(a, b):
    return abs(a - b) / abs(b)


# -- 1 -------------------------------------------------------------------------


def test_criterion_1_kernels_match_quadrature():
    start = time.perf_counter()
    for k in np.geomspace(1e-3, 1e3, 50):
        k3 = integrate(lambda t: t * t * k**t, 0, 1, 1e-15).value
        k2 = integrate(lambda t: (1 - t) * k**t, 0, 1, 1e-15).value
        assert _rel(kernel_k3(k), k3) <= 1e-10, k
        assert _rel(kernel_k2(k), k2) <= 1e-10, k
    rng = np.random.default_rng(20240601)
    for u, v in 10.0 ** rng.uniform(-3, 3, size=(50, 2)):
        ref = integrate(lambda t: u**t * v ** (1 - t), 0, 1, 1e-13 * min(u, v)).value
        assert _rel(log_mean(u, v), ref) <= 1e-10, (u, v)
    assert time.perf_counter() - start < 5


# -- 2 -------------------------------------------------------------------------


def test_criterion_2_limits_within_1e8_for_k_within_1e6():
    # K3'(1) = 1/4 and K2'(1) = 1/6, so the exact kernels already differ from
    # their limits by about 2.5e-7 at |k - 1| = 1e-6; this is expected to fail
    for k in np.linspace(1 - 1e-6, 1 + 1e-6, 41):
        assert abs(kernel_k3(k) - 1 / 3) <= 1e-8, k
        assert abs(kernel_k2(k) - 1 / 2) <= 1e-8, k


def test_criterion_2_branch_switch():
    from hhbounds.kernels import _k2_closed, _k2_series, _k3_closed, _k3_series

    for lk in (-0.1, 0.1):
        assert _rel(_k3_series(lk), _k3_closed(lk)) <= 1e-11
        assert _rel(_k2_series(lk), _k2_closed(lk)) <= 1e-11
        below, above = math.exp(lk * (1 - 1e-15)), math.exp(lk * (1 + 1e-15))
        assert _rel(kernel_k3(below), kernel_k3(above)) <= 1e-11
        assert _rel(kernel_k2(below), kernel_k2(above)) <= 1e-11


# -- 3 -------------------------------------------------------------------------

_POSITIVE_INTERVALS = [(0.5, 1.0), (0.5, 3.0), (1.0, 2.0), (1.0, 5.0), (2.0, 3.0),
                       (2.0, 10.0), (0.1, 0.2), (3.0, 3.5), (0.25, 4.0)]
_ANY_INTERVALS = [(-1.0, 1.0), (-3.0, -1.0), (-2.0, 0.0), (0.0, 1.0), (-0.5, 2.0),
                  (1.0, 2.0), (0.5, 3.0), (-10.0, -9.0), (2.0, 5.0)]
_IDENTITY_ENTRIES = ["power(c=1,alpha=0.5)", "power(c=100,alpha=3)", "exp_reciprocal(beta=1)",
                     "exp_neg", "quadratic(c=1)", "linear(m=1,c0=0)", "constant(c=1)"]


def test_criterion_3_identity_suite():
    start = time.perf_counter()
    checked = set()
    for name in _IDENTITY_ENTRIES:
        triple = catalog_lookup(name)
        intervals = _ANY_INTERVALS if triple.valid_domain[0] == -math.inf else _POSITIVE_INTERVALS
        configs = [EvalConfig.at_position(a, b, r) for a, b in intervals for r in (0.0, 0.35, 1.0)]
        assert len(configs) == 27
        for cfg in configs:
            for rep in (lemma1_check(triple, cfg, 1e-10), lemma2_check(triple, cfg, 1e-10)):
                assert abs(rep.residual) <= 1e-8, (name, cfg, rep)
        checked.add(name)
    assert len(checked) >= 5
    assert any(a <= 0 for a, _ in _ANY_INTERVALS)
    assert time.perf_counter() - start < 10


def test_criterion_3_literal_witness():
    rep = lemma2_check(catalog_lookup("quadratic(c=1)"), EvalConfig(0, 2, 1), 1e-10,
                       "paper_literal")
    assert _rel(rep.residual, 2 * abs(rep.lhs)) <= 1e-6


# -- 4 -------------------------------------------------------------------------


def test_criterion_4_bound_validity_sweep():
    entries = [e.name for e in catalog_list() if e.triple.family in ("power", "exp_reciprocal")]
    config = SweepConfig.from_dict({
        "entries": entries,
        "intervals": [[1, 2], [0.5, 3], [2, 5], [0.1, 0.4]],
        "x_positions": [0, 0.25, 0.5, 0.75, 1],
        "exponents": [[q, "power_mean"] for q in (1, 1.5, 2, 3)]
                     + [[p, "holder"] for p in (1.5, 2, 4)],
        "theorems": ["T1", "T2", "T3", "T4", "T5"],
        "parallelism": 1,
    })
    start = time.perf_counter()
    rows, summary = run_sweep(config)
    elapsed = time.perf_counter() - start
    passing = [r for r in rows if r.hyp_ok]
    assert len(passing) >= 1000
    assert summary.errors == 0
    bad = [r for r in passing if r.slack < -1e-12 * max(1.0, r.rhs)]
    assert not bad, bad[:3]
    assert {r.theorem for r in passing} == {"T1", "T2", "T3", "T4", "T5"}
    assert elapsed < 60


# -- 5 -------------------------------------------------------------------------


def test_criterion_5_errata_demonstration():
    base = {"entries": ["power(c=100,alpha=1)"], "intervals": [[1, 2]], "x_positions": [0.5],
            "exponents": [[2, "power_mean"]], "theorems": ["T3"]}
    _, literal = run_sweep(SweepConfig.from_dict(dict(base, variants=["paper_literal"])))
    _, standard = run_sweep(SweepConfig.from_dict(dict(base, variants=["standard"])))
    assert literal.violations >= 1
    assert standard.violations == 0 and standard.passed == 1


@pytest.mark.parametrize("c", [0.5, 3.0, 100.0])
def test_criterion_5_scale_equivariance(c):
    cfg = EvalConfig(1, 2, 1.5, HolderPair.power_mean(2))
    one, scaled = make_power(1, 1), make_power(c, 1)
    assert _rel(bound_thm3(scaled, cfg).rhs, c * bound_thm3(one, cfg).rhs) <= 1e-12
    lit = bound_thm3(scaled, cfg, variant="paper_literal").rhs
    assert _rel(lit, bound_thm3(one, cfg, variant="paper_literal").rhs) <= 1e-12


# -- 6 -------------------------------------------------------------------------


def test_criterion_6_chain_ordering():
    rng = np.random.default_rng(7)
    families = [("power", lambda: {"c": 10 ** rng.uniform(-1, 2), "alpha": rng.uniform(0.2, 4)}),
                ("exp_reciprocal", lambda: {"beta": rng.uniform(0.2, 3)})]
    done = 0
    while done < 100:
        family, params = families[done % 2]
        triple = make_family(family, **params())
        a = rng.uniform(0.2, 3)
        b = a + rng.uniform(0.05, 4)
        x = a + (b - a) * rng.choice([0.0, rng.uniform(), 1.0], p=[0.1, 0.8, 0.1])
        theorem = ("T2", "T3", "T4", "T5")[done % 4]
        if theorem in ("T2", "T4"):
            exps = HolderPair.holder(rng.uniform(1.2, 5))
        else:
            exps = HolderPair.power_mean(rng.uniform(1, 4))
        cfg = EvalConfig(a, b, x, exps)
        rep = evaluate_bound(theorem, triple, cfg)
        if not rep.hyp_ok:
            continue
        middle = absolute_integrand_bound(theorem, triple, cfg)
        assert middle - rep.lhs >= -1e-10, (theorem, triple.name, cfg)
        assert rep.rhs - middle >= -1e-10, (theorem, triple.name, cfg)
        done += 1


# -- 7 -------------------------------------------------------------------------

_RECIP = make_power(1, 1)
_CFG_H = EvalConfig(1, 2, 1.5, HolderPair.holder(2))
_CFG_P = EvalConfig(1, 2, 1.5, HolderPair.power_mean(2))
# values as listed alongside the bound examples
_LISTED = {"midpoint": 0.0264805, "trapezoid": 0.0568528,
           "T1": 0.1509836, "T2": 0.0456617, "T4": 0.1509836, "T5": 0.1372560}


def test_criterion_7_listed_deviations():
    mid = midpoint_lhs(_RECIP, _CFG_H)
    trap = trapezoid_lhs(_RECIP, _CFG_H)
    assert _rel(mid, _LISTED["midpoint"]) <= 1e-6
    assert _rel(trap, _LISTED["trapezoid"]) <= 1e-6
    # independent recomputation
    assert _rel(mid, math.log(2) - 2 / 3) <= 1e-12
    assert _rel(trap, 0.75 - math.log(2)) <= 1e-12


@pytest.mark.parametrize("theorem", ["T1", "T2", "T4", "T5"])
def test_criterion_7_listed_rhs(theorem):
    cfg = _CFG_P if theorem == "T5" else _CFG_H
    rep = evaluate_bound(theorem, _RECIP, cfg)
    assert _rel(rep.rhs, _LISTED[theorem]) <= 1e-6, rep.rhs


# -- 8 -------------------------------------------------------------------------


def test_criterion_8_repeated_sweeps_are_byte_identical(tmp_path):
    cfg = tmp_path / "sweep.json"
    cfg.write_text(json.dumps({
        "entries": ["power(c=1,alpha=1)", "exp_reciprocal(beta=1)", "power(c=100,alpha=1)"],
        "intervals": [[1, 2], [0.5, 3]],
        "x_positions": [0, 0.3, 1],
        "exponents": [[2, "holder"], [2, "power_mean"]],
        "theorems": ["T1", "T2", "T3", "T4", "T5", "lemmas"],
        "variants": ["standard", "paper_literal"],
    }))
    outputs = []
    for i, jobs in enumerate(("1", "1", "4")):
        out = tmp_path / f"run{i}.csv"
        dispatch(["sweep", "--config", str(cfg), "--out", str(out), "--jobs", jobs])
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1] == outputs[2]


def test_criterion_8_cli_exit_codes(tmp_path, capsys):
    assert dispatch(["identity", "--lemma", "2", "--variant", "paper-literal",
                     "--family", "quadratic", "--a", "0", "--b", "2", "--x", "1"]) == 1
    assert "residual: 1.33333333" in capsys.readouterr().out
    assert dispatch(["bound", "--theorem", "4", "--family", "power", "--c", "1", "--alpha", "1",
                     "--a", "1", "--b", "2", "--x", "1.5", "--p", "2"]) == 0
    assert dispatch(["sweep", "--config", str(tmp_path / "missing.json"),
                     "--out", str(tmp_path / "out.csv")]) == 2
