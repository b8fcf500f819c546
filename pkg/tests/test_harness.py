from __future__ import annotations

import json

import pytest

from fodlab.gen import (
    GenParams,
    fd_check,
    fd_error,
    forward_difference_residual,
    gen_polymap,
    is_projection_shape,
)
from fodlab.harness import ALL, UnknownSuite, oracle_suite, run, run_many
from fodlab.poly import Rational
from fodlab.report import SuiteRecorder
from fodlab.syntax import parse_map

Q = Rational
X2 = parse_map("[x0^2] : 1 -> 1")


def test_generation_is_deterministic():
    p = GenParams()
    assert gen_polymap(p, 17, 3, 2, "f") == gen_polymap(p, 17, 3, 2, "f")
    assert gen_polymap(p, 17, 3, 2, "f") != gen_polymap(p.with_(seed=1), 17, 3, 2, "f")


def test_degree_zero_gives_constants():
    p = GenParams(max_degree=0)
    for t in range(50):
        assert gen_polymap(p, t, 3, 2).degree() <= 0


def test_generation_bounds():
    p = GenParams(max_dim=2, max_degree=3, max_terms=2, coeff_bound=5)
    for t in range(200):
        f = gen_polymap(p, t, 2, 2)
        assert f.degree() <= 3
        assert all(len(comp.terms) <= 2 for comp in f.components)
    # like terms merge, so coefficient bounds only hold term-by-term with one term
    single = p.with_(max_terms=1)
    for t in range(200):
        for comp in gen_polymap(single, t, 2, 2).components:
            assert all(abs(c.numerator) <= 5 and c.denominator <= 5 for _, c in comp.terms)
    with pytest.raises(ValueError):
        gen_polymap(p, 0, 3, 1)


def test_degenerate_shapes_appear():
    p = GenParams()
    maps = [gen_polymap(p, t, 2, 2) for t in range(1000)]
    assert any(all(c.is_zero() for c in f.components) for f in maps)
    assert any(is_projection_shape(f) for f in maps)


def test_params_validation():
    with pytest.raises(ValueError):
        GenParams(max_dim=-1)
    with pytest.raises(ValueError):
        GenParams(max_terms=0)


def test_fd_square():
    assert fd_check(X2, [1.0], [1.0], h=1e-4, tol=1e-3)
    assert fd_error(X2, [1.0], [1.0], 1e-4) == pytest.approx(1e-4, rel=1e-6)
    # exactly h in rational arithmetic
    h = Q(1, 10_000)
    assert forward_difference_residual(X2, [Q(1)], [Q(1)], h) == (h,)


def test_fd_halving_step_halves_error():
    h = Q(1, 10_000)
    r1 = forward_difference_residual(X2, [Q(1)], [Q(1)], h)[0]
    r2 = forward_difference_residual(X2, [Q(1)], [Q(1)], h / 2)[0]
    assert r2 / r1 == Q(1, 2)
    ratio = fd_error(X2, [1.0], [1.0], 5e-5) / fd_error(X2, [1.0], [1.0], 1e-4)
    assert ratio == pytest.approx(0.5, rel=1e-6)


def test_fd_linear_is_exact():
    f = parse_map("[3*x0 - x1; x1 + 2] : 2 -> 2")
    assert forward_difference_residual(f, [Q(3, 10), Q(7, 10)], [Q(1), Q(-1, 2)], Q(1, 10_000)) == (0, 0)
    assert fd_error(f, [0.3, 0.7], [1.0, -0.5], 1e-4) < 1e-9


def test_fd_validates_arguments():
    with pytest.raises(ValueError):
        fd_check(X2, [1.0], [1.0], h=0)


def test_run_examples():
    cdc = run("cdc")
    assert cdc.passed and len(cdc.laws) == 5
    eq = run("rdc2cdc").law("equivalence")
    assert eq.passed and eq.trials == 200
    with pytest.raises(UnknownSuite):
        run("bogus")


def test_run_many_all_covers_every_suite():
    small = GenParams(trials=3)
    assert [r.suite for r in run_many("all", small)] == ALL


def test_oracle_suite():
    report = oracle_suite()
    assert report.passed
    assert [(r.law, r.trials) for r in report.laws] == [
        ("dual-number", 200), ("transpose", 200), ("finite-difference", 100)]


def test_reports_are_deterministic():
    a = run("gcdc", GenParams(trials=20)).to_json(timing=False)
    b = run("gcdc", GenParams(trials=20)).to_json(timing=False)
    assert a == b
    assert "wall_time" not in json.loads(a)


def test_mutant_counterexample_is_replayable():
    report = run("mutant-rdc")
    ce = next(r.counterexample for r in report.laws if not r.passed)
    for lit in ce.inputs:
        parse_map(lit)


def test_recorder_keeps_first_counterexample():
    rec = SuiteRecorder("s", {"law": "anchor"})
    rec.check("law", 1, 1)
    rec.check("law", 1, 2, [X2])
    rec.check("law", 3, 4)
    r = rec.report().law("law")
    assert (r.trials, r.passed) == (3, False)
    assert r.counterexample.lhs == "1" and r.counterexample.inputs == ["[x0^2] : 1 -> 1"]


def test_recorder_guarded_turns_errors_into_failures():
    rec = SuiteRecorder("s", {"law": "anchor"})
    rec.guarded("law", lambda: 1 / 0)
    assert not rec.report().passed


def test_report_schema():
    d = run("cdc", GenParams(trials=2)).to_dict()
    law = d["laws"][0]
    assert set(law) >= {"suite", "law", "paper_anchor", "trials", "passed"}
    assert "wall_time" in d
