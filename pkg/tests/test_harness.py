import json
import math

import numpy as np
import pytest

from realitykit import harness as h
from realitykit.reality import RealityQuantifierSpec


def _strip(report):
    d = report.to_dict(timing=False)
    return json.dumps(d, sort_keys=True)


def test_seed_streams_are_per_check():
    a = h.sample_seeds("axiom2.chain.vN", 0, 5)
    assert a == h.sample_seeds("axiom2.chain.vN", 0, 5)
    assert a != h.sample_seeds("axiom3a.discard.vN", 0, 5)
    assert a != h.sample_seeds("axiom2.chain.vN", 1, 5)


def test_run_check_records_worst_case():
    def sample(rng):
        v = float(rng.uniform())
        return v - 0.5, {"v": v}

    rep = h.run_check("demo", sample, 50, 0, 0.49)
    assert rep.samples == 50
    assert rep.passed is (rep.worst_violation <= 0.49)
    again = h.run_check("demo", sample, 50, 0, 0.49)
    assert _strip(rep) == _strip(again)


def test_expected_failure_needs_a_witness():
    rep = h.run_check("neg", lambda rng: (0.0, {}), 3, 0, 1e-9, expect="fails",
                      witness=lambda: (1.0, {"note": "constructed"}))
    assert not rep.passed
    assert rep.witness["kind"] == "targeted"
    assert rep.ok
    none = h.run_check("neg", lambda rng: (0.0, {}), 3, 0, 1e-9, expect="fails")
    assert not none.ok
    probe = h.run_check("probe", lambda rng: (1.0, {}), 3, 0, 1e-9, expect="open")
    assert probe.ok and not probe.passed


def test_report_schema():
    rep = h.check_theorem1(batch=5, seed=1)
    d = rep.to_dict()
    for key in ("id", "pass", "worst_violation", "worst_case_seed", "samples", "elapsed_ms"):
        assert key in d
    assert json.loads(h.reports_to_jsonl([rep]))["id"] == "theorem1.commutation"


def test_inf_is_serialised():
    rep = h.PropertyReport("x", False, math.inf, None, 1, 0.0)
    assert rep.to_dict()["worst_violation"] == "inf"


@pytest.mark.parametrize("spec", [RealityQuantifierSpec("vN"), RealityQuantifierSpec("renyiDown", 0.3),
                                  RealityQuantifierSpec("renyiDown", 0.7)])
def test_axiom1_identity_holds(spec):
    rep = h.check_axiom1_flow(spec, batch=30, seed=2)
    assert rep.passed, rep.to_dict()


def test_axiom1_tsallis_ratio_is_dimension_power():
    spec = RealityQuantifierSpec("tsallis", 0.5)
    rep = h.check_axiom1_flow(spec, batch=20, seed=0)
    # the reality side carries d_A^{1-q} relative to the environment side
    assert rep.extras["ratio_R_over_I_min"] == pytest.approx(math.sqrt(2), rel=1e-8)
    assert rep.extras["ratio_R_over_I_max"] == pytest.approx(math.sqrt(2), rel=1e-8)


def test_axiom_suite_small_batch_is_consistent():
    specs = (RealityQuantifierSpec("vN"), RealityQuantifierSpec("maxRel"), RealityQuantifierSpec("minRel"))
    reports = h.check_axiom_suite(specs, batch=20, seed=3, axioms=("axiom2", "axiom4", "axiom5", "axiom7"))
    by_id = {r.id: r for r in reports}
    assert all(r.ok for r in reports), [r.id for r in reports if not r.ok]
    assert by_id["axiom5.mixing.maxRel"].witness is not None
    assert by_id["axiom2.chain.minRel"].witness is not None
    assert by_id["axiom4.uncertainty.minRel"].witness is not None


def test_lemmas_and_theorem_small_batch():
    reports = h.check_lemmas_and_theorem(batch=10, seed=0)
    assert all(r.ok for r in reports), [r.to_dict() for r in reports if not r.ok]


def test_run_all_filter_runs_only_requested():
    reports = h.run_all(batch=10, seed=0, only=["theorem1", "stinespring"])
    assert [r.id for r in reports] == ["theorem1.commutation", "stinespring.trace"]


def test_run_all_is_deterministic():
    a = h.run_all(batch=10, seed=4, only=["axiom6", "lemma2"])
    b = h.run_all(batch=10, seed=4, only=["axiom6", "lemma2"])
    assert [_strip(r) for r in a] == [_strip(r) for r in b]


def test_table1_small_batch():
    reports = [r for r in h.check_table1(batch=8, seed=0) if r.id.startswith("table1.")]
    assert len(reports) > 60
    bad = [r.id for r in reports if not r.ok]
    assert not bad, bad


def test_parameter_limit_deviation_is_the_slope():
    # |D_{1+-h} - D| can exceed 1e-4 only through the first-order term h D'(1);
    # the residual after removing it is second order
    rep = h.check_parameter_limits(batch=40, seed=0)
    assert rep.extras["max_after_slope"] <= 1e-7


@pytest.mark.slow
def test_sibson_identity_small_batch():
    rep = h.check_sibson_identity(batch=3, seed=0)
    assert rep.passed, rep.to_dict()
