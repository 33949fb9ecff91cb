import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from realitykit import closed_forms as cf
from realitykit.channels import monitoring, phi_A
from realitykit.divergences import discord_A, entropy, ln_q
from realitykit.errors import AlphaOutOfRange, LayoutMismatch, QOutOfRange
from realitykit.qstate import (
    DensityOperator,
    ProjectiveObservable,
    classical_quantum_state,
    kron,
    maximally_mixed,
    partial_trace,
    random_density,
    random_observable,
    singlet,
    werner_state,
)
from realitykit.reality import (
    RealityQuantifierSpec,
    irreality,
    max_value,
    reality,
    reality_renyi_bar,
    reality_renyi_down,
    reality_renyi_up,
    reality_special,
    reality_tsallis,
    reality_vn,
    table_ii_expectation,
    uncertainty_bound,
)

LN2 = math.log(2)
EPS_GRID = np.linspace(0, 1, 21)


# ---------------------------------------------------------------------------
# Specs
# ---------------------------------------------------------------------------


def test_spec_ranges_by_mode():
    with pytest.raises(AlphaOutOfRange):
        RealityQuantifierSpec("renyiDown", 1.5)
    with pytest.raises(AlphaOutOfRange):
        RealityQuantifierSpec("sandwiched", 0.4)
    with pytest.raises(QOutOfRange):
        RealityQuantifierSpec("tsallis", 2.5)
    with pytest.raises(AlphaOutOfRange):
        RealityQuantifierSpec("renyiUp", 1.5, "exploratory")
    loose = RealityQuantifierSpec("renyiDown", 1.5, "exploratory")
    assert not loose.guaranteed
    assert RealityQuantifierSpec("tsallis", 2.0).guaranteed
    assert not RealityQuantifierSpec("maxRel").guaranteed
    assert RealityQuantifierSpec("renyiDown", 1 + 1e-7).guaranteed
    with pytest.raises(ValueError):
        RealityQuantifierSpec("bogus")


def test_exploratory_values_are_tagged():
    val = reality_renyi_down(werner_state(0.3), ProjectiveObservable.spin(0, 0), 2.0, "exploratory")
    assert not val.guaranteed
    assert val.value == pytest.approx(cf.werner_renyi_down(2.0, 0.3), abs=1e-12)


@pytest.mark.parametrize("axiom,spec,expected", [
    ("axiom5", RealityQuantifierSpec("maxRel"), "fails"),
    ("axiom7", RealityQuantifierSpec("renyiDown", 0.5), "open"),
    ("axiom6", RealityQuantifierSpec("tsallis", 0.5), "fails"),
    ("axiom3a", RealityQuantifierSpec("renyiDown", 0.5), "holds"),
    ("axiom2", RealityQuantifierSpec("minRel"), "fails"),
    ("axiom5", RealityQuantifierSpec("sandwiched", 0.75), "holds"),
    ("axiom7", RealityQuantifierSpec("vN"), "holds"),
])
def test_table_two(axiom, spec, expected):
    assert table_ii_expectation(axiom, spec) == expected


def test_max_value():
    assert max_value(RealityQuantifierSpec("vN"), 3) == pytest.approx(math.log(3))
    assert max_value(RealityQuantifierSpec("tsallis", 2.0), 2) == pytest.approx(0.5)


# ---------------------------------------------------------------------------
# Von Neumann reality and irreality
# ---------------------------------------------------------------------------


def test_reality_vn_examples(sz):
    rho_b = random_density(3, seed=1)
    for s in range(5):
        obs = random_observable(2, seed=s)
        assert reality_vn(kron(maximally_mixed(2), rho_b), obs).value == pytest.approx(LN2, abs=1e-12)
        assert reality_vn(singlet(), obs).value == pytest.approx(0.0, abs=1e-12)
    rho = random_density(6, seed=2, dims=(2, 3))
    assert reality_vn(phi_A(rho, sz), sz).value == pytest.approx(LN2, abs=1e-12)
    with pytest.raises(LayoutMismatch):
        reality_vn(rho, random_observable(3))


@given(st.integers(0, 10**6))
@settings(max_examples=40, deadline=None)
def test_reality_vn_entropy_form_and_complementarity(seed):
    rho = random_density(6, seed=seed, dims=(2, 3))
    obs = random_observable(2, seed=seed)
    r = reality_vn(rho, obs).value
    assert r == pytest.approx(LN2 - (entropy(phi_A(rho, obs)) - entropy(rho)), abs=1e-10)
    assert r + irreality(rho, obs) == pytest.approx(LN2, abs=1e-12)
    local = irreality(partial_trace(rho, keep=[0]), obs)
    assert irreality(rho, obs) == pytest.approx(local + discord_A(rho, obs), abs=1e-10)


def test_irreality_examples(sx, sz):
    assert irreality(singlet(), sz) == pytest.approx(LN2, abs=1e-12)
    assert irreality(partial_trace(singlet(), keep=[0]), sz) == pytest.approx(0.0, abs=1e-12)
    assert discord_A(singlet(), sz) == pytest.approx(LN2, abs=1e-12)
    cq = classical_quantum_state((0.3, 0.7), [random_density(2, seed=1)] * 2, sz)
    assert irreality(cq, sz) == pytest.approx(0.0, abs=1e-12)
    rho = DensityOperator(np.diag([0.8, 0.2]))
    h = -(0.8 * math.log(0.8) + 0.2 * math.log(0.2))
    assert irreality(rho, sx) == pytest.approx(LN2 - h, abs=1e-12)


# ---------------------------------------------------------------------------
# Renyi family
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("alpha", [1 / 8, 1 / 4, 1 / 2, 0.9])
def test_renyi_down_werner_closed_form(alpha, sz):
    for eps in EPS_GRID:
        num = reality_renyi_down(werner_state(eps), sz, alpha).value
        assert num == pytest.approx(cf.werner_renyi_down(alpha, eps), abs=1e-10)
    assert reality_renyi_down(werner_state(0.0), sz, alpha).value == pytest.approx(LN2, abs=1e-12)
    assert reality_renyi_down(werner_state(1.0), sz, alpha).value == pytest.approx(0.0, abs=1e-10)


def test_werner_is_rotation_invariant():
    for s in range(5):
        obs = random_observable(2, seed=s)
        assert reality_renyi_down(werner_state(0.4), obs, 0.3).value == pytest.approx(
            cf.werner_renyi_down(0.3, 0.4), abs=1e-10)


@given(st.integers(0, 10**6))
@settings(max_examples=25, deadline=None)
def test_renyi_down_order_and_limit(seed):
    rho = random_density(4, seed=seed, dims=(2, 2))
    obs = random_observable(2, seed=seed)
    vals = [reality_renyi_down(rho, obs, a).value for a in (0.1, 0.3, 0.5, 0.7, 0.9)]
    assert np.all(np.diff(vals) <= 1e-9)
    assert all(-1e-10 <= v <= LN2 + 1e-10 for v in vals)


def test_renyi_up_examples(sz):
    for a in (0.2, 0.5, 0.8):
        assert reality_renyi_up(singlet(), sz, a).value == pytest.approx(0.0, abs=1e-12)
        assert reality_renyi_up(werner_state(0.0), sz, a).value == pytest.approx(LN2, abs=1e-12)


@pytest.mark.parametrize("alpha", [0.2, 0.5, 0.8])
def test_renyi_up_identity_matches_dilation(alpha):
    for s in range(10):
        dims = (2, 3) if s % 2 else (3, 2)
        rho = random_density(6, seed=s, dims=dims)
        obs = random_observable(dims[0], seed=s)
        a = reality_renyi_up(rho, obs, alpha, via="identity").value
        b = reality_renyi_up(rho, obs, alpha, via="dilation").value
        assert a == pytest.approx(b, abs=1e-10)


def test_renyi_up_werner_derived_chi(sz):
    for a in (0.24, 0.5, 0.9):
        for eps in EPS_GRID:
            num = reality_renyi_up(werner_state(eps), sz, a).value
            assert num == pytest.approx(cf.werner_renyi_up(a, eps, "derived"), abs=1e-10)


def test_printed_chi_is_inconsistent_at_singlet():
    # the printed bracket gives a nonzero up-arrow reality for the singlet
    assert cf.werner_renyi_up(0.5, 1.0, "derived") == pytest.approx(0.0, abs=1e-14)
    assert cf.werner_renyi_up(0.5, 1.0, "printed") > LN2


def test_renyi_up_rejects_alpha_above_one(sz):
    with pytest.raises(AlphaOutOfRange):
        reality_renyi_up(singlet(), sz, 1.5)


def test_renyi_bar_reality_state_is_maximal(sz):
    cq = classical_quantum_state((0.4, 0.6), [random_density(2, seed=1), random_density(2, seed=2)], sz)
    val = reality_renyi_bar(cq, sz, 0.5, seed=0)
    assert val.value == pytest.approx(LN2, abs=1e-6)


@pytest.mark.slow
def test_renyi_bar_sandwiched_on_werner(sz):
    rho = werner_state(0.6)
    bar = reality_renyi_bar(rho, sz, 0.5, seed=0).value
    down = cf.werner_renyi_down(0.5, 0.6)
    up = cf.werner_renyi_up(0.5, 0.6)
    assert down - 1e-9 <= bar <= up + 1e-6


@pytest.mark.slow
def test_renyi_bar_near_one_matches_down():
    rho = random_density(4, seed=3, dims=(2, 2))
    obs = random_observable(2, seed=3)
    bar = reality_renyi_bar(rho, obs, 1 - 1e-5, seed=0).value
    assert bar == pytest.approx(reality_renyi_down(rho, obs, 1 - 1e-5).value, abs=1e-4)


# ---------------------------------------------------------------------------
# Tsallis and special members
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("q", [0.5, 1.5, 2.0])
def test_tsallis_werner(q, sz):
    assert reality_tsallis(werner_state(0.0), sz, q).value == pytest.approx(ln_q(2, q), abs=1e-12)
    for eps in EPS_GRID:
        assert reality_tsallis(werner_state(eps), sz, q).value == pytest.approx(cf.werner_tsallis(q, eps), abs=1e-10)
    assert reality_tsallis(werner_state(0.5), sz, 2.0).value == pytest.approx(cf.werner_tsallis(2.0, 0.5), abs=1e-12)


def test_tsallis_q_ordering_on_werner(sz):
    qs = (0.3, 0.5, 0.9, 1.2, 1.5, 2.0)
    for eps in EPS_GRID:
        vals = [reality_tsallis(werner_state(eps), sz, q).value for q in qs]
        assert np.all(np.diff(vals) <= 1e-9)


def test_limits_recover_vn():
    for s in range(10):
        rho = random_density(4, seed=s, dims=(2, 2))
        obs = random_observable(2, seed=s)
        vn = reality_vn(rho, obs).value
        for p in (1 - 1e-5, 1 + 1e-5):
            mode = "monotone" if p < 1 else "exploratory"
            assert reality_renyi_down(rho, obs, p, mode).value == pytest.approx(vn, abs=1e-4)
            assert reality_tsallis(rho, obs, p).value == pytest.approx(vn, abs=1e-4)


def test_special_members(sz):
    fixed = phi_A(random_density(4, seed=1, dims=(2, 2)), sz)
    for kind, a in (("minRel", None), ("maxRel", None), ("sandwiched", 0.75)):
        assert reality_special(fixed, sz, kind, a).value == pytest.approx(LN2, abs=1e-10)
    for eps in EPS_GRID:
        rho = werner_state(eps)
        assert reality_special(rho, sz, "sandwiched", 0.6).value == pytest.approx(
            reality_renyi_down(rho, sz, 0.6).value, abs=1e-10)
        assert reality_special(rho, sz, "maxRel").value == pytest.approx(cf.werner_max_rel(eps), abs=1e-10)
        assert reality_special(rho, sz, "minRel").value == pytest.approx(cf.werner_min_rel(eps), abs=1e-10)
    with pytest.raises(ValueError):
        reality_special(fixed, sz, "vN")


def test_min_rel_saturates_off_reality_states(sz):
    # full-rank but not Phi_A-fixed: minRel reality still reports the maximum
    rho = random_density(4, seed=2, dims=(2, 2))
    assert reality_vn(rho, sz).value < LN2 - 1e-3
    assert reality_special(rho, sz, "minRel").value == pytest.approx(LN2, abs=1e-12)


def test_dispatcher_matches_direct_calls(sz):
    rho = random_density(4, seed=4, dims=(2, 2))
    assert reality(rho, sz, RealityQuantifierSpec("renyiDown", 0.3)).value == reality_renyi_down(rho, sz, 0.3).value
    assert reality(rho, sz, RealityQuantifierSpec("tsallis", 1.5)).value == reality_tsallis(rho, sz, 1.5).value
    assert reality(rho, sz, RealityQuantifierSpec("maxRel")).value == reality_special(rho, sz, "maxRel").value


# ---------------------------------------------------------------------------
# Axiom 2 chain and the uncertainty relation
# ---------------------------------------------------------------------------


@given(st.integers(0, 10**6), st.floats(0, 1))
@settings(max_examples=40, deadline=None)
def test_monitoring_chain_and_gain(seed, eps):
    rho = random_density(6, seed=seed, dims=(2, 3))
    obs = random_observable(2, seed=seed)
    before = reality_vn(rho, obs).value
    after = reality_vn(monitoring(rho, obs, eps), obs).value
    assert before <= after + 1e-9 <= LN2 + 2e-9
    assert after - before >= eps * irreality(rho, obs) - 1e-9


def test_uncertainty_examples(sz, sx):
    rho = kron(maximally_mixed(2), random_density(2, seed=1))
    out = uncertainty_bound(rho, sz, sx, grid=8)
    assert out.lhs == pytest.approx(2 * LN2, abs=1e-12)
    assert out.lhs == pytest.approx(out.bound, abs=1e-12)
    assert out.holds
    sing = uncertainty_bound(singlet(), sz, sx, grid=8)
    assert sing.lhs == pytest.approx(0.0, abs=1e-12)
    assert sing.discord == pytest.approx(LN2, abs=1e-8)
    assert sing.holds
    cq = classical_quantum_state((0.3, 0.7), [random_density(2, seed=1)] * 2, sz)
    sat = uncertainty_bound(cq, sz, ProjectiveObservable.spin(0, 0), grid=8)
    assert sat.lhs == pytest.approx(sat.bound, abs=1e-12)
    with pytest.raises(LayoutMismatch):
        uncertainty_bound(singlet(), sz, ProjectiveObservable.spin(0, 0, subsystem=1))
