"""Property-based checks over random sources, aux channels and channels."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hierleak import dmc, oracle, prob, properties, region, scenarios

seeds = st.integers(0, 2**32 - 1)
alph = st.integers(2, 3)


def random_pair(seed, n_s, sizes):
    rng = np.random.default_rng(seed)
    sc = scenarios.random_scenario(rng, n_s, 2, 2)
    return sc, scenarios.random_aux(rng, n_s, sizes)


@settings(max_examples=60, deadline=None)
@given(seeds, alph, st.tuples(alph, alph, alph))
def test_chain_rule_and_nonnegativity(seed, n_s, sizes):
    sc, aux = random_pair(seed, n_s, sizes)
    j = prob.assemble_joint(sc.src, aux)
    lhs = prob.mutual_info(j, ["U", "V"], "S")
    rhs = prob.mutual_info(j, "U", "S") + prob.cond_mutual_info(j, "V", "S", "U")
    assert lhs == pytest.approx(rhs, abs=1e-10)
    for v in region.info_terms(j.mass).values():
        assert v >= -1e-12


@settings(max_examples=60, deadline=None)
@given(seeds, alph, st.tuples(alph, alph, alph))
def test_degradedness_orders_side_info(seed, n_s, sizes):
    sc, aux = random_pair(seed, n_s, sizes)
    j = prob.assemble_joint(sc.src, aux)
    # E is a degraded version of T, for every conditioning on the description
    assert prob.cond_mutual_info(j, "V", "T", "U") >= prob.cond_mutual_info(j, "V", "E", "U") - 1e-12
    assert prob.mutual_info(j, "S", "T") >= prob.mutual_info(j, "S", "E") - 1e-12


@settings(max_examples=100, deadline=None)
@given(seeds, alph, st.tuples(alph, alph, alph))
def test_hard_invariants(seed, n_s, sizes):
    sc, aux = random_pair(seed, n_s, sizes)
    eq, ident, incl = (properties.SuiteResult(x) for x in ("eq", "id", "incl"))
    properties.pair_checks(sc, aux, eq, ident, incl)
    assert eq.ok and ident.ok and incl.ok


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_leakage_bound_at_least_side_info(seed):
    sc, aux = random_pair(seed, 2, (2, 2, 2))
    p = region.evaluate_point(aux, sc)
    assert p.leakage_lb >= p.terms["I(S;E)"] - 1e-12


@settings(max_examples=25, deadline=None)
@given(seeds, st.tuples(alph, alph, alph))
def test_fast_cmi_matches_brute(seed, sizes):
    sc, aux = random_pair(seed, 2, sizes)
    j = prob.assemble_joint(sc.src, aux)
    assert prob.cond_mutual_info(j, ["W", "V"], "S", ["T", "U"]) == pytest.approx(
        oracle.brute_mi(j, ["W", "V"], "S", ["T", "U"]), abs=1e-10)


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(2, 4), st.integers(2, 4))
def test_capacity_invariances(seed, n_in, n_out):
    rng = np.random.default_rng(seed)
    w = rng.dirichlet(np.ones(n_out), size=n_in)
    c = dmc.capacity(dmc.Channel(w), tol=1e-10).capacity
    assert -1e-12 <= c <= np.log2(min(n_in, n_out)) + 1e-9
    perm = dmc.capacity(dmc.Channel(w[rng.permutation(n_in)][:, rng.permutation(n_out)]),
                        tol=1e-10).capacity
    assert perm == pytest.approx(c, abs=1e-8)
    # a duplicated input row adds nothing
    dup = dmc.capacity(dmc.Channel(np.vstack([w, w[:1]])), tol=1e-10).capacity
    assert dup == pytest.approx(c, abs=1e-8)


def test_verify_suites_reproducible(dsbs_sc):
    a = {k: v.to_dict() for k, v in properties.invariant_suites(dsbs_sc, 50, seed=3).items()}
    b = {k: v.to_dict() for k, v in properties.invariant_suites(dsbs_sc, 50, seed=3).items()}
    assert a == b and all(v["ok"] for v in a.values())


def test_gap_check_skipped_when_phase2_weaker():
    sc = scenarios.dsbs_scenario(ch2=dmc.bsc(0.2))
    res = properties.r1_r2_gaps(sc, [(0.1, 0.05)])
    assert res.skipped and res.checked == 0
