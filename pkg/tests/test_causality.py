from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from commoncause import greechie
from commoncause.causality import (
    CONDITIONS,
    CommonCauseCheck,
    NotCorrelated,
    anticorrelated_pairs,
    check_common_cause,
    correlated_pairs,
    correlation_from_atoms,
    correlation_witness,
    find_common_causes,
    has_nontrivial_common_cause,
    is_common_cause_closed,
)
from commoncause.lattice import build_boolean, build_mo
from commoncause.states import measure_from_atom_weights, random_state

from conftest import CANONICAL, atom_weights
from oracle import BooleanSpace, mask_to_set, set_to_mask

NAMES = "pqrst"
B3 = build_boolean(list("pqr"))


def canonical():
    return measure_from_atom_weights(B3, CANONICAL)


def boolean_case(k, weights):
    L = build_boolean(list(NAMES[:k]))
    m = measure_from_atom_weights(L, weights)
    space = BooleanSpace(dict(zip(NAMES[:k], weights)))
    return L, m, space


boolean_cases = st.integers(1, 4).flatmap(lambda k: st.tuples(st.just(k), atom_weights(k, positive=False)))


# --- against the brute-force oracle ------------------------------------------------

@settings(max_examples=40, deadline=None)
@given(boolean_cases)
def test_correlated_pairs_match_oracle(t):
    L, m, space = boolean_case(*t)
    names = NAMES[: t[0]]
    got = {(mask_to_set(names, w.a), mask_to_set(names, w.b)) for w in correlated_pairs(L, m)}
    want = {tuple(sorted(pair, key=lambda e: set_to_mask(names, e))) for pair in space.correlated_pairs()}
    assert got == want


@settings(max_examples=30, deadline=None)
@given(boolean_cases)
def test_common_causes_match_oracle(t):
    L, m, space = boolean_case(*t)
    names = NAMES[: t[0]]
    for w in correlated_pairs(L, m):
        a, b = mask_to_set(names, w.a), mask_to_set(names, w.b)
        got = [mask_to_set(names, c.c) for c in find_common_causes(L, m, w.a, w.b, require_nontrivial=False)]
        assert got == sorted(space.causes(a, b, nontrivial=False), key=lambda e: set_to_mask(names, e))
        for c in L.elements():
            check = check_common_cause(L, m, w.a, w.b, c)
            assert check.failure == space.failing_condition(a, b, mask_to_set(names, c))


@settings(max_examples=40, deadline=None)
@given(boolean_cases)
def test_closedness_matches_oracle(t):
    L, m, space = boolean_case(*t)
    verdict = is_common_cause_closed(L, m)
    assert verdict.closed == (not space.unexplained())
    if not verdict.closed:
        names = NAMES[: t[0]]
        pair = (mask_to_set(names, verdict.witness.a), mask_to_set(names, verdict.witness.b))
        assert pair in space.unexplained()


# --- the canonical 2^3 counterexample ---------------------------------------------

def test_canonical_correlations():
    m = canonical()
    pairs = [(B3.label(w.a), B3.label(w.b)) for w in correlated_pairs(B3, m)]
    assert pairs == [("p", "p|q"), ("p", "p|r"), ("q", "p|q"), ("q", "q|r"), ("r", "p|r"), ("r", "q|r")]
    w = correlation_witness(B3, m, B3.element("p|q"), B3.element("p"))
    assert (w.lhs, w.rhs, w.gap) == (F(1, 2), F(3, 8), F(1, 8))


@pytest.mark.parametrize(
    "label, failure, lhs, rhs",
    [
        ("q", "occ2", F(2, 3), F(4, 9)),
        ("r", "occ3", F(0), F(1)),
        ("p|r", "occ1", F(2, 3), F(4, 9)),
        ("q|r", "occ3", F(1, 2), F(1)),
    ],
)
def test_canonical_candidates_fail(label, failure, lhs, rhs):
    m = canonical()
    a, b = B3.element("p|q"), B3.element("p")
    check = check_common_cause(B3, m, a, b, B3.element(label))
    assert check.failure == failure
    assert check.values[failure] == (lhs, rhs)
    assert check.reverify(B3, m)


def test_canonical_only_trivial_causes():
    m = canonical()
    a, b = B3.element("p|q"), B3.element("p")
    assert find_common_causes(B3, m, a, b) == []
    trivial = find_common_causes(B3, m, a, b, require_nontrivial=False)
    assert [(B3.label(c.c), c.nontrivial) for c in trivial] == [("p", False), ("p|q", False)]
    assert all(c.holds and c.reverify(B3, m) for c in trivial)
    # 0 and I are cut by the gate
    gate = check_common_cause(B3, m, a, b, B3.top)
    assert gate.failure == "gate" and gate.occ1 is None


def test_canonical_not_closed():
    verdict = is_common_cause_closed(B3, canonical())
    assert not verdict
    assert (B3.label(verdict.witness.a), B3.label(verdict.witness.b)) == ("p", "p|q")


# --- nontrivial causes exist in larger spaces ------------------------------------

def test_nontrivial_cause_for_nested_pair():
    # with B ⊂ A the causes are the C with B ≤ C ≤ A
    L = build_boolean(list("pqrs"))
    m = measure_from_atom_weights(L, [F(1, 4)] * 4)
    a, b = L.element("p|q|r"), L.element("p")
    found = [L.label(c.c) for c in find_common_causes(L, m, a, b)]
    assert found == ["p|q", "p|r"]
    assert has_nontrivial_common_cause(L, m, a, b)


def test_reverify_detects_tampering():
    m = canonical()
    a, b = B3.element("p|q"), B3.element("p")
    good = check_common_cause(B3, m, a, b, B3.element("p"))
    bad = CommonCauseCheck(a, b, B3.element("q"), True, True, True, True, True, True, True, {})
    assert good.reverify(B3, m)
    assert bad.holds and not bad.reverify(B3, m)


def test_condition_names():
    assert CONDITIONS == ("compatible_a", "compatible_b", "gate", "occ1", "occ2", "occ3", "occ4")


# --- error handling ----------------------------------------------------------------

def test_not_correlated_errors():
    m = canonical()
    p, q = B3.element("p"), B3.element("q")
    with pytest.raises(NotCorrelated, match="distinct"):
        correlation_witness(B3, m, p, p)
    with pytest.raises(NotCorrelated, match="not positively"):
        correlation_witness(B3, m, p, q)
    with pytest.raises(NotCorrelated):
        find_common_causes(B3, m, p, q)
    L = build_mo(2)
    ms = random_state(L, 0)
    with pytest.raises(NotCorrelated, match="not compatible"):
        correlation_witness(L, ms, L.element("a"), L.element("b"))


def test_anticorrelated_pairs():
    m = canonical()
    space = BooleanSpace(dict(zip("pqr", CANONICAL)))
    got = {(mask_to_set("pqr", w.a), mask_to_set("pqr", w.b)) for w in anticorrelated_pairs(B3, m)}
    want = {
        (x, y) for x in space.events for y in space.events
        if set_to_mask("pqr", x) < set_to_mask("pqr", y) and space.p(x & y) < space.p(x) * space.p(y)
    }
    assert got == want
    # p ∨ q and p ∨ r overlap in p only: 1/2 < 9/16
    assert (frozenset("pq"), frozenset("pr")) in got


# --- atoms and small spaces ------------------------------------------------------

def test_correlation_from_atoms():
    m = canonical()
    p, q = B3.element("p"), B3.element("q")
    w = correlation_from_atoms(B3, m, p, q)
    assert (w.a, w.b) == (B3.element("p|q"), p)
    assert w.lhs == m[p] > w.rhs == m[B3.element("p|q")] * m[p]
    L = build_boolean(["p", "q"])
    m2 = measure_from_atom_weights(L, [F(1, 3), F(2, 3)])
    with pytest.raises(NotCorrelated):
        correlation_from_atoms(L, m2, L.element("p"), L.element("q"))
    with pytest.raises(ValueError):
        correlation_from_atoms(B3, m, p, B3.element("p|q"))


@pytest.mark.parametrize("k", [1, 2])
def test_small_boolean_closed(k):
    L = build_boolean(list(NAMES[:k]))
    m = random_state(L, 3)
    assert correlated_pairs(L, m) == []
    assert is_common_cause_closed(L, m)


def test_single_phi_atom_closed():
    m = measure_from_atom_weights(B3, [F(1), F(0), F(0)])
    assert is_common_cause_closed(B3, m)


@pytest.mark.parametrize("n", range(1, 9))
def test_mo_never_correlates(n):
    L = build_mo(n)
    for seed in range(5):
        m = random_state(L, seed)
        assert correlated_pairs(L, m) == []
        assert is_common_cause_closed(L, m)


def test_chain2_not_closed():
    L = greechie.fixture("chain2")
    m = random_state(L, 1)
    verdict = is_common_cause_closed(L, m)
    assert not verdict
    w = correlation_from_atoms(L, m, L.element("a"), L.element("b"))
    assert not has_nontrivial_common_cause(L, m, w.a, w.b)
