"""Acceptance criteria, each checked exactly (rational arithmetic, no tolerance).

A PASS/FAIL line per criterion is printed in the terminal summary.
"""

import time
from fractions import Fraction as F

import pytest

from commoncause import greechie
from commoncause.causality import (
    check_common_cause,
    correlated_pairs,
    correlation_from_atoms,
    correlation_witness,
    find_common_causes,
    has_nontrivial_common_cause,
    is_common_cause_closed,
)
from commoncause.cli import main
from commoncause.extend import dyadic_refine, verify_embedding
from commoncause.lattice import benzene_ring, build_boolean, build_mo, verify_orthomodular
from commoncause.states import (
    InvalidMeasure,
    is_faithful,
    measure_from_atom_weights,
    phi_atoms,
    q_decompose,
    random_state,
    validate_measure,
)
from commoncause.theorems import fake_certificate

from conftest import CANONICAL
from oracle import BooleanSpace, mask_to_set, set_to_mask

SEEDS = range(100)
NAMES = "pqrst"


def boolean_instances(sizes=(1, 2, 3, 4, 5)):
    for k in sizes:
        L = build_boolean(list(NAMES[:k]))
        for seed in SEEDS:
            m = random_state(L, seed)
            assert m is not None and is_faithful(L, m)
            yield k, L, m


def atom_pairs(L):
    atoms = L.atoms()
    return [(p, q) for i, p in enumerate(atoms) for q in atoms[i + 1:]]


@pytest.mark.criterion(1, "characterization on 2^1..2^5")
def test_characterization():
    start = time.perf_counter()
    for k, L, m in boolean_instances():
        verdict = is_common_cause_closed(L, m)
        if k <= 2:
            assert verdict.closed and correlated_pairs(L, m) == []
        else:
            assert not verdict.closed
            w = verdict.witness
            assert w.lhs > w.rhs
            assert find_common_causes(L, m, w.a, w.b, require_nontrivial=True) == []
    assert time.perf_counter() - start < 60


@pytest.mark.criterion(1, "characterization on 2^1..2^5")
def test_characterization_witness_against_oracle():
    # the 2^3 witnesses recomputed on sets
    for _, L, m in boolean_instances((3,)):
        names = L.atom_names
        space = BooleanSpace(dict(zip(names, m.atom_weights())))
        w = is_common_cause_closed(L, m).witness
        a, b = mask_to_set(names, w.a), mask_to_set(names, w.b)
        assert space.correlated(a, b)
        assert space.causes(a, b) == []


@pytest.mark.criterion(2, "correlation exists iff some atom pair has φ(P∨Q) < 1")
def test_correlation_iff():
    for _, L, m in boolean_instances():
        exists = bool(correlated_pairs(L, m))
        for p, q in atom_pairs(L):
            assert exists == (m[L.join(p, q)] < 1)


@pytest.mark.criterion(3, "witness (P∨Q, P) is correlated with φ(A∧B) = φ(P)")
def test_witness_construction():
    checked = 0
    for _, L, m in boolean_instances():
        for p, q in atom_pairs(L):
            for x, y in ((p, q), (q, p)):
                pq = L.join(x, y)
                if not m[pq] < 1:
                    continue
                w = correlation_from_atoms(L, m, x, y)
                assert (w.a, w.b) == (pq, x)
                assert w.lhs == m[L.meet(pq, x)] == m[x]
                assert w.rhs == m[pq] * m[x]
                assert w.lhs > w.rhs
                checked += 1
    assert checked > 0


@pytest.mark.criterion(4, "canonical 2^3 counterexample (1/2, 1/4, 1/4)")
def test_canonical_counterexample():
    L = build_boolean(list("pqr"))
    m = measure_from_atom_weights(L, CANONICAL)
    a, b = L.element("p|q"), L.element("p")
    w = correlation_witness(L, m, a, b)
    assert (w.lhs, w.rhs) == (F(1, 2), F(3, 8))
    expected = {
        "q": ("occ2", F(2, 3), F(4, 9)),
        "r": ("occ3", F(0), F(1)),
        "p|r": ("occ1", F(2, 3), F(4, 9)),
        "q|r": ("occ3", F(1, 2), F(1)),
    }
    space = BooleanSpace(dict(zip("pqr", CANONICAL)))
    sa, sb = frozenset("pq"), frozenset("p")
    for label, (cond, lhs, rhs) in expected.items():
        check = check_common_cause(L, m, a, b, L.element(label))
        assert check.failure == cond
        assert check.values[cond] == (lhs, rhs)
        assert space.failing_condition(sa, sb, mask_to_set("pqr", L.element(label))) == cond
    # the feasible nontrivial candidates are exactly these four
    feasible = {
        L.label(set_to_mask("pqr", c)) for c in space.events
        if 0 < space.p(c) < 1 and c not in (sa, sb)
    }
    assert feasible == set(expected)
    assert not has_nontrivial_common_cause(L, m, a, b)


@pytest.mark.criterion(5, "Q-decomposition reconstructs φ exactly")
def test_q_decomposition():
    instances = list(boolean_instances())
    L3 = build_boolean(list("pqr"))
    instances.append((3, L3, measure_from_atom_weights(L3, CANONICAL)))
    for _, L, m in instances:
        for q in L.atoms():
            qd = q_decompose(L, m, q)
            assert qd.alpha == m[q]
            for x in L.elements():
                assert qd.alpha * qd.phi1[x] + (1 - qd.alpha) * (qd.phi2[x] if qd.phi2 else 0) == m[x]
                assert qd.phi1[x] == (1 if L.leq(q, x) else 0)
            validate_measure(L, qd.phi1.values())
            if qd.phi2 is not None:
                validate_measure(L, qd.phi2.values())
            else:
                assert qd.alpha == 1


def faithful_fixtures():
    lattices = [build_boolean(list(NAMES[:k])) for k in range(1, 6)]
    lattices += [build_mo(n) for n in range(1, 9)]
    diagrams = dict(greechie.FIXTURES)
    diagrams["pentagon"] = "".join(f"block: x{i} m{i} x{(i + 1) % 5}\n" for i in range(5))
    diagrams["pair"] = "block: a b\nblock: c d\n"
    lattices += [greechie.paste(greechie.parse_diagram(t)) for t in diagrams.values()]
    return lattices


@pytest.mark.criterion(6, "φ-atoms equal atoms for faithful measures")
def test_faithful_phi_atoms():
    for L in faithful_fixtures():
        sampled = 0
        for seed in range(20):
            m = random_state(L, seed)
            if m is None:
                continue
            sampled += 1
            assert is_faithful(L, m)
            assert phi_atoms(L, m) == L.atoms()
        assert sampled > 0, L.family


@pytest.mark.criterion(7, "MO_n (n = 2..8) has no positive correlation")
def test_mo_family():
    for n in range(2, 9):
        L = build_mo(n)
        for seed in range(50):
            m = random_state(L, seed)
            assert m is not None
            assert correlated_pairs(L, m) == []
            assert is_common_cause_closed(L, m).closed


@pytest.mark.criterion(8, "two-block pasting is not closed, witnessed by atoms a, b")
def test_two_block_not_closed():
    L = greechie.fixture("chain2")
    a, b, c = L.element("a"), L.element("b"), L.element("c")
    for seed in range(50):
        m = random_state(L, seed)
        assert is_faithful(L, m)
        assert m[L.join(a, b)] == 1 - m[c] < 1
        assert not is_common_cause_closed(L, m).closed
        w = correlation_from_atoms(L, m, a, b)
        assert not has_nontrivial_common_cause(L, m, w.a, w.b)


@pytest.mark.criterion(9, "dyadic refinements are measure-preserving embeddings")
def test_embedding_soundness():
    for k_atoms in (2, 3):
        L = build_boolean(list(NAMES[:k_atoms]))
        measures = [random_state(L, seed) for seed in range(3)]
        if k_atoms == 3:
            measures.append(measure_from_atom_weights(L, CANONICAL))
        for m in measures:
            for depth in (1, 2, 3):
                T, m2, h = dyadic_refine(L, m, depth)
                assert T.n == 1 << (k_atoms << depth)
                assert verify_embedding(h, m, m2) is None


@pytest.mark.criterion(10, "pasting correctness and the benzene ring")
def test_pasting():
    L = greechie.paste(greechie.parse_diagram("block: a b c\nblock: c d e\n"))
    assert len(L) == 12
    assert L.join(L.element("a"), L.element("b")) == L.ortho(L.element("c")) \
        == L.join(L.element("d"), L.element("e"))
    assert verify_orthomodular(L) is None
    O6 = benzene_ring()
    pair = verify_orthomodular(O6)
    assert pair is not None
    x, y = pair
    assert O6.leq(x, y) and O6.join(x, O6.meet(y, O6.ortho(x))) != y


@pytest.mark.criterion(11, "mutation sensitivity")
def test_mutations(tmp_path, capsys):
    L = build_boolean(list("pqr"))
    m = measure_from_atom_weights(L, CANONICAL)
    values = m.values()
    p, q = L.element("p"), L.element("q")
    values[L.join(p, q)] += F(1, 8)
    with pytest.raises(InvalidMeasure) as info:
        validate_measure(L, values)
    assert info.value.pair is not None
    assert not fake_certificate(L, m).reverify(L, m)

    cfg = tmp_path / "suite.cfg"
    cfg.write_text("families = boolean\nboolean_atoms = 3\nseeds = 0-2\n")
    assert main(["theorems", "--config", str(cfg)]) == 0
    for mutation in ("additivity", "certificate"):
        cfg.write_text(f"families = boolean\nboolean_atoms = 3\nseeds = 0-2\nmutation = {mutation}\n")
        assert main(["theorems", "--config", str(cfg)]) == 1
    capsys.readouterr()
