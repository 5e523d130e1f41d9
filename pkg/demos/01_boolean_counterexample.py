"""
A correlation nobody explains
=============================

Three atoms with weights 1/2, 1/4, 1/4.  The pair (p ∨ q, p) is correlated,
and no element of the eight-element Boolean space screens it off.
"""

from fractions import Fraction

import numpy as np

from commoncause import (
    build_boolean,
    check_common_cause,
    correlated_pairs,
    find_common_causes,
    is_common_cause_closed,
    measure_from_atom_weights,
)

L = build_boolean(["p", "q", "r"])
m = measure_from_atom_weights(L, [Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)])

# the value table, one row per element
for x in L.elements():
    print(f"{L.label(x):>6}  {m[x]}")

# the order relation as a boolean matrix
leq = L.tables()[0]
print("comparable pairs:", int(leq.sum()), "of", leq.size)

# every correlated pair with its gap φ(A∧B) − φ(A)φ(B)
pairs = correlated_pairs(L, m)
gaps = np.array([float(w.gap) for w in pairs])
for w in pairs:
    print(f"({L.label(w.a)}, {L.label(w.b)})  {w.lhs} > {w.rhs}")
print("largest gap:", gaps.max())

# %%
# Test each candidate against the pair; the first failing condition is kept.
a, b = L.element("p|q"), L.element("p")
for label in ["q", "r", "p|r", "q|r"]:
    check = check_common_cause(L, m, a, b, L.element(label))
    lhs, rhs = check.values[check.failure]
    print(f"C = {label:4}  fails {check.failure}: {lhs} vs {rhs}")

# Only the correlata themselves pass, and those are trivial causes.
print([L.label(c.c) for c in find_common_causes(L, m, a, b, require_nontrivial=False)])

verdict = is_common_cause_closed(L, m)
print("closed:", verdict.closed, "first unexplained:", L.label(verdict.witness.a), L.label(verdict.witness.b))
