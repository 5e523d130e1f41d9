"""
Finding the cause in a finer space
==================================

Refining every atom into equal halves embeds the three-atom space into a
six-atom one.  There the unexplained correlation gets a common cause.
This is a finite experiment and proves nothing in general.
"""

from fractions import Fraction
from pathlib import Path

from commoncause import (
    build_boolean,
    correlated_pairs,
    dyadic_refine,
    explain_in_extension,
    is_common_cause_closed,
    measure_from_atom_weights,
    verify_embedding,
)
from commoncause.extend import parse_split_table

L = build_boolean(["p", "q", "r"])
m = measure_from_atom_weights(L, [Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)])

for depth in (1, 2, 3):
    T, m2, h = dyadic_refine(L, m, depth)
    print(f"depth {depth}: {T.n} elements, embedding ok: {verify_embedding(h, m, m2) is None}")

T, m2, h = dyadic_refine(L, m, 1)
for w in correlated_pairs(L, m):
    cert = explain_in_extension(L, m, w, 1)
    print(f"({L.label(w.a)}, {L.label(w.b)}) -> C = {T.label(cert.c)}, re-verified: {cert.reverify(T, m2)}")

# %%
# An uneven split of p alone, with the other atoms kept whole.
split = parse_split_table(Path(__file__).with_name("split.txt").read_text())
T, m2, h = dyadic_refine(L, m, 0, split)
w = is_common_cause_closed(L, m).witness
cert = explain_in_extension(L, m, w, 0, split)
print(T.atom_names, "->", None if cert is None else T.label(cert.c))
