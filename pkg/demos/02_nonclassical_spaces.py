"""
Beyond Boolean spaces
=====================

MO_n glues n four-element blocks at 0 and I.  Elements from different blocks
are never compatible, so nothing correlates and every state is closed.  A
pasting of two blocks that share an atom behaves differently.
"""

from pathlib import Path

import numpy as np

from commoncause import (
    benzene_ring,
    build_mo,
    correlated_pairs,
    greechie,
    is_common_cause_closed,
    random_state,
    verify_orthomodular,
)
from commoncause.causality import correlation_from_atoms

for n in range(2, 6):
    L = build_mo(n)
    m = random_state(L, seed=n)
    compat = np.array([[L.is_compatible(x, y) for y in L.elements()] for x in L.elements()])
    print(f"MO{n}: {len(L)} elements, {compat.sum()} compatible ordered pairs, "
          f"{len(correlated_pairs(L, m))} correlations, closed={is_common_cause_closed(L, m).closed}")

# %%
# Two blocks {a,b,c} and {c,d,e} paste to twelve elements.
L = greechie.paste(greechie.read_diagram(Path(__file__).with_name("chain2.gd")))
print([L.label(x) for x in L.elements()])
print("a∨b is c⊥ is d∨e:", L.join(L.element("a"), L.element("b")) == L.element("~c") == L.element("d|e"))

m = random_state(L, seed=1)
w = correlation_from_atoms(L, m, L.element("a"), L.element("b"))
print(f"({L.label(w.a)}, {L.label(w.b)}) correlated: {w.lhs} > {w.rhs}")
print("closed:", is_common_cause_closed(L, m).closed)

# %%
# The benzene ring is an ortholattice but not orthomodular.
O6 = benzene_ring()
x, y = verify_orthomodular(O6)
print(f"{O6.label(x)} ≤ {O6.label(y)} yet {O6.label(x)} ∨ ({O6.label(y)} ∧ {O6.label(O6.ortho(x))}) = "
      f"{O6.label(O6.join(x, O6.meet(y, O6.ortho(x))))}")
