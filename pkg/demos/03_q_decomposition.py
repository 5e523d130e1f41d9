"""
Splitting a measure along an atom
=================================

For an atom Q with α = φ(Q), φ is the mixture α·φ₁ + (1 − α)·φ₂ where φ₁ is
the point mass above Q.
"""

from fractions import Fraction

import numpy as np

from commoncause import build_boolean, measure_from_atom_weights, q_decompose

L = build_boolean(["p", "q", "r", "s"])
m = measure_from_atom_weights(L, [Fraction(2, 5), Fraction(3, 10), Fraction(1, 5), Fraction(1, 10)])

for q in L.atoms():
    qd = q_decompose(L, m, q)
    phi1 = np.array([qd.phi1[x] for x in L.elements()], dtype=object)
    phi2 = np.array([qd.phi2[x] for x in L.elements()], dtype=object)
    mix = qd.alpha * phi1 + (1 - qd.alpha) * phi2
    exact = all(mix[x] == m[x] for x in L.elements())
    print(f"Q = {L.label(q)}  α = {qd.alpha}  φ₂ on atoms = {[str(qd.phi2[a]) for a in L.atoms()]}  exact: {exact}")

# The one-atom space has Q = I and nothing left for φ₂.
L1 = build_boolean(["p"])
qd = q_decompose(L1, measure_from_atom_weights(L1, [1]), L1.top)
print("degenerate:", qd.alpha, qd.phi2)
