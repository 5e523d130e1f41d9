"""Exact-rational probability measures on finite orthomodular lattices."""

from __future__ import annotations

import enum
import math
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import networkx as nx

from .lattice import BooleanLattice, OrthoLattice

#: Boolean measures up to this many elements keep a full value table.
TABLE_CAP = 1 << 16
SAMPLING_BUDGET = 10_000


class InvalidMeasure(ValueError):
    """A valuation is not a probability measure.  ``pair`` is the first failing
    orthogonal pair, when additivity is what broke."""

    def __init__(self, message: str, pair: tuple[int, int] | None = None, element: int | None = None):
        super().__init__(message)
        self.pair = pair
        self.element = element


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("probabilities must be exact; got a float")
    return Fraction(value)


class Measure:
    """A validated measure.  Values are held as integer numerators over one
    common denominator so that the screening-off equalities can be checked by
    cross-multiplication.

    ``m[x]`` is the probability of element ``x`` as a :class:`Fraction`;
    ``m.num(x)`` is its numerator over ``m.den``.
    """

    __slots__ = ("lattice", "den", "_table", "_atom_nums")

    def __init__(self, lattice: OrthoLattice, den: int, table=None, atom_nums=None):
        self.lattice = lattice
        self.den = den
        self._table = table
        self._atom_nums = atom_nums

    @classmethod
    def _from_values(cls, lattice: OrthoLattice, values: Sequence[Fraction]) -> "Measure":
        den = math.lcm(*(v.denominator for v in values))
        return cls(lattice, den, table=[v.numerator * (den // v.denominator) for v in values])

    @classmethod
    def _from_atom_weights(cls, lattice: BooleanLattice, weights: Sequence[Fraction]) -> "Measure":
        den = math.lcm(*(w.denominator for w in weights))
        nums = [w.numerator * (den // w.denominator) for w in weights]
        if lattice.n > TABLE_CAP:
            return cls(lattice, den, atom_nums=nums)
        table = [0] * lattice.n
        for x in range(1, lattice.n):
            low = x & -x
            table[x] = table[x ^ low] + nums[low.bit_length() - 1]
        return cls(lattice, den, table=table, atom_nums=nums)

    def num(self, x: int) -> int:
        if self._table is not None:
            return self._table[x]
        nums = self._atom_nums
        total = 0
        while x:
            low = x & -x
            total += nums[low.bit_length() - 1]
            x ^= low
        return total

    def __getitem__(self, x: int) -> Fraction:
        return Fraction(self.num(x), self.den)

    def values(self) -> list[Fraction]:
        return [self[x] for x in self.lattice.elements()]

    def atom_weights(self) -> list[Fraction]:
        return [self[a] for a in self.lattice.atoms()]

    def __eq__(self, other):
        if not isinstance(other, Measure) or other.lattice is not self.lattice:
            return NotImplemented
        return all(self[x] == other[x] for x in self.lattice.elements())

    def __hash__(self):
        return id(self)

    def __repr__(self):
        shown = ", ".join(f"{self.lattice.label(a)}={self[a]}" for a in self.lattice.atoms())
        return f"Measure({shown})"


def _raw_values(L: OrthoLattice, raw) -> list[Fraction]:
    if isinstance(raw, Mapping):
        keyed = {}
        for key, value in raw.items():
            x = L.element(key) if isinstance(key, str) else int(key)
            keyed[x] = as_fraction(value)
        missing = [x for x in L.elements() if x not in keyed]
        if missing:
            raise InvalidMeasure(f"no value for element {L.label(missing[0])}", element=missing[0])
        return [keyed[x] for x in L.elements()]
    values = [as_fraction(v) for v in raw]
    if len(values) != L.n:
        raise InvalidMeasure(f"expected {L.n} values, got {len(values)}")
    return values


def validate_measure(L: OrthoLattice, raw) -> Measure:
    """Accept ``raw`` (a sequence indexed by element, or a mapping keyed by
    element id or label) as a measure, or raise :class:`InvalidMeasure`."""
    values = _raw_values(L, raw)
    for x, v in enumerate(values):
        if not 0 <= v <= 1:
            raise InvalidMeasure(f"value {v} of {L.label(x)} is outside [0, 1]", element=x)
    if values[L.bottom] != 0:
        raise InvalidMeasure("measure of 0 must be 0", element=L.bottom)
    if values[L.top] != 1:
        raise InvalidMeasure("measure of I must be 1", element=L.top)
    for a, b in _orthogonal_pairs(L):
        j = L.join(a, b)
        if values[j] != values[a] + values[b]:
            raise InvalidMeasure(
                f"additivity fails on orthogonal pair ({L.label(a)}, {L.label(b)}): "
                f"{values[j]} != {values[a]} + {values[b]}",
                pair=(a, b),
            )
    return Measure._from_values(L, values)


def _orthogonal_pairs(L: OrthoLattice):
    for a in L.elements():
        if a == L.bottom:
            continue
        oa = L.ortho(a)
        for b in sorted(L.below(oa)):
            if b != L.bottom:
                yield a, b


def orthogonal_pairs(L: OrthoLattice) -> list[tuple[int, int]]:
    """Ordered pairs of nonzero mutually orthogonal elements, in index order."""
    return sorted(_orthogonal_pairs(L))


def _decompose_order(L: OrthoLattice) -> list[tuple[int, int, int]]:
    """For every nonzero element ``x`` a step ``(x, atom, rest)`` with
    ``x = atom ∨ rest`` and ``atom ⊥ rest``, listed so ``rest`` comes first."""
    atoms = L.atoms()
    atom_set = set(atoms)
    below = {x: sorted(L.below(x)) for x in L.elements()}
    order = sorted(L.elements(), key=lambda x: len(below[x]))
    steps = []
    for x in order:
        if x == L.bottom:
            continue
        a = next(y for y in below[x] if y in atom_set)
        steps.append((x, a, L.meet(x, L.ortho(a))))
    return steps


def _extend_atom_weights(L: OrthoLattice, weights: dict[int, Fraction]) -> list[Fraction]:
    values = [Fraction(0)] * L.n
    for x, a, rest in _decompose_order(L):
        values[x] = weights[a] + values[rest]
    return values


def _atom_weight_list(L: OrthoLattice, weights) -> list[Fraction]:
    atoms = L.atoms()
    if isinstance(weights, Mapping):
        by_atom = {}
        for key, value in weights.items():
            x = L.element(key) if isinstance(key, str) else int(key)
            if x not in atoms:
                raise InvalidMeasure(f"{key!r} is not an atom")
            by_atom[x] = as_fraction(value)
        missing = [a for a in atoms if a not in by_atom]
        if missing:
            raise InvalidMeasure(f"no weight for atom {L.label(missing[0])}", element=missing[0])
        return [by_atom[a] for a in atoms]
    out = [as_fraction(w) for w in weights]
    if len(out) != len(atoms):
        raise InvalidMeasure(f"expected {len(atoms)} atom weights, got {len(out)}")
    return out


def measure_from_atom_weights(L: OrthoLattice, weights) -> Measure:
    """Extend atom weights additively.

    On a Boolean lattice the weights must sum to 1.  On other lattices every
    element is split into orthogonal atoms and the result is validated, so
    weights that do not sum to 1 on each block are rejected.
    """
    ws = _atom_weight_list(L, weights)
    for a, w in zip(L.atoms(), ws):
        if w < 0:
            raise InvalidMeasure(f"negative weight {w} on atom {L.label(a)}", element=a)
    if isinstance(L, BooleanLattice):
        if sum(ws) != 1:
            raise InvalidMeasure(f"atom weights sum to {sum(ws)}, not 1")
        return Measure._from_atom_weights(L, ws)
    return validate_measure(L, _extend_atom_weights(L, dict(zip(L.atoms(), ws))))


def contexts(L: OrthoLattice) -> list[tuple[int, ...]]:
    """Maximal sets of mutually orthogonal atoms whose join is I (the atom
    sets of the maximal Boolean blocks), sorted."""
    atoms = L.atoms()
    if isinstance(L, BooleanLattice):
        return [tuple(atoms)]
    g = nx.Graph()
    g.add_nodes_from(atoms)
    for i, a in enumerate(atoms):
        for b in atoms[i + 1:]:
            if L.are_orthogonal(a, b):
                g.add_edge(a, b)
    found = []
    for clique in nx.find_cliques(g):
        top = L.bottom
        for a in clique:
            top = L.join(top, a)
        if top == L.top:
            found.append(tuple(sorted(clique)))
    return sorted(found)


def random_state(L: OrthoLattice, seed: int, denominator_bound: int = 16) -> Measure | None:
    """A faithful measure with random rational atom weights, or None.

    Blocks are filled in order; atoms already fixed by an earlier block keep
    their weight and the block's free atoms share the remaining mass.  A draw
    that leaves some block unable to sum to 1 is rejected and redrawn.
    """
    rng = random.Random(seed)
    blocks = contexts(L)
    if not blocks:
        return None
    for _ in range(SAMPLING_BUDGET):
        weights: dict[int, Fraction] = {}
        ok = True
        for block in blocks:
            fixed = sum((weights[a] for a in block if a in weights), Fraction(0))
            free = [a for a in block if a not in weights]
            if not free:
                if fixed != 1:
                    ok = False
                    break
                continue
            left = 1 - fixed
            if left <= 0:
                ok = False
                break
            draws = [rng.randint(1, denominator_bound) for _ in free]
            total = sum(draws)
            for a, d in zip(free, draws):
                weights[a] = left * Fraction(d, total)
        if not ok:
            continue
        ws = [weights[a] for a in L.atoms()]
        if isinstance(L, BooleanLattice):
            return Measure._from_atom_weights(L, ws)
        try:
            return validate_measure(L, _extend_atom_weights(L, weights))
        except InvalidMeasure:
            continue
    return None


def zero_witness(L: OrthoLattice, m: Measure) -> int | None:
    """First nonzero element of measure 0, or None if ``m`` is faithful."""
    if isinstance(L, BooleanLattice) and m._atom_nums is not None:
        for i, w in enumerate(m._atom_nums):
            if w == 0:
                return 1 << i
        return None
    for x in L.elements():
        if x != L.bottom and m.num(x) == 0:
            return x
    return None


def is_faithful(L: OrthoLattice, m: Measure) -> bool:
    return zero_witness(L, m) is None


def is_phi_atom(L: OrthoLattice, m: Measure, a: int) -> bool:
    va = m.num(a)
    if va <= 0:
        return False
    return all(m.num(b) in (0, va) for b in L.below(a))


def phi_atoms(L: OrthoLattice, m: Measure) -> list[int]:
    return [a for a in L.elements() if is_phi_atom(L, m, a)]


class Atomicity(str, enum.Enum):
    PURELY_ATOMIC = "purely-atomic"
    PURELY_NONATOMIC = "purely-nonatomic"
    NEITHER = "neither"


def classify_atomicity(L: OrthoLattice, m: Measure) -> Atomicity:
    patoms = set(phi_atoms(L, m))
    positive = [a for a in L.elements() if m.num(a) > 0]
    atomic = all(any(b in patoms for b in L.below(a)) for a in positive)
    nonatomic = all(
        any(b != a and 0 < m.num(b) < m.num(a) for b in L.below(a)) for a in positive
    )
    if atomic:
        return Atomicity.PURELY_ATOMIC
    if nonatomic:
        return Atomicity.PURELY_NONATOMIC
    return Atomicity.NEITHER


@dataclass(frozen=True)
class QDecomposition:
    """``φ = α·φ₁ + (1 − α)·φ₂`` with ``φ₁`` concentrated on the up-set of ``q``.

    ``phi2`` is None in the degenerate case ``alpha == 1``.
    """

    alpha: Fraction
    phi1: Measure
    phi2: Measure | None
    q: int

    def reconstruct(self, x: int) -> Fraction:
        value = self.alpha * self.phi1[x]
        if self.phi2 is not None:
            value += (1 - self.alpha) * self.phi2[x]
        return value


def q_decompose(L: OrthoLattice, m: Measure, q: int) -> QDecomposition:
    if not is_phi_atom(L, m, q):
        raise ValueError(f"{L.label(q)} is not a φ-atom")
    alpha = m[q]
    # φ₁'(A) = φ(A ∧ Q),  φ₂'(A) = φ(A ∧ (A ∧ Q)⊥)
    first = [m[L.meet(a, q)] for a in L.elements()]
    if alpha == 1:
        phi1 = validate_measure(L, [Fraction(int(L.leq(q, a))) for a in L.elements()])
        return QDecomposition(alpha, phi1, None, q)
    second = [m[L.meet(a, L.ortho(L.meet(a, q)))] for a in L.elements()]
    phi1 = validate_measure(L, [v / alpha for v in first])
    phi2 = validate_measure(L, [v / (1 - alpha) for v in second])
    for a in L.elements():
        if phi1[a] != (1 if L.leq(q, a) else 0):
            raise ValueError(
                f"φ₁ is not the indicator of the up-set of {L.label(q)} at {L.label(a)}"
            )
    return QDecomposition(alpha, phi1, phi2, q)


def rational_json(value) -> dict:
    value = Fraction(value)
    return {"num": value.numerator, "den": value.denominator}


def measure_to_json(L: OrthoLattice, m: Measure, elements=None) -> dict:
    """Element label -> ``{"num", "den"}``; all elements unless given."""
    chosen = L.elements() if elements is None else elements
    return {L.label(x): rational_json(m[x]) for x in chosen}


_WEIGHT_LINE = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(\d+)\s*(?:/\s*(\d+))?\Z")


def parse_weights(text: str) -> dict[str, Fraction]:
    """Parse ``<atom> = <int>/<int>`` lines into a label -> weight mapping."""
    out: dict[str, Fraction] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        match = _WEIGHT_LINE.match(line)
        if not match:
            raise InvalidMeasure(f"line {lineno}: expected '<atom> = <num>/<den>', got {raw.strip()!r}")
        label, num, den = match.groups()
        if den is not None and int(den) == 0:
            raise InvalidMeasure(f"line {lineno}: zero denominator")
        if label in out:
            raise InvalidMeasure(f"line {lineno}: atom {label!r} given twice")
        out[label] = Fraction(int(num), int(den) if den else 1)
    return out


def read_weights(path) -> dict[str, Fraction]:
    with open(path, encoding="utf-8") as fh:
        return parse_weights(fh.read())
