"""Finite bounded ortholattices.

Two concrete representations share one interface:

* :class:`BooleanLattice` -- the powerset of a list of atoms.  Element ids are
  subset bitmasks, so meet/join/ortho are bit operations and no n x n table is
  ever materialised.  This is what lets refinements with millions of elements
  still be queried pointwise.
* :class:`TableLattice` -- an arbitrary finite ortholattice given by an order
  matrix and an orthocomplement permutation.  Meet and join tables are
  computed once from the order.

Element ids are plain ``int`` indices into the owning lattice.
"""

from __future__ import annotations

import re
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

MAX_BOOLEAN_ATOMS = 16
#: Triple-quantified checks (distributivity) are skipped above this size.
EXHAUSTIVE_CAP = 4096
#: Boolean lattices up to this size are re-verified like any other lattice;
#: larger powersets are correct by construction.
BOOLEAN_VERIFY_CAP = 256

_LABEL_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class LatticeError(ValueError):
    """A structure failed an ortholattice or orthomodularity check."""

    def __init__(self, message: str, witness: tuple[int, ...] | None = None):
        super().__init__(message)
        self.witness = witness


class LatticeSizeError(LatticeError):
    pass


class OrthoLattice:
    """Common interface of the finite ortholattices in this package."""

    n: int
    bottom: int
    top: int

    def leq(self, a: int, b: int) -> bool:
        raise NotImplementedError

    def meet(self, a: int, b: int) -> int:
        raise NotImplementedError

    def join(self, a: int, b: int) -> int:
        raise NotImplementedError

    def ortho(self, a: int) -> int:
        raise NotImplementedError

    def label(self, a: int) -> str:
        raise NotImplementedError

    def below(self, a: int) -> Iterable[int]:
        """All elements ``b`` with ``b <= a``."""
        raise NotImplementedError

    def atoms(self) -> list[int]:
        raise NotImplementedError

    def tables(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """``(leq, meet, join, ortho)`` as dense arrays, for vectorised checks."""
        raise NotImplementedError

    is_boolean = False
    family = "ortholattice"

    def elements(self) -> range:
        return range(self.n)

    def __len__(self) -> int:
        return self.n

    def is_compatible(self, a: int, b: int) -> bool:
        """``a = (a ∧ b) ∨ (a ∧ b⊥)``, checked in both directions."""
        forward = self.join(self.meet(a, b), self.meet(a, self.ortho(b))) == a
        backward = self.join(self.meet(b, a), self.meet(b, self.ortho(a))) == b
        if forward != backward:
            raise LatticeError(
                f"compatibility is not symmetric on ({self.label(a)}, {self.label(b)});"
                " the lattice is not orthomodular",
                (a, b),
            )
        return forward

    def are_orthogonal(self, a: int, b: int) -> bool:
        return self.leq(a, self.ortho(b))

    def element(self, text: str) -> int:
        """Resolve a label expression such as ``"p"``, ``"p|q"`` or ``"~c"``."""
        text = text.strip()
        found = self._lookup(text)
        if found is not None:
            return found
        if "|" in text:
            parts = [self.element(part) for part in text.split("|")]
            out = self.bottom
            for part in parts:
                out = self.join(out, part)
            return out
        if text.startswith("~"):
            return self.ortho(self.element(text[1:]))
        raise KeyError(f"unknown element {text!r}")

    def _lookup(self, text: str) -> int | None:
        raise NotImplementedError

    def describe(self) -> dict:
        return {
            "family": self.family,
            "elements": self.n,
            "atoms": [self.label(a) for a in self.atoms()],
        }


class BooleanLattice(OrthoLattice):
    """Powerset of ``atom_names``; element ``x`` is the subset with bitmask ``x``."""

    is_boolean = True
    family = "boolean"

    def __init__(self, atom_names: Sequence[str], *, check: bool = True):
        names = [str(a) for a in atom_names]
        if not names:
            raise LatticeSizeError("a Boolean lattice needs at least one atom")
        if len(set(names)) != len(names):
            raise LatticeError(f"duplicate atom names in {names}")
        bad_names = [n for n in names if not valid_label(n) or n == "I"]
        if bad_names:
            raise LatticeError(f"invalid atom name {bad_names[0]!r}")
        self.atom_names = tuple(names)
        self.k = len(names)
        self.n = 1 << self.k
        self.bottom = 0
        self.top = self.n - 1
        self._index = {name: 1 << i for i, name in enumerate(names)}
        if check and self.n <= BOOLEAN_VERIFY_CAP:
            check_ortholattice(self)
            bad = verify_orthomodular(self)
            if bad is not None:
                raise LatticeError("powerset failed orthomodularity", bad)

    def __repr__(self) -> str:
        return f"BooleanLattice({list(self.atom_names)!r})"

    def leq(self, a, b):
        return a & ~b == 0

    def meet(self, a, b):
        return a & b

    def join(self, a, b):
        return a | b

    def ortho(self, a):
        return self.top ^ a

    def atoms(self):
        return [1 << i for i in range(self.k)]

    def atom_indices(self, x: int) -> list[int]:
        """Positions of the atoms below ``x``."""
        return [i for i in range(self.k) if x >> i & 1]

    def label(self, a):
        if a == self.bottom:
            return "0"
        if a == self.top:
            return "I"
        return "|".join(self.atom_names[i] for i in self.atom_indices(a))

    def _lookup(self, text):
        if text == "0":
            return self.bottom
        if text == "I":
            return self.top
        return self._index.get(text)

    def below(self, a):
        s = a
        while True:
            yield s
            if s == 0:
                return
            s = (s - 1) & a

    def tables(self):
        if self.n > EXHAUSTIVE_CAP:
            raise LatticeSizeError(f"{self.n} elements exceeds the dense-table cap {EXHAUSTIVE_CAP}")
        idx = np.arange(self.n, dtype=np.int64)
        meet = np.bitwise_and.outer(idx, idx)
        join = np.bitwise_or.outer(idx, idx)
        leq = meet == idx[:, None]
        return leq, meet, join, self.top ^ idx


class TableLattice(OrthoLattice):
    """Finite ortholattice from an order matrix and an orthocomplement map.

    ``leq[i, j]`` is true iff element ``i`` lies below element ``j``.  Meets and
    joins are found by scanning common bounds: among the lower bounds of a pair
    the meet is the one with the largest down-set.
    """

    def __init__(
        self,
        leq,
        ortho: Sequence[int],
        labels: Sequence[str] | None = None,
        *,
        family: str = "ortholattice",
        require_orthomodular: bool = True,
    ):
        leq = np.array(leq, dtype=bool)
        n = leq.shape[0]
        if leq.shape != (n, n) or n == 0:
            raise LatticeError("order relation must be a non-empty square table")
        if n > EXHAUSTIVE_CAP:
            raise LatticeSizeError(f"{n} elements exceeds the cap {EXHAUSTIVE_CAP}")
        self.n = n
        self.family = family
        self._leq = leq
        self._ortho = np.array(ortho, dtype=np.int64)
        if self._ortho.shape != (n,):
            raise LatticeError("orthocomplement must map every element")
        self._labels = [str(x) for x in labels] if labels is not None else [str(i) for i in range(n)]
        if len(self._labels) != n:
            raise LatticeError("label count does not match element count")
        self._index = {name: i for i, name in enumerate(self._labels)}

        _check_partial_order(leq)
        bottoms = np.flatnonzero(leq.all(axis=1))
        tops = np.flatnonzero(leq.all(axis=0))
        if len(bottoms) != 1 or len(tops) != 1:
            raise LatticeError("order must have a unique bottom and top")
        self.bottom = int(bottoms[0])
        self.top = int(tops[0])
        self._meet, self._join = _bound_tables(leq)
        check_ortholattice(self)
        if require_orthomodular:
            bad = verify_orthomodular(self)
            if bad is not None:
                a, b = bad
                raise LatticeError(
                    f"not orthomodular: {self.label(a)} <= {self.label(b)} but "
                    f"{self.label(b)} != {self.label(a)} ∨ ({self.label(b)} ∧ {self.label(a)}⊥)",
                    bad,
                )

    def __repr__(self) -> str:
        return f"TableLattice(n={self.n}, family={self.family!r})"

    def leq(self, a, b):
        return bool(self._leq[a, b])

    def meet(self, a, b):
        return int(self._meet[a, b])

    def join(self, a, b):
        return int(self._join[a, b])

    def ortho(self, a):
        return int(self._ortho[a])

    def label(self, a):
        return self._labels[a]

    def _lookup(self, text):
        return self._index.get(text)

    def below(self, a):
        return [int(i) for i in np.flatnonzero(self._leq[:, a])]

    @cached_property
    def _atoms(self) -> list[int]:
        down = self._leq.sum(axis=0)
        # atoms are exactly the elements whose down-set is {0, itself}
        return [int(i) for i in np.flatnonzero(down == 2)]

    def atoms(self):
        return list(self._atoms)

    def tables(self):
        return self._leq, self._meet, self._join, self._ortho


def _check_partial_order(leq: np.ndarray) -> None:
    if not leq.diagonal().all():
        i = int(np.flatnonzero(~leq.diagonal())[0])
        raise LatticeError(f"order is not reflexive at element {i}", (i,))
    both = leq & leq.T
    np.fill_diagonal(both, False)
    if both.any():
        i, j = (int(v) for v in np.argwhere(both)[0])
        raise LatticeError(f"order is not antisymmetric at ({i}, {j})", (i, j))
    m = leq.astype(np.float32)
    composed = (m @ m) > 0
    bad = composed & ~leq
    if bad.any():
        i, k = (int(v) for v in np.argwhere(bad)[0])
        j = int(np.flatnonzero(leq[i] & leq[:, k])[0])
        raise LatticeError(f"order is not transitive: {i} <= {j} <= {k}", (i, j, k))


def _bound_tables(leq: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = leq.shape[0]
    down = leq.sum(axis=0)
    up = leq.sum(axis=1)
    meet = np.empty((n, n), dtype=np.int64)
    join = np.empty((n, n), dtype=np.int64)
    for a in range(n):
        lower = leq[:, a][:, None] & leq  # lower[x, b]: x <= a and x <= b
        cand = np.where(lower, down[:, None], -1).argmax(axis=0)
        # every lower bound must lie below the candidate
        if (lower & ~leq[:, cand]).any():
            b = int(np.flatnonzero((lower & ~leq[:, cand]).any(axis=0))[0])
            raise LatticeError(f"elements {a} and {b} have no meet", (a, b))
        meet[a] = cand
        upper = leq[a][:, None] & leq.T  # upper[y, b]: a <= y and b <= y
        cand = np.where(upper, up[:, None], -1).argmax(axis=0)
        if (upper & ~leq[cand].T).any():
            b = int(np.flatnonzero((upper & ~leq[cand].T).any(axis=0))[0])
            raise LatticeError(f"elements {a} and {b} have no join", (a, b))
        join[a] = cand
    return meet, join


def check_ortholattice(L: OrthoLattice) -> None:
    """Raise :class:`LatticeError` unless ``ortho`` is an order-reversing
    involution satisfying the complement laws."""
    leq, meet, join, ortho = L.tables()
    n = L.n
    if sorted(ortho.tolist()) != list(range(n)):
        raise LatticeError("orthocomplement is not a permutation")
    idx = np.arange(n)
    if not (ortho[ortho] == idx).all():
        x = int(np.flatnonzero(ortho[ortho] != idx)[0])
        raise LatticeError(f"orthocomplement is not an involution at {L.label(x)}", (x,))
    # x <= y  =>  y⊥ <= x⊥
    reversed_ok = leq[ortho][:, ortho].T
    bad = leq & ~reversed_ok
    if bad.any():
        x, y = (int(v) for v in np.argwhere(bad)[0])
        raise LatticeError(f"orthocomplement is not order-reversing on ({x}, {y})", (x, y))
    if not (join[idx, ortho] == L.top).all():
        x = int(np.flatnonzero(join[idx, ortho] != L.top)[0])
        raise LatticeError(f"{L.label(x)} ∨ {L.label(x)}⊥ != I", (x,))
    if not (meet[idx, ortho] == L.bottom).all():
        x = int(np.flatnonzero(meet[idx, ortho] != L.bottom)[0])
        raise LatticeError(f"{L.label(x)} ∧ {L.label(x)}⊥ != 0", (x,))


def verify_orthomodular(L: OrthoLattice) -> tuple[int, int] | None:
    """First pair ``(A, B)`` with ``A <= B`` and ``B != A ∨ (B ∧ A⊥)``, or None."""
    leq, meet, join, ortho = L.tables()
    idx = np.arange(L.n)
    rebuilt = join[idx[:, None], meet[idx[None, :], ortho[:, None]]]
    bad = leq & (rebuilt != idx[None, :])
    if bad.any():
        a, b = np.argwhere(bad)[0]
        return int(a), int(b)
    return None


def distributivity_counterexample(L: OrthoLattice, *, force: bool = False) -> tuple[int, int, int] | None:
    """First triple violating ``A ∨ (B ∧ C) = (A ∨ B) ∧ (A ∨ C)``, or None."""
    if L.n > EXHAUSTIVE_CAP and not force:
        raise LatticeSizeError(f"distributivity check skipped above {EXHAUSTIVE_CAP} elements")
    if L.is_boolean:
        return None
    _, meet, join, _ = L.tables()
    for a in range(L.n):
        left = join[a][meet]
        right = meet[join[a][:, None], join[a][None, :]]
        bad = left != right
        if bad.any():
            b, c = np.argwhere(bad)[0]
            return a, int(b), int(c)
    return None


def is_distributive(L: OrthoLattice, *, force: bool = False) -> bool:
    return distributivity_counterexample(L, force=force) is None


def is_orthomodular(L: OrthoLattice) -> bool:
    return verify_orthomodular(L) is None


def is_compatible(L: OrthoLattice, a: int, b: int) -> bool:
    return L.is_compatible(a, b)


def meet(L: OrthoLattice, a: int, b: int) -> int:
    return L.meet(a, b)


def join(L: OrthoLattice, a: int, b: int) -> int:
    return L.join(a, b)


def ortho(L: OrthoLattice, a: int) -> int:
    return L.ortho(a)


def leq(L: OrthoLattice, a: int, b: int) -> bool:
    return L.leq(a, b)


def atoms(L: OrthoLattice) -> list[int]:
    return L.atoms()


def build_boolean(atom_names: Sequence[str]) -> BooleanLattice:
    """Powerset lattice on ``atom_names`` (1 to 16 atoms)."""
    if not 1 <= len(atom_names) <= MAX_BOOLEAN_ATOMS:
        raise LatticeSizeError(f"Boolean lattices take 1..{MAX_BOOLEAN_ATOMS} atoms, got {len(atom_names)}")
    return BooleanLattice(atom_names)


def _mo_names(n: int) -> list[str]:
    if n <= 26:
        return [chr(ord("a") + i) for i in range(n)]
    return [f"x{i}" for i in range(n)]


def build_mo(n: int) -> TableLattice:
    """Horizontal sum of ``n`` four-element Boolean blocks.

    Elements are ordered ``0, a, ~a, b, ~b, ..., I``.
    """
    if n < 1:
        raise LatticeSizeError("MO_n needs n >= 1")
    size = 2 * n + 2
    top = size - 1
    leq = np.zeros((size, size), dtype=bool)
    leq[0, :] = True
    leq[:, top] = True
    np.fill_diagonal(leq, True)
    ortho = [top] + [0] * (size - 2) + [0]
    labels = ["0"]
    for i, name in enumerate(_mo_names(n)):
        ortho[2 * i + 1] = 2 * i + 2
        ortho[2 * i + 2] = 2 * i + 1
        labels += [name, f"~{name}"]
    labels.append("I")
    return TableLattice(leq, ortho, labels, family=f"mo{n}")


def benzene_ring() -> TableLattice:
    """The six-element ortholattice O6, which is not orthomodular.

    Two chains ``0 < a < b < I`` and ``0 < ~b < ~a < I``.
    """
    labels = ["0", "a", "b", "~b", "~a", "I"]
    below = {0: [0], 1: [0, 1], 2: [0, 1, 2], 3: [0, 3], 4: [0, 3, 4], 5: list(range(6))}
    leq = np.zeros((6, 6), dtype=bool)
    for hi, lows in below.items():
        leq[lows, hi] = True
    return TableLattice(leq, [5, 4, 3, 2, 1, 0], labels, family="o6", require_orthomodular=False)


def iter_pairs(L: OrthoLattice) -> Iterator[tuple[int, int]]:
    for a in L.elements():
        for b in range(a + 1, L.n):
            yield a, b


def valid_label(text: str) -> bool:
    return bool(_LABEL_RE.match(text))
