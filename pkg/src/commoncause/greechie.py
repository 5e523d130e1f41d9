"""Greechie diagrams: a text format for block structures and their pasting.

Format, one directive per line::

    # two blocks sharing the atom c
    block: a b c
    block: c d e

Labels match ``[A-Za-z_][A-Za-z0-9_]*``; ``#`` starts a comment.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .lattice import EXHAUSTIVE_CAP, LatticeError, LatticeSizeError, TableLattice, valid_label

MAX_PASTED_ELEMENTS = EXHAUSTIVE_CAP


class DiagramError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


@dataclass(frozen=True)
class GreechieDiagram:
    blocks: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(tuple(b) for b in self.blocks))
        if not self.blocks:
            raise DiagramError("diagram has no blocks")
        for i, block in enumerate(self.blocks):
            _check_block(block)
            for j in range(i):
                shared = set(block) & set(self.blocks[j])
                if len(shared) > 1:
                    raise DiagramError(f"blocks {j} and {i} share {len(shared)} atoms {sorted(shared)}")

    @property
    def atom_universe(self) -> tuple[str, ...]:
        seen: dict[str, None] = {}
        for block in self.blocks:
            for a in block:
                seen.setdefault(a)
        return tuple(seen)

    def to_text(self) -> str:
        return "".join(f"block: {' '.join(b)}\n" for b in self.blocks)


def _check_block(block, line=None):
    if not block:
        raise DiagramError("empty block", line)
    for a in block:
        if not valid_label(a) or a == "I":
            raise DiagramError(f"invalid atom label {a!r}", line)
    if len(set(block)) != len(block):
        dup = next(a for a in block if block.count(a) > 1)
        raise DiagramError(f"duplicate atom {dup!r} within a block", line)
    if len(block) < 2:
        raise DiagramError("a block needs at least 2 atoms", line)


def parse_diagram(text: str) -> GreechieDiagram:
    blocks: list[tuple[str, ...]] = []
    lines: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        if not sep or key.strip() != "block":
            raise DiagramError(f"expected 'block: <atoms>', got {raw.strip()!r}", lineno)
        block = tuple(rest.split())
        _check_block(block, lineno)
        for prev, prev_line in zip(blocks, lines):
            shared = set(prev) & set(block)
            if len(shared) > 1:
                raise DiagramError(
                    f"block shares {len(shared)} atoms {sorted(shared)} with the block on line {prev_line}",
                    lineno,
                )
        blocks.append(block)
        lines.append(lineno)
    return GreechieDiagram(tuple(blocks))


def read_diagram(path) -> GreechieDiagram:
    with open(path, encoding="utf-8") as fh:
        return parse_diagram(fh.read())


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def paste(d: GreechieDiagram, *, family: str = "greechie") -> TableLattice:
    """Paste the Boolean algebras of the blocks along shared atoms.

    A subset of one block and a subset of another are the same element when
    they are equal as atom sets, or when their block-complements are equal
    (0, I, a shared atom, or that atom's complement).
    """
    if not d.blocks:
        raise DiagramError("diagram has no blocks")
    offsets = []
    total = 0
    for block in d.blocks:
        offsets.append(total)
        total += 1 << len(block)
    if total > 1 << 20:
        raise LatticeSizeError(f"diagram has {total} block elements before pasting")

    def node(bi, mask):
        return offsets[bi] + mask

    def mask_of(bi, atoms):
        block = d.blocks[bi]
        return sum(1 << block.index(a) for a in atoms)

    uf = _UnionFind(total)
    for i, j in combinations(range(len(d.blocks)), 2):
        bi, bj = d.blocks[i], d.blocks[j]
        full_i, full_j = (1 << len(bi)) - 1, (1 << len(bj)) - 1
        shared = [a for a in bi if a in bj]
        for sub in ([], shared):
            mi, mj = mask_of(i, sub), mask_of(j, sub)
            uf.union(node(i, mi), node(j, mj))
            uf.union(node(i, full_i ^ mi), node(j, full_j ^ mj))

    classes: dict[int, list[tuple[int, int]]] = {}
    for bi, block in enumerate(d.blocks):
        for mask in range(1 << len(block)):
            classes.setdefault(uf.find(node(bi, mask)), []).append((bi, mask))
    if len(classes) > MAX_PASTED_ELEMENTS:
        raise LatticeSizeError(f"pasting has {len(classes)} elements, above the cap {MAX_PASTED_ELEMENTS}")

    def rep_label(bi, mask):
        block = d.blocks[bi]
        if mask == 0:
            return "0"
        if mask == (1 << len(block)) - 1:
            return "I"
        return "|".join(a for k, a in enumerate(block) if mask >> k & 1)

    universe = d.atom_universe
    atom_rank = {a: k for k, a in enumerate(universe)}

    def sort_key(item):
        root, members = item
        bi, mask = members[0]
        size = bin(mask).count("1")
        if size == len(d.blocks[bi]):
            return (2, 0, 0)
        if size == 0:
            return (-1, 0, 0)
        if size == 1:
            atom = d.blocks[bi][mask.bit_length() - 1]
            return (0, atom_rank[atom], 0)
        return (1, size, root)

    ordered = sorted(classes.items(), key=sort_key)
    index = {root: k for k, (root, _) in enumerate(ordered)}
    n = len(ordered)
    labels = []
    for _, members in ordered:
        candidates = [rep_label(bi, mask) for bi, mask in members]
        labels.append(min(candidates, key=len))

    leq = np.zeros((n, n), dtype=bool)
    ortho: list[int | None] = [None] * n
    for bi, block in enumerate(d.blocks):
        full = (1 << len(block)) - 1
        ids = [index[uf.find(node(bi, m))] for m in range(full + 1)]
        for m in range(full + 1):
            ortho_id = ids[full ^ m]
            if ortho[ids[m]] not in (None, ortho_id):
                raise LatticeError(f"element {labels[ids[m]]} gets two orthocomplements")
            ortho[ids[m]] = ortho_id
            sub = m
            while True:
                leq[ids[sub], ids[m]] = True
                if sub == 0:
                    break
                sub = (sub - 1) & m
    return TableLattice(leq, ortho, labels, family=family)


#: Curated fixtures: a two-block chain, a three-block chain and a three-block
#: star whose blocks all share one atom.
FIXTURES = {
    "chain2": "block: a b c\nblock: c d e\n",
    "chain3": "block: a b c\nblock: c d e\nblock: e f g\n",
    "star3": "block: a b c\nblock: c d e\nblock: c f g\n",
}


def fixture(name: str) -> TableLattice:
    try:
        text = FIXTURES[name]
    except KeyError:
        raise KeyError(f"unknown Greechie fixture {name!r}; known: {sorted(FIXTURES)}") from None
    return paste(parse_diagram(text), family=f"greechie:{name}")
