"""Refining Boolean spaces and looking for hidden common causes.

Everything here is empirical: a refinement that explains a correlation is a
finite example, and a failure to find one settles nothing.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .causality import CommonCauseCheck, CorrelationWitness, correlation_witness, find_common_causes, \
    has_nontrivial_common_cause
from .lattice import EXHAUSTIVE_CAP, BooleanLattice, OrthoLattice
from .states import InvalidMeasure, Measure, as_fraction

SEARCH_CAP = EXHAUSTIVE_CAP


@dataclass(frozen=True)
class Embedding:
    """Element map ``h`` from ``source`` into ``target``; ``mapping[x] = h(x)``."""

    source: OrthoLattice
    target: OrthoLattice
    mapping: tuple[int, ...]

    def __call__(self, x: int) -> int:
        return self.mapping[x]

    def summary(self) -> dict:
        return {
            "source_elements": self.source.n,
            "target_elements": self.target.n,
            "atoms": {
                self.source.label(a): self.target.label(self(a)) for a in self.source.atoms()
            },
        }


@dataclass(frozen=True)
class EmbeddingViolation:
    kind: str  # injectivity | bottom | top | order | meet | join | ortho | measure
    witness: tuple[int, ...]
    detail: str = ""


def dyadic_refine(
    L: BooleanLattice,
    m: Measure,
    k: int,
    split_weights: Mapping[str, Sequence] | None = None,
) -> tuple[BooleanLattice, Measure, Embedding]:
    """Split every atom into ``2**k`` atoms of equal weight.

    Atoms listed in ``split_weights`` are split into the given parts instead;
    the parts must sum to the atom's weight.  With ``k = 0`` and no table the
    refinement is the identity.
    """
    if not isinstance(L, BooleanLattice):
        raise TypeError("dyadic refinement needs a Boolean source lattice")
    if k < 0:
        raise ValueError("split depth must be >= 0")
    split_weights = dict(split_weights or {})
    unknown = set(split_weights) - set(L.atom_names)
    if unknown:
        raise KeyError(f"split table names unknown atoms {sorted(unknown)}")

    names: list[str] = []
    weights: list[Fraction] = []
    blocks: list[int] = []  # target mask of each source atom
    for i, name in enumerate(L.atom_names):
        w = m[1 << i]
        if name in split_weights:
            parts = [as_fraction(v) for v in split_weights[name]]
            if not parts or sum(parts) != w or any(p < 0 for p in parts):
                raise InvalidMeasure(f"split of {name} must be nonnegative parts summing to {w}")
        elif k == 0:
            parts = [w]
        else:
            parts = [w / (1 << k)] * (1 << k)
        start = len(names)
        if len(parts) == 1 and k == 0:
            names.append(name)
        else:
            names.extend(f"{name}_{j}" for j in range(len(parts)))
        weights.extend(parts)
        blocks.append(((1 << len(parts)) - 1) << start)

    target = BooleanLattice(names)
    m2 = Measure._from_atom_weights(target, weights)
    mapping = []
    for x in L.elements():
        image = 0
        for i in L.atom_indices(x):
            image |= blocks[i]
        mapping.append(image)
    return target, m2, Embedding(L, target, tuple(mapping))


def verify_embedding(e: Embedding, m: Measure | None = None, m2: Measure | None = None) -> EmbeddingViolation | None:
    """Exhaustive check that ``h`` is an injective ortholattice homomorphism,
    and measure-preserving when both measures are given.  None means pass."""
    S, T, h = e.source, e.target, e
    seen: dict[int, int] = {}
    for x in S.elements():
        if h(x) in seen:
            return EmbeddingViolation("injectivity", (seen[h(x)], x), f"both map to {T.label(h(x))}")
        seen[h(x)] = x
    if h(S.bottom) != T.bottom:
        return EmbeddingViolation("bottom", (S.bottom,))
    if h(S.top) != T.top:
        return EmbeddingViolation("top", (S.top,))
    for x in S.elements():
        if h(S.ortho(x)) != T.ortho(h(x)):
            return EmbeddingViolation("ortho", (x,))
        for y in S.elements():
            if S.leq(x, y) != T.leq(h(x), h(y)):
                return EmbeddingViolation("order", (x, y))
            if h(S.meet(x, y)) != T.meet(h(x), h(y)):
                return EmbeddingViolation("meet", (x, y))
            if h(S.join(x, y)) != T.join(h(x), h(y)):
                return EmbeddingViolation("join", (x, y))
    if m is not None and m2 is not None:
        for x in S.elements():
            if m2[h(x)] != m[x]:
                return EmbeddingViolation("measure", (x,), f"{m2[h(x)]} != {m[x]}")
    return None


def explain_in_extension(
    L: BooleanLattice,
    m: Measure,
    witness: CorrelationWitness,
    k: int,
    split_weights: Mapping[str, Sequence] | None = None,
) -> CommonCauseCheck | None:
    """Look for a nontrivial common cause of ``h(A), h(B)`` in the refinement.

    Returns the first certificate in index order, or None.
    """
    correlation_witness(L, m, witness.a, witness.b)
    if has_nontrivial_common_cause(L, m, witness.a, witness.b):
        raise ValueError("the correlation already has a nontrivial common cause in the source")
    if not isinstance(L, BooleanLattice):
        raise TypeError("dyadic refinement needs a Boolean source lattice")
    parts = sum(len(split_weights[a]) if split_weights and a in split_weights else 1 << k for a in L.atom_names)
    if 1 << parts > SEARCH_CAP:
        raise ValueError(f"refinement has 2^{parts} elements, above the search cap {SEARCH_CAP}")
    T, m2, h = dyadic_refine(L, m, k, split_weights)
    found = find_common_causes(T, m2, h(witness.a), h(witness.b), require_nontrivial=True)
    return found[0] if found else None


_SPLIT_LINE = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)\s*:\s*(.+)\Z")


def parse_split_table(text: str) -> dict[str, list[Fraction]]:
    """Parse ``<atom>: <rational> <rational> ...`` lines."""
    out: dict[str, list[Fraction]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        match = _SPLIT_LINE.match(line)
        if not match:
            raise ValueError(f"line {lineno}: expected '<atom>: <rational> ...', got {raw.strip()!r}")
        try:
            parts = [Fraction(tok) for tok in match.group(2).split()]
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"line {lineno}: bad rational in {raw.strip()!r}") from None
        out[match.group(1)] = parts
    return out
