"""Correlations, Reichenbachian common causes and common-cause closedness.

The search path works on integer numerators (``Measure.num``) and checks the
screening-off and relevance conditions by cross-multiplication.  Recorded
certificates carry the conditional probabilities as fractions, and
:meth:`CommonCauseCheck.reverify` recomputes them by division, independent of
the integer path.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .lattice import OrthoLattice
from .states import Measure, rational_json

CONDITIONS = ("compatible_a", "compatible_b", "gate", "occ1", "occ2", "occ3", "occ4")


class NotCorrelated(ValueError):
    """The pair is not a positively correlated pair of distinct compatible elements."""


@dataclass(frozen=True)
class CorrelationWitness:
    a: int
    b: int
    lhs: Fraction  # φ(A ∧ B)
    rhs: Fraction  # φ(A)φ(B)

    @property
    def gap(self) -> Fraction:
        return self.lhs - self.rhs

    def to_json(self, L: OrthoLattice) -> dict:
        return {
            "a": L.label(self.a),
            "b": L.label(self.b),
            "lhs": rational_json(self.lhs),
            "rhs": rational_json(self.rhs),
        }


def _witness(L: OrthoLattice, m: Measure, a: int, b: int) -> CorrelationWitness:
    return CorrelationWitness(a, b, m[L.meet(a, b)], m[a] * m[b])


def correlation_witness(L: OrthoLattice, m: Measure, a: int, b: int) -> CorrelationWitness:
    """Witness for ``(a, b)``; raises :class:`NotCorrelated` unless the pair is
    distinct, compatible and strictly positively correlated."""
    if a == b:
        raise NotCorrelated("a correlation needs two distinct elements")
    if not L.is_compatible(a, b):
        raise NotCorrelated(f"{L.label(a)} and {L.label(b)} are not compatible")
    w = _witness(L, m, a, b)
    if not w.lhs > w.rhs:
        raise NotCorrelated(
            f"({L.label(a)}, {L.label(b)}) is not positively correlated: {w.lhs} <= {w.rhs}"
        )
    return w


def _pair_scan(L: OrthoLattice, m: Measure, sign: int):
    num, den, meet = m.num, m.den, L.meet
    for a in L.elements():
        na = num(a)
        if na == 0 or na == den:
            # φ(A) ∈ {0, 1} can never be strictly correlated either way
            continue
        for b in range(a + 1, L.n):
            nb = num(b)
            if nb == 0 or nb == den:
                continue
            diff = num(meet(a, b)) * den - na * nb
            if (diff > 0 if sign > 0 else diff < 0) and L.is_compatible(a, b):
                yield a, b


def iter_correlated_pairs(L: OrthoLattice, m: Measure):
    for a, b in _pair_scan(L, m, +1):
        yield _witness(L, m, a, b)


def correlated_pairs(L: OrthoLattice, m: Measure) -> list[CorrelationWitness]:
    """All pairs ``a < b`` of distinct compatible elements with ``φ(a∧b) > φ(a)φ(b)``."""
    return list(iter_correlated_pairs(L, m))


def anticorrelated_pairs(L: OrthoLattice, m: Measure) -> list[CorrelationWitness]:
    """Diagnostic only: compatible pairs with ``φ(a∧b) < φ(a)φ(b)``."""
    return [_witness(L, m, a, b) for a, b in _pair_scan(L, m, -1)]


@dataclass(frozen=True)
class CommonCauseCheck:
    """Outcome of testing ``c`` as a common cause of ``(a, b)``.

    Conditions are evaluated in the order of :data:`CONDITIONS`; the ``occ``
    entries are None when ``0 < φ(c) < 1`` fails and they cannot be evaluated.
    ``values`` maps each occ condition to its (lhs, rhs) pair of conditional
    probabilities.  A check with :attr:`holds` true is a certificate.
    """

    a: int
    b: int
    c: int
    compatible_a: bool
    compatible_b: bool
    gate: bool
    occ1: bool | None
    occ2: bool | None
    occ3: bool | None
    occ4: bool | None
    values: dict = field(default_factory=dict, hash=False)

    @property
    def nontrivial(self) -> bool:
        return self.c != self.a and self.c != self.b

    @property
    def failure(self) -> str | None:
        for name in CONDITIONS:
            if not getattr(self, name):
                return name
        return None

    @property
    def holds(self) -> bool:
        return self.failure is None

    def reverify(self, L: OrthoLattice, m: Measure) -> bool:
        """Recompute every recorded fact from scratch (by division)."""
        return _evaluate(L, m, self.a, self.b, self.c) == self

    def to_json(self, L: OrthoLattice) -> dict:
        out = {
            "c": L.label(self.c),
            "nontrivial": self.nontrivial,
            "holds": self.holds,
            "failure": self.failure,
        }
        for name in CONDITIONS:
            out[name] = getattr(self, name)
        out["values"] = {
            k: {"lhs": rational_json(lhs), "rhs": rational_json(rhs)} for k, (lhs, rhs) in self.values.items()
        }
        return out


def _evaluate(L: OrthoLattice, m: Measure, a: int, b: int, c: int) -> CommonCauseCheck:
    compat_a = L.is_compatible(c, a)
    compat_b = L.is_compatible(c, b)
    pc = m[c]
    gate = 0 < pc < 1
    if not gate:
        return CommonCauseCheck(a, b, c, compat_a, compat_b, False, None, None, None, None, {})
    nc = L.ortho(c)
    pnc = m[nc]
    ab = L.meet(a, b)

    def cond(x, given, p_given):
        return m[L.meet(x, given)] / p_given

    a_c, b_c, ab_c = cond(a, c, pc), cond(b, c, pc), cond(ab, c, pc)
    a_nc, b_nc, ab_nc = cond(a, nc, pnc), cond(b, nc, pnc), cond(ab, nc, pnc)
    values = {
        "occ1": (ab_c, a_c * b_c),
        "occ2": (ab_nc, a_nc * b_nc),
        "occ3": (a_c, a_nc),
        "occ4": (b_c, b_nc),
    }
    return CommonCauseCheck(
        a, b, c, compat_a, compat_b, True,
        ab_c == a_c * b_c,
        ab_nc == a_nc * b_nc,
        a_c > a_nc,
        b_c > b_nc,
        values,
    )


def check_common_cause(L: OrthoLattice, m: Measure, a: int, b: int, c: int) -> CommonCauseCheck:
    """Test ``c`` against the compatibility gate, ``0 < φ(c) < 1`` and the two
    screening-off equalities and two relevance inequalities."""
    return _evaluate(L, m, a, b, c)


def _is_cause(L: OrthoLattice, m: Measure, a: int, b: int, ab: int, c: int) -> bool:
    num, meet = m.num, L.meet
    wc = num(c)
    if wc == 0 or wc == m.den:
        return False
    nc = L.ortho(c)
    wnc = num(nc)
    w_ac, w_bc = num(meet(a, c)), num(meet(b, c))
    w_anc, w_bnc = num(meet(a, nc)), num(meet(b, nc))
    return (
        w_ac * wnc > w_anc * wc
        and w_bc * wnc > w_bnc * wc
        and num(meet(ab, c)) * wc == w_ac * w_bc
        and num(meet(ab, nc)) * wnc == w_anc * w_bnc
        and L.is_compatible(c, a)
        and L.is_compatible(c, b)
    )


def _cause_candidates(L, m, a, b, require_nontrivial):
    ab = L.meet(a, b)
    for c in L.elements():
        if require_nontrivial and (c == a or c == b):
            continue
        if _is_cause(L, m, a, b, ab, c):
            yield c


def find_common_causes(
    L: OrthoLattice, m: Measure, a: int, b: int, *, require_nontrivial: bool = True
) -> list[CommonCauseCheck]:
    """Every common cause of the correlated pair ``(a, b)``, by exhaustive scan."""
    correlation_witness(L, m, a, b)
    return [_evaluate(L, m, a, b, c) for c in _cause_candidates(L, m, a, b, require_nontrivial)]


def has_nontrivial_common_cause(L: OrthoLattice, m: Measure, a: int, b: int) -> bool:
    return next(_cause_candidates(L, m, a, b, True), None) is not None


@dataclass(frozen=True)
class Closedness:
    closed: bool
    witness: CorrelationWitness | None = None

    def __bool__(self) -> bool:
        return self.closed


def is_common_cause_closed(L: OrthoLattice, m: Measure) -> Closedness:
    """Closed iff every correlated pair has a nontrivial common cause; otherwise
    the first unexplained pair (index order) is returned as witness."""
    for w in iter_correlated_pairs(L, m):
        if not has_nontrivial_common_cause(L, m, w.a, w.b):
            return Closedness(False, w)
    return Closedness(True)


def correlation_from_atoms(L: OrthoLattice, m: Measure, p: int, q: int) -> CorrelationWitness:
    """The correlated pair ``(p ∨ q, p)`` built from two atoms with ``φ(p ∨ q) < 1``."""
    atoms = L.atoms()
    if p == q or p not in atoms or q not in atoms:
        raise ValueError("need two distinct atoms")
    pq = L.join(p, q)
    if not m[pq] < 1:
        raise NotCorrelated(f"φ({L.label(pq)}) = 1, so (p ∨ q, p) is not correlated")
    return correlation_witness(L, m, pq, p)
