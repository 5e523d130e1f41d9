"""The lemmas and propositions about common-cause closedness, run as
falsifiable properties over generated finite instances.

Every check returns a :class:`PropertyReport`.  A check whose hypotheses do
not hold on the instance reports ``not-applicable`` with the unmet hypothesis,
never a silent pass.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations

from . import greechie
from .causality import (
    CommonCauseCheck,
    NotCorrelated,
    correlated_pairs,
    correlation_from_atoms,
    find_common_causes,
    is_common_cause_closed,
    iter_correlated_pairs,
)
from .lattice import MAX_BOOLEAN_ATOMS, OrthoLattice, build_boolean, build_mo
from .states import (
    InvalidMeasure,
    Measure,
    is_faithful,
    measure_from_atom_weights,
    orthogonal_pairs,
    phi_atoms,
    q_decompose,
    random_state,
    rational_json,
    validate_measure,
)

BOOLEAN_NAMES = "pqrstuvwxyzabcde"


class Verdict(str, enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    NOT_APPLICABLE = "not-applicable"
    EXPLORATORY = "exploratory"


@dataclass(frozen=True)
class PropertyReport:
    property: str
    instance: str
    verdict: Verdict
    reason: str = ""
    witness: dict | None = None

    @property
    def failed(self) -> bool:
        return self.verdict is Verdict.FAIL

    def to_json(self) -> dict:
        return {
            "property": self.property,
            "instance": self.instance,
            "verdict": self.verdict.value,
            "reason": self.reason,
            "witness": self.witness,
        }


def boolean_names(k: int) -> list[str]:
    return list(BOOLEAN_NAMES[:k])


def _na(name, instance, reason):
    return PropertyReport(name, instance, Verdict.NOT_APPLICABLE, reason)


def _atom_pairs_below_one(L: OrthoLattice, m: Measure):
    atoms = L.atoms()
    return [(p, q) for i, p in enumerate(atoms) for q in atoms[i + 1:] if m[L.join(p, q)] < 1]


def check_measure_valid(L: OrthoLattice, m: Measure, *, instance: str = "", raw=None) -> PropertyReport:
    """The instance's value table passes validate_measure."""
    name = "measure_valid"
    values = m.values() if raw is None else raw
    try:
        validate_measure(L, values)
    except InvalidMeasure as exc:
        witness = None
        if exc.pair is not None:
            witness = {"pair": [L.label(x) for x in exc.pair]}
        return PropertyReport(name, instance, Verdict.FAIL, str(exc), witness)
    return PropertyReport(name, instance, Verdict.PASS)


def check_faithful_atom_lemma(L: OrthoLattice, m: Measure, *, instance: str = "") -> PropertyReport:
    name = "faithful_atom_lemma"
    if not is_faithful(L, m):
        return _na(name, instance, "measure is not faithful")
    pa, at = set(phi_atoms(L, m)), set(L.atoms())
    if pa == at:
        return PropertyReport(name, instance, Verdict.PASS)
    odd = sorted(pa ^ at)[0]
    return PropertyReport(
        name, instance, Verdict.FAIL, "φ-atoms differ from atoms",
        {"element": L.label(odd), "is_atom": odd in at, "is_phi_atom": odd in pa},
    )


def check_correlation_iff(L: OrthoLattice, m: Measure, *, instance: str = "") -> PropertyReport:
    """Some correlated pair exists iff φ(P ∨ Q) < 1, for every pair of atoms.

    Asserted on Boolean lattices only; elsewhere the data are recorded as
    exploration of the general-lattice question.
    """
    name = "correlation_iff"
    if not is_faithful(L, m):
        return _na(name, instance, "measure is not faithful")
    atoms = L.atoms()
    if len(atoms) < 2:
        return _na(name, instance, "fewer than two atoms")
    exists = next(iter_correlated_pairs(L, m), None) is not None
    mismatches = []
    below_one = 0
    for i, p in enumerate(atoms):
        for q in atoms[i + 1:]:
            lt = m[L.join(p, q)] < 1
            below_one += lt
            if lt != exists:
                mismatches.append((p, q))
    data = {
        "correlation_exists": exists,
        "atom_pairs_below_one": below_one,
        "mismatched_pairs": [[L.label(p), L.label(q)] for p, q in mismatches],
    }
    if not L.is_boolean:
        data["some_pair_below_one"] = below_one > 0
        return PropertyReport(name, instance, Verdict.EXPLORATORY, "lattice is not Boolean", data)
    if mismatches:
        return PropertyReport(name, instance, Verdict.FAIL, "iff broken", data)
    return PropertyReport(name, instance, Verdict.PASS, "", data)


def check_witness_construction(L: OrthoLattice, m: Measure, *, instance: str = "") -> PropertyReport:
    """(P ∨ Q, P) is correlated with φ(A ∧ B) = φ(P) whenever φ(P ∨ Q) < 1."""
    name = "witness_construction"
    if not is_faithful(L, m):
        return _na(name, instance, "measure is not faithful")
    checked = 0
    for p, q in permutations(L.atoms(), 2):
        if not m[L.join(p, q)] < 1:
            continue
        checked += 1
        try:
            w = correlation_from_atoms(L, m, p, q)
        except NotCorrelated as exc:
            return PropertyReport(name, instance, Verdict.FAIL, str(exc), {"p": L.label(p), "q": L.label(q)})
        if not (w.lhs == m[p] and w.rhs == m[L.join(p, q)] * m[p] and w.lhs > w.rhs):
            return PropertyReport(name, instance, Verdict.FAIL, "witness values wrong", w.to_json(L))
    if not checked:
        return _na(name, instance, "no atom pair with φ(P ∨ Q) < 1")
    return PropertyReport(name, instance, Verdict.PASS, "", {"pairs": checked})


def check_two_atom_not_closed(L: OrthoLattice, m: Measure, *, instance: str = "") -> PropertyReport:
    """Two atoms with φ(P ∨ Q) < 1 rule out common-cause closedness."""
    name = "two_atom_not_closed"
    if not is_faithful(L, m):
        return _na(name, instance, "measure is not faithful")
    pairs = _atom_pairs_below_one(L, m)
    if not pairs:
        return _na(name, instance, "no atom pair with φ(P ∨ Q) < 1")
    p, q = pairs[0]
    verdict = is_common_cause_closed(L, m)
    atoms = {"p": L.label(p), "q": L.label(q)}
    if verdict.closed:
        return PropertyReport(name, instance, Verdict.FAIL, "reported closed", atoms)
    return PropertyReport(name, instance, Verdict.PASS, "", {**atoms, "unexplained": verdict.witness.to_json(L)})


def check_characterization(L: OrthoLattice, m: Measure, *, instance: str = "") -> PropertyReport:
    """Closed iff at most one φ-atom (Boolean, faithful, some correlation)."""
    name = "characterization"
    if not L.is_boolean:
        return _na(name, instance, "lattice is not Boolean")
    if not is_faithful(L, m):
        return _na(name, instance, "measure is not faithful")
    if next(iter_correlated_pairs(L, m), None) is None:
        return _na(name, instance, "no correlated pair")
    n_atoms = len(phi_atoms(L, m))
    verdict = is_common_cause_closed(L, m)
    witness = {"phi_atoms": n_atoms, "closed": verdict.closed}
    if verdict.witness is not None:
        witness["unexplained"] = verdict.witness.to_json(L)
    if verdict.closed == (n_atoms <= 1):
        return PropertyReport(name, instance, Verdict.PASS, "", witness)
    return PropertyReport(name, instance, Verdict.FAIL, "closedness disagrees with φ-atom count", witness)


def check_sufficiency(L: OrthoLattice, m: Measure, *, instance: str = "") -> PropertyReport:
    """At most one φ-atom implies closed."""
    name = "sufficiency"
    if not is_faithful(L, m):
        return _na(name, instance, "measure is not faithful")
    if len(phi_atoms(L, m)) > 1:
        return _na(name, instance, "more than one φ-atom")
    verdict = is_common_cause_closed(L, m)
    if verdict.closed:
        return PropertyReport(name, instance, Verdict.PASS)
    return PropertyReport(name, instance, Verdict.FAIL, "reported not closed", verdict.witness.to_json(L))


def check_q_decomposition(L: OrthoLattice, m: Measure, *, instance: str = "") -> PropertyReport:
    """For every atom Q, α·φ₁ + (1 − α)·φ₂ = φ exactly with φ₁ the up-set
    indicator of Q.  φ₂'s nonatomicity is not checked: it cannot hold on a
    finite lattice."""
    name = "q_decomposition"
    if not L.is_boolean:
        return _na(name, instance, "lattice is not Boolean")
    if not is_faithful(L, m):
        return _na(name, instance, "measure is not faithful")
    for q in L.atoms():
        try:
            qd = q_decompose(L, m, q)
        except ValueError as exc:
            return PropertyReport(name, instance, Verdict.FAIL, str(exc), {"q": L.label(q)})
        for x in L.elements():
            if qd.reconstruct(x) != m[x] or qd.phi1[x] != int(L.leq(q, x)):
                return PropertyReport(
                    name, instance, Verdict.FAIL, "reconstruction broken", {"q": L.label(q), "element": L.label(x)}
                )
    return PropertyReport(name, instance, Verdict.PASS, "", {"atoms": len(L.atoms())})


def fake_certificate(L: OrthoLattice, m: Measure) -> CommonCauseCheck:
    """A certificate claiming every condition for a candidate that is not a cause."""
    w = next(iter_correlated_pairs(L, m), None)
    a, b = (w.a, w.b) if w is not None else (L.bottom, L.top)
    return CommonCauseCheck(a, b, L.top, True, True, True, True, True, True, True, {})


def check_certificates(
    L: OrthoLattice, m: Measure, *, instance: str = "", extra: list[CommonCauseCheck] | None = None
) -> PropertyReport:
    """Every certificate returned by the search re-verifies from scratch."""
    name = "certificates_reverify"
    certs = []
    for w in correlated_pairs(L, m):
        certs.extend(find_common_causes(L, m, w.a, w.b, require_nontrivial=False))
    certs.extend(extra or [])
    for cert in certs:
        if not cert.holds or not cert.reverify(L, m):
            return PropertyReport(
                name, instance, Verdict.FAIL, "certificate does not re-verify",
                {"a": L.label(cert.a), "b": L.label(cert.b), "c": L.label(cert.c)},
            )
    return PropertyReport(name, instance, Verdict.PASS, "", {"certificates": len(certs)})


def check_mo_family(n: int, seeds, *, denominator_bound: int = 16) -> PropertyReport:
    """MO_n admits no positive correlation, so every state is closed."""
    name = "mo_family"
    instance = f"mo:{n} seeds={len(list(seeds))}"
    L = build_mo(n)
    for seed in seeds:
        m = random_state(L, seed, denominator_bound)
        if m is None:
            return PropertyReport(name, instance, Verdict.FAIL, "no state sampled", {"seed": seed})
        pairs = correlated_pairs(L, m)
        if pairs or not is_common_cause_closed(L, m).closed:
            return PropertyReport(
                name, instance, Verdict.FAIL, "positive correlation in MO_n",
                {"seed": seed, "pair": pairs[0].to_json(L) if pairs else None},
            )
    return PropertyReport(name, instance, Verdict.PASS)


INSTANCE_PROPERTIES = (
    "measure_valid",
    "faithful_atom_lemma",
    "correlation_iff",
    "witness_construction",
    "two_atom_not_closed",
    "characterization",
    "sufficiency",
    "q_decomposition",
    "certificates_reverify",
)
PROPERTY_NAMES = INSTANCE_PROPERTIES + ("mo_family",)

FAMILIES = ("boolean", "mo", "greechie")
MUTATIONS = ("additivity", "certificate")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SuiteConfig:
    families: tuple[str, ...] = ()
    boolean_atoms: tuple[int, ...] = (1, 2, 3, 4, 5)
    mo_sizes: tuple[int, ...] = (1, 2, 3, 4, 5, 6, 7, 8)
    greechie: tuple[str, ...] = tuple(greechie.FIXTURES)
    seeds: tuple[int, ...] = tuple(range(10))
    denominator_bound: int = 16
    mutations: tuple[str, ...] = field(default=())

    def __post_init__(self):
        for fam in self.families:
            if fam not in FAMILIES:
                raise ConfigError(f"unknown family {fam!r}; known: {', '.join(FAMILIES)}")
        for mut in self.mutations:
            if mut not in MUTATIONS:
                raise ConfigError(f"unknown mutation {mut!r}; known: {', '.join(MUTATIONS)}")
        for fx in self.greechie:
            if fx not in greechie.FIXTURES:
                raise ConfigError(f"unknown Greechie fixture {fx!r}")
        if any(not 1 <= k <= MAX_BOOLEAN_ATOMS for k in self.boolean_atoms):
            raise ConfigError(f"boolean_atoms must lie in 1..{MAX_BOOLEAN_ATOMS}")
        if any(n < 1 for n in self.mo_sizes):
            raise ConfigError("mo_sizes must be positive")
        if any(s < 0 for s in self.seeds):
            raise ConfigError("seeds must be nonnegative")
        if self.denominator_bound < 1:
            raise ConfigError("denominator_bound must be positive")


DEFAULT_CONFIG = SuiteConfig(families=FAMILIES)


def _int_list(text: str) -> tuple[int, ...]:
    out: list[int] = []
    for tok in text.replace(",", " ").split():
        lo, sep, hi = tok.partition("-")
        try:
            if sep:
                if int(hi) < int(lo):
                    raise ConfigError(f"empty range {tok!r}")
                out.extend(range(int(lo), int(hi) + 1))
            else:
                out.append(int(tok))
        except ValueError:
            raise ConfigError(f"bad integer list {text!r}") from None
    return tuple(out)


def _name_list(text: str) -> tuple[str, ...]:
    return tuple(t for t in text.replace(",", " ").split() if t != "none")


def _int(value: str, lineno: int) -> int:
    try:
        return int(value)
    except ValueError:
        raise ConfigError(f"line {lineno}: expected an integer, got {value!r}") from None


def parse_config(text: str) -> SuiteConfig:
    """Parse ``key = value`` lines.

    Keys: ``families``, ``boolean_atoms`` (or ``max_atoms``), ``mo_sizes``,
    ``greechie``, ``seeds``, ``denominator_bound``, ``mutation``.  Integer
    lists accept ranges like ``1-5``.  An empty text gives an empty suite.
    """
    kwargs: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        if key == "families":
            kwargs["families"] = _name_list(value)
        elif key == "boolean_atoms":
            kwargs["boolean_atoms"] = _int_list(value)
        elif key == "max_atoms":
            kwargs["boolean_atoms"] = tuple(range(1, _int(value, lineno) + 1))
        elif key == "mo_sizes":
            kwargs["mo_sizes"] = _int_list(value)
        elif key == "greechie":
            kwargs["greechie"] = _name_list(value)
        elif key == "seeds":
            kwargs["seeds"] = _int_list(value)
        elif key == "denominator_bound":
            kwargs["denominator_bound"] = _int(value, lineno)
        elif key in ("mutation", "mutations"):
            kwargs["mutations"] = _name_list(value)
        else:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
    return SuiteConfig(**kwargs)


def _inject_additivity_fault(L: OrthoLattice, m: Measure) -> list[Fraction]:
    values = m.values()
    pairs = orthogonal_pairs(L)
    if not pairs:
        values[L.top] = Fraction(1, 2)
        return values
    a, b = next(((a, b) for a, b in pairs if L.join(a, b) != L.top), pairs[0])
    j = L.join(a, b)
    values[j] = values[j] / 2 if values[j] else Fraction(1, 2)
    return values


def run_instance(L: OrthoLattice, m: Measure, instance: str, mutations=()) -> list[PropertyReport]:
    raw = _inject_additivity_fault(L, m) if "additivity" in mutations else None
    extra = [fake_certificate(L, m)] if "certificate" in mutations else None
    return [
        check_measure_valid(L, m, instance=instance, raw=raw),
        check_faithful_atom_lemma(L, m, instance=instance),
        check_correlation_iff(L, m, instance=instance),
        check_witness_construction(L, m, instance=instance),
        check_two_atom_not_closed(L, m, instance=instance),
        check_characterization(L, m, instance=instance),
        check_sufficiency(L, m, instance=instance),
        check_q_decomposition(L, m, instance=instance),
        check_certificates(L, m, instance=instance, extra=extra),
    ]


def _instances(config: SuiteConfig):
    for fam in config.families:
        if fam == "boolean":
            for k in config.boolean_atoms:
                L = build_boolean(boolean_names(k))
                if k == 3:
                    yield L, measure_from_atom_weights(L, [Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)]), \
                        "boolean:3 canonical"
                for seed in config.seeds:
                    yield L, random_state(L, seed, config.denominator_bound), f"boolean:{k} seed={seed}"
        elif fam == "mo":
            for n in config.mo_sizes:
                L = build_mo(n)
                for seed in config.seeds:
                    yield L, random_state(L, seed, config.denominator_bound), f"mo:{n} seed={seed}"
        elif fam == "greechie":
            for fx in config.greechie:
                L = greechie.fixture(fx)
                for seed in config.seeds:
                    yield L, random_state(L, seed, config.denominator_bound), f"greechie:{fx} seed={seed}"


def run_suite(config: SuiteConfig = DEFAULT_CONFIG) -> list[PropertyReport]:
    """Run every property on every configured instance, in config order."""
    reports: list[PropertyReport] = []
    for L, m, instance in _instances(config):
        if m is None:
            reports.append(_na("state_sampling", instance, "no faithful state found"))
            continue
        reports.extend(run_instance(L, m, instance, config.mutations))
    if "mo" in config.families:
        for n in config.mo_sizes:
            reports.append(check_mo_family(n, config.seeds, denominator_bound=config.denominator_bound))
    return reports


def suite_failed(reports) -> bool:
    return any(r.failed for r in reports)


def report_lines(reports) -> str:
    return "".join(json.dumps(r.to_json(), sort_keys=True, ensure_ascii=False) + "\n" for r in reports)

