"""Command-line front end.

Exit codes: 0 success, 1 a property failed (or the space is not closed under
``--expect-closed``), 2 usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import greechie, theorems
from .causality import (
    NotCorrelated,
    anticorrelated_pairs,
    correlated_pairs,
    correlation_witness,
    find_common_causes,
    is_common_cause_closed,
)
from .extend import dyadic_refine, explain_in_extension, parse_split_table, verify_embedding
from .lattice import LatticeError, build_boolean, build_mo
from .states import (
    InvalidMeasure,
    classify_atomicity,
    is_phi_atom,
    measure_from_atom_weights,
    measure_to_json,
    phi_atoms,
    q_decompose,
    random_state,
    rational_json,
    read_weights,
    zero_witness,
)


class UsageError(Exception):
    pass


def _add_space_args(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--boolean", metavar="ATOMS", help="comma-separated atom names of a Boolean lattice")
    src.add_argument("--mo", type=int, metavar="N", help="the horizontal sum MO_N")
    src.add_argument("--greechie", metavar="PATH", help="Greechie diagram file")
    src.add_argument("--fixture", choices=sorted(greechie.FIXTURES), help="built-in Greechie diagram")
    st = p.add_mutually_exclusive_group()
    st.add_argument("--weights", metavar="CSV", help="atom weights as rationals, in atom order")
    st.add_argument("--measure", metavar="PATH", help="measure file of '<atom> = <num>/<den>' lines")
    st.add_argument("--seed", "--state-seed", dest="seed", type=int, help="seed for a random faithful state")
    p.add_argument("--denominator-bound", type=int, default=16)
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="pretty", action="store_false", help="JSON output (default)")
    fmt.add_argument("--pretty", dest="pretty", action="store_true", help="human-readable output")
    p.set_defaults(pretty=False)


def _load_space(args):
    try:
        if args.boolean is not None:
            L = build_boolean([a.strip() for a in args.boolean.split(",") if a.strip()])
        elif args.mo is not None:
            L = build_mo(args.mo)
        elif args.fixture is not None:
            L = greechie.fixture(args.fixture)
        else:
            L = greechie.paste(greechie.read_diagram(args.greechie))
        if args.weights is not None:
            ws = [Fraction(w.strip()) for w in args.weights.split(",")]
            m = measure_from_atom_weights(L, ws)
        elif args.measure is not None:
            m = measure_from_atom_weights(L, read_weights(args.measure))
        else:
            m = random_state(L, args.seed if args.seed is not None else 0, args.denominator_bound)
    except (LatticeError, greechie.DiagramError, InvalidMeasure, KeyError, ValueError, ZeroDivisionError,
            OSError) as exc:
        raise UsageError(str(exc)) from exc
    return L, m


def _element(L, text):
    try:
        return L.element(text)
    except KeyError as exc:
        raise UsageError(str(exc)) from exc


def analysis_report(L, m) -> dict:
    """The full analysis of a space as a JSON-ready dict."""
    report = {"lattice": L.describe()}
    if m is None:
        report["state"] = "no faithful state found"
        return report
    zw = zero_witness(L, m)
    report["measure"] = measure_to_json(L, m, L.atoms())
    report["faithful"] = zw is None
    report["zero_witness"] = None if zw is None else L.label(zw)
    report["phi_atoms"] = [L.label(x) for x in phi_atoms(L, m)]
    report["atomicity"] = classify_atomicity(L, m).value
    correlations = []
    for w in correlated_pairs(L, m):
        entry = w.to_json(L)
        ab = L.meet(w.a, w.b)
        causes = []
        for cert in find_common_causes(L, m, w.a, w.b, require_nontrivial=False):
            cj = cert.to_json(L)
            cj["is_meet_of_pair"] = cert.c == ab
            causes.append(cj)
        entry["common_causes"] = causes
        entry["explained"] = any(c["nontrivial"] for c in causes)
        correlations.append(entry)
    report["correlations"] = correlations
    report["anticorrelated_pairs"] = len(anticorrelated_pairs(L, m))
    verdict = is_common_cause_closed(L, m)
    report["closed"] = verdict.closed
    report["witness"] = None if verdict.witness is None else verdict.witness.to_json(L)
    return report


def _fmt(r: dict) -> str:
    return f"{r['num']}/{r['den']}" if r["den"] != 1 else str(r["num"])


def _pretty_analysis(rep: dict) -> str:
    lat = rep["lattice"]
    lines = [f"lattice  {lat['family']}, {lat['elements']} elements, atoms {' '.join(lat['atoms'])}"]
    if "state" in rep:
        lines.append(rep["state"])
        return "\n".join(lines) + "\n"
    lines.append("measure  " + "  ".join(f"{k}={_fmt(v)}" for k, v in rep["measure"].items()))
    lines.append(f"faithful {rep['faithful']}   φ-atoms {' '.join(rep['phi_atoms'])}")
    lines.append(f"correlated pairs: {len(rep['correlations'])}")
    for c in rep["correlations"]:
        causes = [x["c"] + ("" if x["nontrivial"] else "*") for x in c["common_causes"]]
        lines.append(
            f"  ({c['a']}, {c['b']})  {_fmt(c['lhs'])} > {_fmt(c['rhs'])}"
            f"  causes: {', '.join(causes) or '-'}"
        )
    lines.append("closed" if rep["closed"] else f"not closed; unexplained ({rep['witness']['a']}, {rep['witness']['b']})")
    return "\n".join(lines) + "\n"


def _emit(obj, pretty_text=None):
    if pretty_text is not None:
        sys.stdout.write(pretty_text)
    else:
        sys.stdout.write(json.dumps(obj, indent=2, ensure_ascii=False) + "\n")


def cmd_analyze(args) -> int:
    L, m = _load_space(args)
    rep = analysis_report(L, m)
    _emit(rep, _pretty_analysis(rep) if args.pretty else None)
    if args.expect_closed and not rep.get("closed", False):
        return 1
    return 0


def cmd_theorems(args) -> int:
    if args.list:
        sys.stdout.write("".join(name + "\n" for name in theorems.PROPERTY_NAMES))
        return 0
    if args.config is None:
        config = theorems.DEFAULT_CONFIG
    else:
        try:
            with open(args.config, encoding="utf-8") as fh:
                config = theorems.parse_config(fh.read())
        except (OSError, theorems.ConfigError, ValueError) as exc:
            raise UsageError(str(exc)) from exc
    reports = theorems.run_suite(config)
    if args.pretty:
        for r in reports:
            sys.stdout.write(f"{r.verdict.value:15s} {r.property:22s} {r.instance}  {r.reason}\n")
    else:
        sys.stdout.write(theorems.report_lines(reports))
    return 1 if theorems.suite_failed(reports) else 0


def cmd_qdecompose(args) -> int:
    L, m = _load_space(args)
    if m is None:
        raise UsageError("no faithful state found")
    q = _element(L, args.atom)
    if not is_phi_atom(L, m, q):
        raise UsageError(f"{args.atom} is not a φ-atom (φ-atom check failed)")
    try:
        qd = q_decompose(L, m, q)
    except (ValueError, InvalidMeasure) as exc:
        raise UsageError(str(exc)) from exc
    out = {
        "q": L.label(q),
        "alpha": rational_json(qd.alpha),
        "degenerate": qd.phi2 is None,
        "phi1": measure_to_json(L, qd.phi1),
        "phi2": None if qd.phi2 is None else measure_to_json(L, qd.phi2),
    }
    _emit(out)
    return 0


def cmd_extend(args) -> int:
    L, m = _load_space(args)
    if m is None:
        raise UsageError("no faithful state found")
    if not L.is_boolean:
        raise UsageError("extension needs a Boolean source lattice")
    split = None
    if args.split_weights:
        try:
            with open(args.split_weights, encoding="utf-8") as fh:
                split = parse_split_table(fh.read())
        except (OSError, ValueError) as exc:
            raise UsageError(str(exc)) from exc
    if args.pair is None:
        verdict = is_common_cause_closed(L, m)
        if verdict.closed:
            raise UsageError("the space is common cause closed; nothing to explain")
        witness = verdict.witness
    else:
        parts = args.pair.split(",")
        if len(parts) != 2:
            raise UsageError("--pair takes two comma-separated element labels")
        a, b = (_element(L, p) for p in parts)
        try:
            witness = correlation_witness(L, m, a, b)
        except NotCorrelated as exc:
            raise UsageError(str(exc)) from exc
    try:
        cert = explain_in_extension(L, m, witness, args.depth, split)
        T, m2, h = dyadic_refine(L, m, args.depth, split)
    except (ValueError, KeyError, InvalidMeasure) as exc:
        raise UsageError(str(exc)) from exc
    violation = verify_embedding(h, m, m2)
    out = {
        "empirical": True,
        "depth": args.depth,
        "source_pair": witness.to_json(L),
        "embedding": {
            **h.summary(),
            "verified": violation is None,
            "violation": None if violation is None else violation.kind,
        },
        "image_pair": [T.label(h(witness.a)), T.label(h(witness.b))],
        "certificate": None if cert is None else cert.to_json(T),
    }
    _emit(out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="commoncause", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="atoms, correlations, common causes and closedness")
    _add_space_args(p)
    p.add_argument("--expect-closed", action="store_true", help="exit 1 if the space is not closed")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("theorems", help="run the property suite")
    p.add_argument("--config", metavar="PATH")
    p.add_argument("--list", action="store_true", help="list property names without running")
    p.add_argument("--pretty", action="store_true")
    p.set_defaults(func=cmd_theorems)

    p = sub.add_parser("qdecompose", help="decompose the measure along a φ-atom")
    _add_space_args(p)
    p.add_argument("--atom", required=True, metavar="LABEL")
    p.set_defaults(func=cmd_qdecompose)

    p = sub.add_parser("extend", help="search a dyadic refinement for a hidden common cause")
    _add_space_args(p)
    p.add_argument("--pair", metavar="A,B", help="correlated pair (default: first unexplained)")
    p.add_argument("--depth", type=int, default=1, metavar="K")
    p.add_argument("--split-weights", metavar="PATH")
    p.set_defaults(func=cmd_extend)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"commoncause {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
