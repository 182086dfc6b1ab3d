"""Command-line interface: ``fgx <command> ...``.

Exit codes: 0 success / PASS, 1 a verification FAIL, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import checks
from .characters import CharacterTableError, character_table, spin_types
from .cohomology import (CocycleError, CohomologyCapError, CohomologyComputation,
                         DEFAULT_SIZE_CAP, check_multiplier_modulus)
from .core.catalogue import CatalogueError, build_named, canonical_key
from .core.coset import CosetLimitExceeded, default_max_cosets, todd_coxeter
from .core.presentation import PresentationError
from .core.tables import GroupError, GroupTable
from .extensions import stairway_search
from .formats import (FormatError, load_presentation, resolve_group, table_to_json, write_json)
from .structure import analysis_report, subgroup_generated


class UsageError(Exception):
    pass


def _emit(payload, fmt: str, out: Optional[str] = None) -> None:
    if fmt == "text":
        text = _as_text(payload)
    else:
        text = json.dumps(payload, indent=2)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _as_text(payload, indent: int = 0) -> str:
    pad = " " * indent
    if isinstance(payload, dict):
        if not payload:
            return pad + "{}"
        width = max(len(str(k)) for k in payload)
        lines = []
        for k, v in payload.items():
            if isinstance(v, (dict, list)) and v and not _flat_list(v):
                lines.append(f"{pad}{str(k):<{width}} :")
                lines.append(_as_text(v, indent + 2))
            else:
                lines.append(f"{pad}{str(k):<{width}} : {_scalar(v)}")
        return "\n".join(lines)
    if isinstance(payload, list):
        sep = "\n\n" if any(isinstance(v, dict) for v in payload) else "\n"
        return sep.join(_as_text(v, indent) if isinstance(v, (dict, list)) else pad + _scalar(v)
                        for v in payload)
    return pad + _scalar(payload)


def _flat_list(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v) and len(v) <= 32


def _scalar(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    if isinstance(v, bool):
        return "yes" if v else "no"
    return str(v)


def _element(G: GroupTable, token: str) -> int:
    token = token.strip()
    if token in G.named:
        return G.named[token]
    if G.labels and token in G.labels:
        return G.labels.index(token)
    try:
        g = int(token)
    except ValueError:
        raise UsageError(f"unknown element {token!r}: not a named element, label or index") from None
    if not 0 <= g < G.order:
        raise UsageError(f"element index {g} out of range")
    return g


# ----------------------------------------------------------------- commands

def cmd_build(args) -> int:
    G = build_named(canonical_key(args.key, args.n))
    payload = table_to_json(G)
    if args.format == "text":
        payload = {"name": G.name, "order": G.order, "named": payload.get("named", {})}
    _emit(payload, args.format, args.out)
    return 0


def cmd_analyze(args) -> int:
    G = resolve_group(args.group)
    rep = {"group": G.name}
    rep.update(analysis_report(G))
    _emit(rep, args.format, args.out)
    return 0


def cmd_multiplier(args) -> int:
    G = resolve_group(args.group)
    m = args.coeff_mod or max(G.order, 2)
    check_multiplier_modulus(G, m)
    comp = CohomologyComputation(G, m, force=args.force, cap=args.cap)
    h2 = comp.h2()
    mult = comp.multiplier()
    rep = {"group": G.name or f"order-{G.order}", "coeff_modulus": m,
           "h2_invariants": list(h2.invariants), "hom_size": comp.hom_size,
           "multiplier_invariants": list(mult.invariants), "generator_cocycles": None}
    if args.cocycles_out:
        write_json({"group": rep["group"], "coeff_modulus": m,
                    "h2_generators": [c.to_json() for c in h2.generators],
                    "multiplier_generators": [c.to_json() for c in mult.generators]},
                   args.cocycles_out)
        rep["generator_cocycles"] = str(args.cocycles_out)
    _emit(rep, args.format, args.out)
    return 0


def cmd_chartable(args) -> int:
    G = resolve_group(args.group)
    table = character_table(G)
    spin = None
    if args.spin_center:
        gens = [_element(G, t) for t in args.spin_center.split(",") if t.strip()]
        spin = spin_types(G, subgroup_generated(G, gens), table)
    payload = table.to_json(spin)
    if args.format == "text":
        payload = {"group": G.name, "order": G.order, "classes": len(table.classes),
                   "degrees": table.degrees,
                   **({"spin_types": {str(tuple(t["tau"])): t["degrees"]
                                      for t in spin.to_json()["types"]}} if spin else {})}
    _emit(payload, args.format, args.out)
    return 0


def cmd_coset(args) -> int:
    pres = load_presentation(args.presentation)
    cap = args.max_cosets if args.max_cosets is not None else default_max_cosets()
    G = todd_coxeter(pres, max_cosets=cap)
    if not G.name:
        G = G.renamed(Path(args.presentation).stem)
    payload = table_to_json(G)
    if args.format == "text":
        payload = {"name": G.name, "order": G.order}
    _emit(payload, args.format, args.out)
    return 0


def cmd_stairway(args) -> int:
    G = resolve_group(args.group)
    results = stairway_search(G, args.order, max_results=args.max_results, force=args.force,
                              cap=args.cap)
    out_dir = Path(args.out_dir) if args.out_dir else None
    if out_dir:
        out_dir.mkdir(parents=True, exist_ok=True)
    report = []
    for i, r in enumerate(results):
        entry = {"pair": [G.label(r.pair[0]), G.label(r.pair[1])],
                 "extension_order": r.witness.K.order,
                 "efficient": r.efficient,
                 "iso_class_representative": None,
                 "cocycle_class": list(r.class_coefficients),
                 "z": r.witness.K.label(r.witness.z)}
        if out_dir:
            path = out_dir / f"{G.name or 'group'}_ext{i}.json"
            K = r.witness.K.renamed(f"{G.name or 'group'}-ext{i}")
            write_json(table_to_json(K), path)
            entry["iso_class_representative"] = str(path)
        report.append(entry)
    _emit(report, args.format, args.out)
    return 0


def cmd_verify(args) -> int:
    if args.list:
        _emit([{"name": c.name, "claim": c.claim} for c in checks.REGISTRY], args.format)
        return 0
    if not args.all and not args.checks:
        raise UsageError("verify needs --all or one or more check names (see --list)")
    names = None if args.all else args.checks
    for n in names or []:
        if n not in checks.check_names():
            raise UsageError(f"unknown check {n!r}; known: {', '.join(checks.check_names())}")
    report = checks.run_suite(names, include_slow=args.include_slow)
    if args.no_timing:
        for c in report["checks"]:
            c.pop("elapsed", None)
    if args.format == "text":
        lines = [f"{c['status']:<4}  {c['name']:<22} {c.get('elapsed', '')!s:>7}  {c['claim']}"
                 for c in report["checks"]]
        lines.append(f"overall: {report['status']}")
        text = "\n".join(lines)
        if args.out:
            Path(args.out).write_text(text + "\n")
        else:
            print(text)
    else:
        _emit(report, "json", args.out)
    return 0 if report["status"] == "PASS" else 1


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json",
                        help="output format (default json)")
    common.add_argument("--out", help="write output to this file instead of stdout")

    parser = argparse.ArgumentParser(prog="fgx", description="Finite group tables, multipliers "
                                     "and central extensions.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", parents=[common], help="build a catalogue group as a Cayley table")
    p.add_argument("key", help="G20, R54, RP54, G39, G81, G81VAR(a,b), G243 or TPRIME(n)")
    p.add_argument("--n", type=int, help="n for TPRIME (3..5)")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("analyze", parents=[common], help="structural analysis report")
    p.add_argument("group", help="Cayley JSON file or catalogue key")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("multiplier", parents=[common], help="Schur multiplier report")
    p.add_argument("group", help="Cayley JSON file or catalogue key")
    p.add_argument("--coeff-mod", type=int, help="coefficient modulus m (default |G|)")
    p.add_argument("--force", action="store_true", help=f"allow |G| > {DEFAULT_SIZE_CAP}")
    p.add_argument("--cap", type=int, default=DEFAULT_SIZE_CAP, help=argparse.SUPPRESS)
    p.add_argument("--cocycles-out", help="write generator cocycles to this JSON file")
    p.set_defaults(func=cmd_multiplier)

    p = sub.add_parser("chartable", parents=[common], help="character table (Dixon)")
    p.add_argument("group", help="Cayley JSON file or catalogue key")
    p.add_argument("--spin-center", help="comma-separated generators of a central subgroup")
    p.set_defaults(func=cmd_chartable)

    p = sub.add_parser("coset", parents=[common], help="Todd-Coxeter on a presentation JSON file")
    p.add_argument("presentation")
    p.add_argument("--max-cosets", type=int, help="coset cap (default FGX_MAX_COSETS or 200000)")
    p.set_defaults(func=cmd_coset)

    p = sub.add_parser("stairway", parents=[common], help="one-step efficient central extensions")
    p.add_argument("group", help="Cayley JSON file or catalogue key")
    p.add_argument("--order", type=int, required=True, help="order d of the new central element")
    p.add_argument("--max-results", type=int, default=50)
    p.add_argument("--force", action="store_true", help=f"allow |G| > {DEFAULT_SIZE_CAP}")
    p.add_argument("--cap", type=int, default=DEFAULT_SIZE_CAP, help=argparse.SUPPRESS)
    p.add_argument("--out-dir", help="write each extension's Cayley JSON into this directory")
    p.set_defaults(func=cmd_stairway)

    p = sub.add_parser("verify", parents=[common], help="run the verification suite")
    p.add_argument("checks", nargs="*", help="check names (see --list)")
    p.add_argument("--all", action="store_true", help="run every registered check")
    p.add_argument("--include-slow", action="store_true", help="include the order-81 multiplier")
    p.add_argument("--list", action="store_true", help="list check names and exit")
    p.add_argument("--no-timing", action="store_true", help="omit elapsed times (stable output)")
    p.set_defaults(func=cmd_verify)
    return parser


_INPUT_ERRORS = (UsageError, FormatError, CatalogueError, PresentationError, CosetLimitExceeded,
                 CohomologyCapError, CocycleError, GroupError, CharacterTableError, ValueError,
                 OSError)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _INPUT_ERRORS as exc:
        kind = type(exc).__name__
        print(f"fgx {args.command}: error ({kind}): {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
