"""Command-line front end.

Every subcommand builds one JSON-serializable payload; ``--format json``
prints it as canonical JSON (byte-identical for identical inputs and seed)
and ``--format text`` prints the same data as flat ``path = value`` lines,
so the two renderings carry identical information by construction.

Exit codes: 0 success / PASS, 1 verification failure, 2 usage or parse
errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import conic, lattice, tables, weyl
from .cohomology import h1_cyclic
from .symbols import (
    SymbolParseError,
    parse_char_symbol,
    parse_frame_symbol,
    power_char,
    power_frame,
)

DATA_DIR = Path(__file__).parent / "data"

DEFAULT_TABLES = {
    1: DATA_DIR / "urabe_table2_degree1.json",
    2: DATA_DIR / "urabe_table1_degree2.json",
    3: DATA_DIR / "bfl_table71_degree3.json",
}


def _flatten(payload, prefix="") -> list[str]:
    lines = []
    if isinstance(payload, dict):
        for k in sorted(payload):
            lines.extend(_flatten(payload[k], f"{prefix}{k}."))
    elif isinstance(payload, (list, tuple)):
        for i, v in enumerate(payload):
            lines.extend(_flatten(v, f"{prefix}{i}."))
    else:
        lines.append(f"{prefix[:-1]} = {payload}")
    return lines


def _emit(payload: dict, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for line in _flatten(payload):
            print(line)


def _budget_from_args(args, degree: int) -> weyl.SearchBudget:
    mode = getattr(args, "mode", None) or ("random" if degree == 1 else "exhaustive")
    budget = weyl.SearchBudget(mode=mode)
    if getattr(args, "seed", None) is not None:
        budget.seed = args.seed
    if getattr(args, "budget", None) is not None:
        budget.stabilization = args.budget
    return budget


def _inventory(args, degree: int) -> weyl.ClassInventory:
    return weyl.enumerate_classes(
        degree,
        _budget_from_args(args, degree),
        cache_dir=getattr(args, "cache", None),
        jobs=getattr(args, "jobs", 1),
    )


def _record_payload(r: weyl.ClassRecord) -> dict:
    return {
        "class_id": r.class_id,
        "order": r.order,
        "char_symbol": str(r.char_symbol),
        "frame_symbol": str(r.frame_symbol),
        "h1": str(r.h1),
        "h1_tower": {str(k): str(v) for k, v in sorted(r.h1_tower.items())},
        "index": r.index,
        "minimal": r.minimal,
        "invariant_rank": r.invariant_rank,
        "class_size": r.class_size,
        "first_nonvanishing": r.first_nonvanishing,
    }


def cmd_lattice_info(args) -> tuple[dict, int]:
    L = lattice.build(args.degree)
    payload = {
        "degree": L.degree,
        "rank": L.rank,
        "canonical_self_intersection": int(L.canonical @ L.gram @ L.canonical),
    }
    if L.degree <= 7:
        payload["exceptional_classes"] = len(lattice.minus_one_classes(L))
        payload["roots"] = len(lattice.roots(L))
    return payload, 0


def cmd_classes_enumerate(args) -> tuple[dict, int]:
    inv = _inventory(args, args.degree)
    payload = {
        "degree": inv.degree,
        "mode": inv.mode,
        "heuristic_coverage": inv.heuristic,
        "group_order": inv.group_order,
        "class_count": len(inv),
        "draws": inv.draws,
        "findings": list(inv.findings),
        "classes": [_record_payload(r) for r in inv],
    }
    return payload, 0


def cmd_h1(args) -> tuple[dict, int]:
    inv = _inventory(args, args.degree)
    try:
        record = inv.by_id(args.class_id)
    except KeyError:
        print(f"error: no class {args.class_id!r} in degree {args.degree}", file=sys.stderr)
        return {}, 2
    payload = {"class_id": record.class_id, "h1": str(record.h1)}
    if args.tower:
        payload["h1_tower"] = {str(k): str(v) for k, v in sorted(record.h1_tower.items())}
        payload["first_nonvanishing"] = record.first_nonvanishing
    return payload, 0


def cmd_frame_power(args) -> tuple[dict, int]:
    f = parse_frame_symbol(args.symbol)
    result = power_frame(f, args.r)
    return {"symbol": str(f), "r": args.r, "result": str(result)}, 0


def cmd_char_power(args) -> tuple[dict, int]:
    c = parse_char_symbol(args.symbol)
    result = power_char(c, args.r)
    return {"symbol": str(c), "r": args.r, "result": str(result)}, 0


def cmd_conic_h1(args) -> tuple[dict, int]:
    config = conic.load_config(args.config)
    report = conic.validate(config)
    payload = {
        "config": conic.config_to_dict(config),
        "valid": report.ok,
        "violations": [f"{v.kind}: {v.detail}" for v in report.violations],
        "warnings": list(report.warnings),
    }
    if not report.ok:
        return payload, 1
    payload["h1"] = str(conic.h1_pic(config))
    return payload, 0


def cmd_conic_base_change(args) -> tuple[dict, int]:
    config = conic.load_config(args.config)
    changed = conic.base_change(config, args.e)
    return {
        "e": args.e,
        "config": conic.config_to_dict(config),
        "result": conic.config_to_dict(changed),
    }, 0


def cmd_verify_theorem(args) -> tuple[dict, int]:
    inv = _inventory(args, args.degree)
    report = tables.verify_theorem(args.degree, inv)
    return report.to_dict(), 0 if report.status == "PASS" else 1


def cmd_replay_steps(args) -> tuple[dict, int]:
    steps = tables.load_steps(args.file)
    degrees = sorted({s.degree for s in steps})
    tabs = {d: tables.load_tables(DEFAULT_TABLES[d]) for d in degrees}
    invs = {d: _inventory(args, d) for d in degrees}
    results = tables.run_scripted_steps(steps, tabs, invs)
    payload = {
        "schema": "replay-report/1",
        "steps": [r.to_dict() for r in results],
        "failures": [r.step.source_id for r in results if not r.ok],
    }
    return payload, 0 if not payload["failures"] else 1


def cmd_audit(args) -> tuple[dict, int]:
    entries = tables.load_tables(args.tables)
    degrees = sorted({e.degree for e in entries})
    if len(degrees) != 1:
        print("error: table file must cover exactly one degree", file=sys.stderr)
        return {}, 2
    inv = _inventory(args, degrees[0])
    report = tables.audit_tables(entries, inv)
    return report.to_dict(), 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="picweyl",
        description="cyclic actions on del Pezzo Picard lattices: classes, "
        "cohomology, symbols, conic bundles, table audits",
    )
    parser.add_argument("--format", choices=("json", "text"), default="text")
    parser.add_argument("--jobs", type=int, default=None,
                        help="worker processes for class-record computation "
                        "(default: available parallelism; 1 = sequential)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lattice", help="lattice census")
    lsub = p.add_subparsers(dest="subcommand", required=True)
    q = lsub.add_parser("info")
    q.add_argument("--degree", type=int, required=True)
    q.set_defaults(fn=cmd_lattice_info)

    p = sub.add_parser("classes", help="conjugacy-class enumeration")
    csub = p.add_subparsers(dest="subcommand", required=True)
    q = csub.add_parser("enumerate")
    q.add_argument("--degree", type=int, required=True)
    q.add_argument("--mode", choices=("exhaustive", "random"))
    q.add_argument("--budget", type=int, help="random-mode stabilization draws")
    q.add_argument("--seed", type=int)
    q.add_argument("--cache", type=str)
    q.set_defaults(fn=cmd_classes_enumerate)

    p = sub.add_parser("h1", help="H1 of one class")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--class-id", required=True)
    p.add_argument("--tower", action="store_true")
    p.add_argument("--cache", type=str)
    p.set_defaults(fn=cmd_h1)

    p = sub.add_parser("frame", help="Frame-symbol arithmetic")
    fsub = p.add_subparsers(dest="subcommand", required=True)
    q = fsub.add_parser("power")
    q.add_argument("--symbol", required=True)
    q.add_argument("--r", type=int, required=True)
    q.set_defaults(fn=cmd_frame_power)

    p = sub.add_parser("char", help="characteristic-symbol arithmetic")
    csub2 = p.add_subparsers(dest="subcommand", required=True)
    q = csub2.add_parser("power")
    q.add_argument("--symbol", required=True)
    q.add_argument("--r", type=int, required=True)
    q.set_defaults(fn=cmd_char_power)

    p = sub.add_parser("conic", help="conic-bundle residue computations")
    csub3 = p.add_subparsers(dest="subcommand", required=True)
    q = csub3.add_parser("h1")
    q.add_argument("--config", required=True)
    q.set_defaults(fn=cmd_conic_h1)
    q = csub3.add_parser("base-change")
    q.add_argument("--config", required=True)
    q.add_argument("--e", type=int, required=True)
    q.set_defaults(fn=cmd_conic_base_change)

    p = sub.add_parser("verify", help="main nonvanishing check")
    vsub = p.add_subparsers(dest="subcommand", required=True)
    q = vsub.add_parser("theorem")
    q.add_argument("--degree", type=int, required=True)
    q.add_argument("--mode", choices=("exhaustive", "random"))
    q.add_argument("--budget", type=int)
    q.add_argument("--seed", type=int)
    q.add_argument("--cache", type=str)
    q.set_defaults(fn=cmd_verify_theorem)

    p = sub.add_parser("replay", help="replay scripted reduction steps")
    rsub = p.add_subparsers(dest="subcommand", required=True)
    q = rsub.add_parser("steps")
    q.add_argument("--file", required=True)
    q.add_argument("--seed", type=int)
    q.add_argument("--cache", type=str)
    q.set_defaults(fn=cmd_replay_steps)

    p = sub.add_parser("audit", help="audit a transcription against computed truth")
    p.add_argument("--tables", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--cache", type=str)
    p.set_defaults(fn=cmd_audit)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        payload, code = args.fn(args)
    except (SymbolParseError, tables.TableError, conic.ConicError,
            lattice.BadDegreeError, weyl.WeylError, FileNotFoundError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    if payload:
        _emit(payload, args.format)
    return code


if __name__ == "__main__":
    sys.exit(main())
