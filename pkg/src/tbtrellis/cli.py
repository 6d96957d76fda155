"""Command-line front end.

Exit status is 0 on success, 1 for bad input (including guard limits), and
2 when an internal consistency check fails.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import analysis, oracle
from .dot import export_dot
from .duality import dual
from .errors import InvariantViolation
from .formats import (
    build_from_generator_file,
    dumps,
    format_word,
    parse_code_file,
    parse_generator_file,
    read_trellis,
)
from .kv import kv_trellis
from .reduce import is_locally_irreducible, reduce_step
from .trellis import Trellis, code


def _emit(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def cmd_build(args) -> int:
    genfile = parse_generator_file(Path(args.generators).read_text(), args.field)
    _emit(dumps(build_from_generator_file(genfile)), args.output)
    return 0


def _table(T: Trellis, report: analysis.PropertyReport, verdict) -> str:
    C = code(T)
    rows = [
        f"field GF({T.p}), m = {T.m}, state dims {list(T.state_dims)}, "
        f"constraint dims {[c.dim for c in T.constraints]}",
        f"code: dim {C.dim}, basis {[format_word(r, T.p) for r in C.basis]}",
        "",
    ]
    width = max(len(k) for k in analysis.PREDICATES)
    for key, value in report.flags().items():
        shown = "n/a" if value is None else ("yes" if value else "NO")
        line = f"  {key:<{width}}  {shown}"
        if key in report.witnesses:
            line += f"   witness: {json.dumps(report.witnesses[key])}"
        rows.append(line)
    rows.append("")
    rows.append(f"  {'irreducible criterion':<{width}}  {'yes' if report.irreducible_criterion else 'NO'}")
    rows.append(f"  {'short-support hypothesis':<{width}}  {'yes' if verdict.hypothesis else 'NO'}")
    for c in report.caveats + ([verdict.caveat] if verdict.caveat else []):
        rows.append(f"  note: {c}")
    return "\n".join(rows) + "\n"


def cmd_analyze(args) -> int:
    T = read_trellis(args.trellis)
    verdict = is_locally_irreducible(T)
    report = verdict.report
    if args.json:
        out = report.to_dict()
        out["code_hypothesis"] = verdict.hypothesis
        _emit(json.dumps(out, indent=2, sort_keys=True) + "\n", None)
    else:
        _emit(_table(T, report, verdict), None)
    return 0


def cmd_dual(args) -> int:
    _emit(dumps(dual(read_trellis(args.trellis))), args.output)
    return 0


def cmd_reduce(args) -> int:
    T = read_trellis(args.trellis)
    firings = []
    steps_done = 0
    inter = Path(args.intermediates) if args.intermediates else None
    if inter is not None:
        inter.mkdir(parents=True, exist_ok=True)
    budget = T.state_dim_sum + T.constraint_dim_sum
    while True:
        res = reduce_step(T)
        if res is None:
            break
        T, steps = res
        firings.append({"rule": steps[0].rule, "steps": [s.to_dict() for s in steps]})
        for s in steps:
            steps_done += 1
            if inter is not None:
                (inter / f"step{steps_done:02d}_{s.kind}_t{s.time}.json").write_text(dumps(s.after))
        if args.step:
            break
        if len(firings) > budget:
            raise InvariantViolation(f"more than {budget} rule firings")
    if args.trace:
        trace = {
            "firings": firings,
            "fixpoint": reduce_step(T) is None,
            "final_state_dims": list(T.state_dims),
        }
        Path(args.trace).write_text(json.dumps(trace, indent=2) + "\n")
    _emit(dumps(T), args.output)
    if not firings:
        print("no rule applies: trellis meets the irreducibility criterion", file=sys.stderr)
    return 0


def cmd_kv(args) -> int:
    C, dims = parse_code_file(Path(args.code).read_text(), args.field)
    _emit(dumps(kv_trellis(C, dims, by=args.by)), args.output)
    return 0


def cmd_export_dot(args) -> int:
    _emit(export_dot(read_trellis(args.trellis), labels=args.labels), args.output)
    return 0


def cmd_verify(args) -> int:
    T = read_trellis(args.trellis)
    results = oracle.verify(T)
    for key, ok in results.items():
        print(f"{'ok  ' if ok else 'FAIL'} {key}")
    if not all(results.values()):
        raise InvariantViolation("oracle disagreement: " + ", ".join(k for k, v in results.items() if not v))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tbtrellis", description="Tail-biting trellis toolkit.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="product trellis from a generator file")
    p.add_argument("--generators", required=True)
    p.add_argument("--field", type=int, default=None, help="override the file's field")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("analyze", help="property battery")
    p.add_argument("trellis")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("dual", help="dual trellis")
    p.add_argument("trellis")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_dual)

    p = sub.add_parser("reduce", help="local reductions")
    p.add_argument("trellis")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--step", action="store_true", help="fire one rule")
    mode.add_argument("--full", action="store_true", help="reduce to a fixpoint (default)")
    p.add_argument("--trace", help="write the step trace as JSON")
    p.add_argument("--intermediates", help="directory for the trellis after every primitive step")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("kv", help="shortest-span product trellis of a code")
    p.add_argument("--code", required=True)
    p.add_argument("--field", type=int, default=None)
    p.add_argument("--by", choices=("start", "stop"), default="start")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_kv)

    p = sub.add_parser("export-dot", help="Graphviz diagram")
    p.add_argument("trellis")
    p.add_argument("--labels", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_export_dot)

    p = sub.add_parser("verify", help="check against brute-force enumeration")
    p.add_argument("trellis")
    p.set_defaults(func=cmd_verify)
    return ap


def run(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InvariantViolation as e:
        print(f"internal error: {e}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
