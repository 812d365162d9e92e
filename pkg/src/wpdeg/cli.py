"""``wpdeg`` command-line front end.

Exit codes: 0 finite distance (or success), 3 infinite distance, 1 input
error, 2 internal or consistency failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import catalog
from .documents import DocumentError, load, to_jsonable
from .errors import InternalConsistencyError
from .pipeline import (
    Outcome,
    failure,
    guarded,
    run_classify,
    run_nodal,
    run_orbit,
    run_spectral,
    run_weight_filtration,
)


def _fmt(v) -> str:
    v = to_jsonable(v)
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True)
    return str(v)


def render_text(out: Outcome) -> str:
    lines = [f"command: {out.command}" + (f"  mode: {out.mode}" if out.mode else "")]
    if out.error:
        lines.append(f"error: {out.error}")
    if out.verdict is not None:
        lines.append(f"verdict: {out.verdict.value} distance")
    if out.witness is not None:
        lines.append(f"witness: {_fmt(out.witness)}")
    for name, sec in out.sections.items():
        lines.append(f"[{name}]")
        if isinstance(sec, dict):
            for k, v in sec.items():
                lines.append(f"  {k}: {_fmt(v)}")
        else:
            lines.append(f"  {_fmt(sec)}")
    for rep in out.reports:
        lines.append(f"[{rep.title}] {'pass' if rep.passed else 'FAIL'}")
        for c in rep.checks:
            detail = f"  ({c.detail})" if c.detail else ""
            lines.append(f"  {c.status:>4}  {c.name}{detail}")
            if c.passed is False and c.witness is not None:
                lines.append(f"        witness: {_fmt(c.witness)}")
    for w in out.warnings:
        lines.append(f"warning: {w}")
    lines.append(f"exit: {out.exit_code}")
    return "\n".join(lines)


def emit(out: Outcome, fmt: str) -> int:
    if fmt == "json":
        print(json.dumps(out.to_json(), indent=2, sort_keys=True))
    else:
        print(render_text(out))
    return out.exit_code


def _loader(path: str):
    try:
        return load(path)
    except OSError as exc:
        raise DocumentError(str(exc), path) from exc


def run_catalog_entry(entry: catalog.CatalogEntry, quadrature: bool = False, strict: bool = False) -> Outcome:
    from .documents import parse_document

    out = guarded(lambda: run_classify(parse_document(entry.problem), quadrature), "classify", strict=strict)
    out.command = f"catalog:{entry.name}"
    return out


def cmd_catalog_run(quadrature: bool, strict: bool) -> Outcome:
    rows = []
    bad = []
    for e in catalog.entries():
        out = run_catalog_entry(e, quadrature, strict)
        got = out.verdict.value if out.verdict is not None else f"error ({out.error})"
        ok = out.verdict is e.expected_verdict and out.exit_code in (0, 3)
        rows.append({"name": e.name, "expected": e.expected_verdict.value, "got": got, "ok": ok})
        if not ok:
            bad.append(e.name)
    res = Outcome("catalog run", sections={"entries": {r["name"]: r for r in rows}}, strict=strict)
    if bad:
        res.error = "expected verdict not reproduced: " + ", ".join(bad)
        res.error_kind = "consistency"
    return res


def cmd_catalog_list() -> Outcome:
    entries = {e.name: {"expected": e.expected_verdict.value, "mode": e.problem["mode"], "n": e.problem["n"],
                        "description": e.description} for e in catalog.entries()}
    return Outcome("catalog list", sections={"entries": entries})


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wpdeg", description="Weil-Petersson distance to a degeneration.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--quadrature", action="store_true", help="add the numeric arc-length cross-check")
    common.add_argument("--strict", action="store_true", help="treat checker warnings as errors")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (
        ("classify", "finite/infinite verdict with witness"),
        ("wf", "monodromy weight filtration"),
        ("orbit", "orbit polynomial and verdict"),
        ("spectral", "E_1/E_2 pages of the central fibre"),
        ("nodal", "adjunction computation for simple nodes"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("file")
    cat = sub.add_parser("catalog", parents=[common], help="built-in examples")
    cat.add_argument("action", choices=("run", "list", "show"))
    cat.add_argument("name", nargs="?", help="entry name for 'show'")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    strict = args.strict
    if args.command == "catalog":
        if args.action == "list":
            return emit(cmd_catalog_list(), args.format)
        if args.action == "show":
            try:
                entry = catalog.get(args.name or "")
            except KeyError as exc:
                print(exc.args[0], file=sys.stderr)
                return 1
            print(json.dumps(entry.problem, indent=2))
            return 0
        return emit(cmd_catalog_run(args.quadrature, strict), args.format)

    def task():
        doc = _loader(args.file)
        if args.command == "classify":
            return run_classify(doc, args.quadrature)
        if args.command == "orbit":
            return run_orbit(doc, args.quadrature)
        if args.command == "wf":
            return run_weight_filtration(doc)
        if args.command == "spectral":
            return run_spectral(doc)
        return run_nodal(doc)

    try:
        out = guarded(task, args.command, strict=strict)
    except Exception as exc:  # an unexpected failure is an internal error, never a verdict
        out = failure(args.command, InternalConsistencyError(f"{type(exc).__name__}: {exc}"), strict)
    if out.error_kind is None:
        out.command = args.command
    return emit(out, args.format)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
