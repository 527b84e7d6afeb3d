"""Command-line front end.

Subcommands: ``solve`` and ``abduce`` run queries over program files,
``recommend`` and ``check`` drive the guideline workflow over a patient
profile, ``oracle`` enumerates stable models exhaustively, ``report``
writes the timing benchmark (CSV plus figure), and ``serve`` starts the
HTTP advisory service.

Exit codes: 0 when answers were found (or the proposal is compliant or
repairable), 1 when there are none (or the proposal is rejected), 2 on
usage or input errors.  Timing output goes to stderr so stdout stays
byte-identical across identical invocations.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from .abduction import AbductionProblem, abduce, minimal_explanations
from .engine import DEFAULT_DEPTH_LIMIT, Solver
from .grounding import ground
from .heart_failure import kb_rules, load_profile, normalize_profile
from .compliance import (
    Recommendation,
    Verdict,
    check_compliance,
    enumerate_recommendations,
)
from .oracle import enumerate_stable_models, DEFAULT_BASE_LIMIT
from .syntax import Program, format_atom_set, parse_program, parse_query, render


def _read_program(path: str) -> Program:
    return parse_program(Path(path).read_text("utf-8"))


def _read_profile(path: str):
    return normalize_profile(load_profile(Path(path).read_text("utf-8")))


def _load_kb(path: str | None) -> Program:
    return _read_program(path) if path else kb_rules()


def _timing(enabled: bool, label: str, started: float) -> None:
    if enabled:
        elapsed = (time.perf_counter() - started) * 1000
        print(f"{label}: {elapsed:.3f} ms", file=sys.stderr)


def abducibles_line(explanation) -> str:
    parts = [str(a) for a in explanation.assumed_true]
    parts.extend(f"not {a}" for a in explanation.assumed_false)
    inner = ", ".join(parts)
    return "Abducibles: { " + inner + " }" if parts else "Abducibles: { }"


# --------------------------------------------------------------------------
# Subcommands
# --------------------------------------------------------------------------

def _cmd_solve(args) -> int:
    program = _read_program(args.program)
    query = parse_query(args.query)
    started = time.perf_counter()
    solver = Solver(ground(program), depth_limit=args.depth_limit)
    count = 0
    seen = set()
    for chs in solver.solve(query):
        if chs.visible_key in seen:
            continue
        seen.add(chs.visible_key)
        print(render(chs))
        count += 1
        if args.max_answers and count >= args.max_answers:
            break
    _timing(args.timing, "solve", started)
    if count == 0:
        print("false")
        return 1
    return 0


def _cmd_abduce(args) -> int:
    program = _read_program(args.program)
    problem = AbductionProblem(
        theory=Program(program.rules),
        observation=parse_query(args.query),
        abducibles=program.abducible_directives,
    )
    started = time.perf_counter()
    results = list(
        abduce(problem, depth_limit=args.depth_limit, max_answers=args.max_answers or None)
    )
    _timing(args.timing, "abduce", started)
    if args.minimal:
        keep = {e.key for e in minimal_explanations([e for _, e in results])}
        results = [(c, e) for c, e in results if e.key in keep]
    for chs, explanation in results:
        print(render(chs))
        print(abducibles_line(explanation))
    if not results:
        print("false")
        return 1
    return 0


def _cmd_recommend(args) -> int:
    kb = _load_kb(args.kb)
    profile = _read_profile(args.profile)
    started = time.perf_counter()
    recs = enumerate_recommendations(profile, kb=kb)
    _timing(args.timing, "recommend", started)
    if args.json:
        print(json.dumps(
            [{"treatment": r.treatment, "cor_class": r.cor_class} for r in recs],
            indent=2,
        ))
    else:
        for rec in recs:
            print(rec)
    return 0 if recs else 1


def _cmd_check(args) -> int:
    kb = _load_kb(args.kb)
    profile = _read_profile(args.profile)
    proposed = Recommendation(args.treatment, args.cor_class)
    report = check_compliance(profile, proposed, kb=kb, minimal=not args.all_explanations)
    if args.timing:
        for label, value in report.timings_ms.items():
            print(f"{label}: {value} ms", file=sys.stderr)
    if args.json:
        print(json.dumps(report.to_json(), indent=2))
    else:
        if report.verdict is Verdict.COMPLIANT:
            print("Compliant")
        elif report.verdict is Verdict.REPAIRABLE_WITH_EVIDENCE:
            print("Repairable with evidence")
            for explanation in report.explanations:
                print(abducibles_line(explanation))
        else:
            print("Rejected")
    return 0 if report.verdict is not Verdict.REJECTED else 1


def _cmd_oracle(args) -> int:
    program = _read_program(args.program)
    started = time.perf_counter()
    models = enumerate_stable_models(ground(program), limit=args.limit)
    _timing(args.timing, "oracle", started)
    for model in models:
        print(format_atom_set(model))
    if not models:
        print("false")
        return 1
    return 0


def _cmd_report(args) -> int:
    from .report import run_report

    paths = run_report(Path(args.out), kb=_load_kb(args.kb))
    for path in paths:
        print(path)
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(kb=_load_kb(args.kb), persist_path=args.persist)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


# --------------------------------------------------------------------------
# Argument parsing
# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gdasp",
        description="Goal-directed answer set solving with abduction.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_query=True):
        if with_query:
            p.add_argument("-q", "--query", required=True, help="query conjunction")
        p.add_argument("--max-answers", type=int, default=0,
                       help="stop after this many answers (0 = all)")
        p.add_argument("--depth-limit", type=int, default=DEFAULT_DEPTH_LIMIT)
        p.add_argument("--timing", action="store_true",
                       help="print phase durations to stderr")

    p = sub.add_parser("solve", help="enumerate partial answer sets for a query")
    p.add_argument("-p", "--program", required=True)
    common(p)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("abduce", help="run a query in abductive mode")
    p.add_argument("-p", "--program", required=True,
                   help="program file with #abducible directives")
    common(p)
    p.add_argument("--minimal", action="store_true",
                   help="keep only subset-minimal explanations")
    p.set_defaults(func=_cmd_abduce)

    p = sub.add_parser("recommend", help="enumerate compliant recommendations")
    p.add_argument("--kb", help="rule base file (default: bundled)")
    p.add_argument("--profile", required=True)
    p.add_argument("--json", action="store_true")
    p.add_argument("--timing", action="store_true")
    p.set_defaults(func=_cmd_recommend)

    p = sub.add_parser("check", help="check a proposed treatment for compliance")
    p.add_argument("--kb", help="rule base file (default: bundled)")
    p.add_argument("--profile", required=True)
    p.add_argument("--treatment", required=True)
    p.add_argument("--class", dest="cor_class", required=True,
                   help="one of class_1, class_2a, class_2b, class_3")
    p.add_argument("--json", action="store_true")
    p.add_argument("--timing", action="store_true")
    p.add_argument("--all-explanations", action="store_true",
                   help="report every explanation, not just subset-minimal ones")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("oracle", help="enumerate all stable models exhaustively")
    p.add_argument("-p", "--program", required=True)
    p.add_argument("--limit", type=int, default=DEFAULT_BASE_LIMIT,
                   help="largest Herbrand base the oracle will accept")
    p.add_argument("--timing", action="store_true")
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("report", help="run the bundled cases; write CSV and figure")
    p.add_argument("--out", default="report")
    p.add_argument("--kb", help="rule base file (default: bundled)")
    p.set_defaults(func=_cmd_report)

    p = sub.add_parser("serve", help="start the HTTP advisory service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--kb", help="rule base file (default: bundled)")
    p.add_argument("--persist", help="append-only JSONL session log")
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (OSError, ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
