"""Command-line interface.

Exit codes: 0 success / satisfiable, 1 I/O or syntax error, 2 program
rejected by the checks, 3 no models / unsatisfiable, 4 a limit was hit.
"""
from __future__ import annotations

import argparse
import json
import sys

from .engine import Engine, Limits, format_trace
from .errors import LimitExceeded, PmlogError, ProgramError, ProgramRejected, RowError, StaleFact
from .facts import load_facts_csv
from .parser import SourceProgram, parse_program
from .printing import format_atom
from .stratify import analyze, render_diagnostics
from .terms import atom_key

EXIT_OK, EXIT_INPUT, EXIT_REJECTED, EXIT_NO_MODELS, EXIT_LIMIT = 0, 1, 2, 3, 4


class InputError(Exception):
    pass


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise InputError(f"{path}: {e.strerror or e}") from None


def load_programs(paths) -> SourceProgram:
    program = SourceProgram()
    for path in paths:
        try:
            program = program + parse_program(_read(path), path)
        except ProgramError as e:
            raise InputError("\n".join(d.render(path) for d in getattr(e, "diagnostics", [e])))
    return program


def _fact_spec(spec):
    pred, sep, path = spec.partition("=")
    if not sep or not pred or not path:
        raise argparse.ArgumentTypeError(f"expected <pred>=<csv>, got {spec!r}")
    return pred.strip(), path.strip()


def load_fact_files(specs, program, header=None):
    facts = []
    for pred, path in specs:
        _read(path)  # uniform error for missing files
        try:
            facts.extend(load_facts_csv(path, pred, program.sorts.get(pred), header))
        except RowError as e:
            raise InputError(f"{path}: {e}") from None
    return facts


def _limits(args):
    return Limits(max_models=args.max_models, max_time=args.max_time, max_steps=args.max_steps)


def model_lines(model):
    return [format_atom(a) for a in sorted(model, key=atom_key)]


def _print_models(models, out, as_json, partial=None):
    if as_json:
        payload = [model_lines(m) for m in models]
        if partial is not None:
            payload = {"partial": True, "reason": partial, "models": payload}
        out.write(json.dumps(payload, indent=2, ensure_ascii=False) + "\n")
        return
    for i, m in enumerate(models, start=1):
        out.write(f"Model {i} ({len(m)} atoms)\n")
        for line in model_lines(m):
            out.write(f"  {line}\n")
    if partial is not None:
        out.write(f"PARTIAL: {partial}\n")
    elif not len(models):
        out.write("No models\n")


# -- commands --------------------------------------------------------------------

def cmd_check(args, out, err):
    program = load_programs(args.program)
    analysis = analyze(program, sbt_only=args.sbt_only)
    violations = analysis.violations
    filename = args.program[0] if len(args.program) == 1 else None
    if args.json:
        payload = {
            "ok": not violations,
            "rules": len(program.rules),
            "violations": [v.as_dict(filename) for v in violations],
        }
        if args.show_strata:
            payload["strata"] = [sorted(scc) for scc in analysis.strata.sccs]
        out.write(json.dumps(payload, indent=2) + "\n")
    else:
        if args.show_strata:
            for i, scc in analysis.strata.table():
                out.write(f"stratum {i}: {', '.join(sorted(scc))}\n")
        if violations:
            out.write(render_diagnostics(violations, filename) + "\n")
        else:
            mode = "SBT" if args.sbt_only else "SBTP"
            out.write(f"OK: {len(program.rules)} rules, range-restricted and {mode}\n")
    return EXIT_REJECTED if violations else EXIT_OK


def cmd_run(args, out, err, trace_out=None):
    program = load_programs(args.program)
    header = True if args.header else None
    facts = load_fact_files(args.facts, program, header)
    batches = [load_fact_files([spec], program, header) for spec in args.add_facts]
    events = []
    trace = None
    if args.trace or trace_out is not None:
        if args.json:
            trace = events.append
        else:
            sink = trace_out or err
            trace = lambda e: sink.write(format_trace(e) + "\n")  # noqa: E731
    try:
        engine = Engine(program, limits=_limits(args), trace=trace, sbt_only=args.sbt_only,
                        incremental=bool(batches))
    except ProgramRejected as e:
        err.write(render_diagnostics(e.violations, args.program[0]) + "\n")
        return EXIT_REJECTED
    try:
        models = engine.saturate(facts)
        for batch in batches:
            models = engine.add_facts(batch)
    except LimitExceeded as e:
        _emit_run(args, out, e.partial, events, partial=e.reason)
        err.write(f"limit exceeded: {e.reason} (path {e.path})\n")
        return EXIT_LIMIT
    except StaleFact as e:
        raise InputError(str(e)) from None
    _emit_run(args, out, models, events)
    return EXIT_OK if len(models) else EXIT_NO_MODELS


def _emit_run(args, out, models, events, partial=None):
    if args.json and (args.trace or args.command == "trace"):
        payload = {"trace": events, "models": [model_lines(m) for m in models]}
        if partial is not None:
            payload["partial"] = True
            payload["reason"] = partial
        out.write(json.dumps(payload, indent=2, ensure_ascii=False) + "\n")
    else:
        _print_models(models, out, args.json, partial)


def cmd_trace(args, out, err):
    return cmd_run(args, out, err, trace_out=out)


def cmd_dl(args, out, err):
    from .dl import KBSyntaxError, entailed_instance, is_satisfiable, parse_assertion, parse_kb
    from .errors import UnsupportedGCI

    text = _read(args.kb)
    try:
        kb = parse_kb(text)
        queries = [(q, parse_assertion(q)) for q in args.entails]
    except (KBSyntaxError, UnsupportedGCI) as e:
        raise InputError(f"{args.kb}: {e}") from None
    try:
        result = is_satisfiable(kb, _limits(args))
    except LimitExceeded as e:
        if args.json:
            out.write(json.dumps({"status": "UNDECIDED", "reason": e.reason}, indent=2) + "\n")
        else:
            out.write(f"UNDECIDED: {e.reason}\n")
        return EXIT_LIMIT
    answers = [(q, entailed_instance(kb, a, c, result=result)) for q, (a, c) in queries]
    status = "SAT" if result.satisfiable else "UNSAT"
    if args.json:
        payload = {"status": status, "models": len(result.models),
                   "entails": {q: ok for q, ok in answers}}
        if args.show_models:
            payload["model_atoms"] = [model_lines(m) for m in result.models]
        out.write(json.dumps(payload, indent=2, ensure_ascii=False) + "\n")
    else:
        out.write(f"{status} ({len(result.models)} models)\n")
        for q, ok in answers:
            out.write(f"{'ENTAILED' if ok else 'NOT-ENTAILED'}: {q}\n")
        if args.show_models:
            _print_models(result.models, out, False)
    return EXIT_OK if result.satisfiable else EXIT_NO_MODELS


# -- argument parsing ------------------------------------------------------------

def _add_program_args(p, facts=True):
    p.add_argument("files", nargs="*", metavar="PROGRAM", help="program files")
    p.add_argument("--program", action="append", default=[], metavar="PATH",
                   help="program file (repeatable)")
    p.add_argument("--sbt-only", action="store_true",
                   help="require stratification by time alone")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    if facts:
        p.add_argument("--facts", action="append", default=[], type=_fact_spec,
                       metavar="PRED=CSV", help="load facts for PRED from a CSV file")
        p.add_argument("--add-facts", action="append", default=[], type=_fact_spec,
                       metavar="PRED=CSV",
                       help="add a later batch of facts incrementally (repeatable, in order)")
        p.add_argument("--header", action="store_true",
                       help="skip the first CSV line (by default it is skipped only when "
                            "its first cell is not a time)")
        p.add_argument("--trace", action="store_true", help="log each rule firing to stderr")


def _add_limits(p):
    p.add_argument("--max-models", type=int, default=None, metavar="N")
    p.add_argument("--max-time", type=int, default=10_000, metavar="N",
                   help="time layers per path (default 10000)")
    p.add_argument("--max-steps", type=int, default=None, metavar="N",
                   help="rule firings over all paths")


def build_parser():
    parser = argparse.ArgumentParser(prog="pmlog",
                                     description="Possible models of time-stamped logic programs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="check range restriction and stratification")
    _add_program_args(p, facts=False)
    p.add_argument("--show-strata", action="store_true", help="print the stratum table")

    for name, helptext in (("run", "compute the possible models"),
                           ("trace", "compute the models, printing each rule firing")):
        p = sub.add_parser(name, help=helptext)
        _add_program_args(p)
        _add_limits(p)

    p = sub.add_parser("dl", help="ALCIF satisfiability and instance checking")
    p.add_argument("kb", metavar="KB", help="knowledge base file")
    p.add_argument("--entails", action="append", default=[], metavar='"a : C"',
                   help="instance query (repeatable)")
    p.add_argument("--json", action="store_true")
    p.add_argument("--show-models", action="store_true", help="print every model")
    _add_limits(p)
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command in ("check", "run", "trace"):
        args.program = list(args.files) + list(args.program)
        if not args.program:
            parser.error("at least one program file is required")
    handler = {"check": cmd_check, "run": cmd_run, "trace": cmd_trace, "dl": cmd_dl}[args.command]
    try:
        return handler(args, out, err)
    except InputError as e:
        err.write(f"{e}\n")
        return EXIT_INPUT
    except PmlogError as e:
        err.write(f"error: {e}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
