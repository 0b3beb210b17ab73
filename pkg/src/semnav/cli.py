"""Command line interface: ``semnav <subcommand> ...``.

Exit codes: 0 success, 1 usage or configuration error, 2 syntax failure,
3 resource limit exceeded.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from .asp.grounder import ground
from .asp.parser import parse_program
from .asp.solver import solve
from .asp.syntax import print_program
from .errors import (
    ArityError,
    AspSyntaxError,
    ConfigError,
    DomainOverflow,
    ResourceExceeded,
    SafetyError,
    WorldError,
)
from .harness import load_spec, render_report, run_experiment
from .llm import build_prompt
from .roadworld import emit_extrinsic_facts
from .world import RoadWorld

EXIT_OK, EXIT_USAGE, EXIT_SYNTAX, EXIT_RESOURCE = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read(paths):
    chunks = []
    for p in paths:
        try:
            chunks.append(Path(p).read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigError(f"cannot read {p}: {exc.strerror}") from None
    return "\n".join(chunks)


def _syntax_message(name, exc):
    if isinstance(exc, AspSyntaxError):
        return f"{name}:{exc.line}:{exc.column}: error: {exc.message}"
    return f"{name}: error: {exc}"


def _load_program(paths, maxint):
    return parse_program(_read(paths), maxint)


def cmd_parse(args):
    program = _load_program([args.file], None)
    rules = program.rules
    facts = sum(1 for r in rules if r.is_fact)
    constraints = sum(1 for r in rules if r.is_constraint)
    disjunctive = sum(1 for r in rules if r.is_disjunctive)
    normal = len(rules) - facts - constraints - disjunctive
    print(f"{args.file}: {len(rules)} rules")
    print(f"  facts: {facts}, normal: {normal}, disjunctive: {disjunctive}, constraints: {constraints}")
    print(f"  maxint: {program.maxint}")
    preds = ", ".join(f"{p}/{n}" for p, n in sorted(program.signatures().items()))
    print(f"  predicates: {preds}")
    return EXIT_OK


def cmd_ground(args):
    gp = ground(_load_program(args.files, args.maxint))
    text = print_program(gp.to_program())
    if text:
        print(text)
    return EXIT_OK


def cmd_solve(args):
    gp = ground(_load_program(args.files, args.maxint))
    report = solve(gp, args.limit)
    if args.json:
        print(json.dumps(report.to_dict(), indent=2))
    else:
        print(f"answer sets: {report.count}")
        for s in report.answer_sets:
            print(s)
        print(f"elapsed: {report.elapsed:.6f} s")
    return EXIT_OK


def cmd_gen_facts(args):
    if args.junctions < 1:
        raise WorldError("--junctions must be at least 1")
    world = RoadWorld.from_kinds(args.kinds) if args.kinds else RoadWorld.unknown(args.junctions)
    if len(world) != args.junctions:
        raise WorldError(f"--kinds lists {len(world)} junctions, --junctions says {args.junctions}")
    print(print_program(emit_extrinsic_facts(world)))
    return EXIT_OK


def cmd_run(args):
    spec = load_spec(args.spec)
    if args.live:
        spec = dataclasses.replace(spec, live=True)
    elif args.fixtures:
        spec = dataclasses.replace(spec, fixtures_dir=Path(args.fixtures), live=False)
    results = run_experiment(spec)
    print(render_report(results, "json" if args.json else "text"))
    return EXIT_OK


def cmd_gen_prompt(args):
    spec = load_spec(args.spec)
    if args.model not in spec.models:
        raise ConfigError(f"model {args.model} is not listed in {args.spec}")
    sys.stdout.write(build_prompt(spec.bundle()))
    return EXIT_OK


def build_parser():
    parser = _Parser(prog="semnav", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("parse", help="parse a program and summarise it")
    p.add_argument("file")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("ground", help="print the ground program")
    p.add_argument("files", nargs="+")
    p.add_argument("--maxint", type=int)
    p.set_defaults(func=cmd_ground)

    p = sub.add_parser("solve", help="enumerate answer sets")
    p.add_argument("files", nargs="+")
    p.add_argument("--maxint", type=int)
    p.add_argument("--limit", type=int)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("gen-facts", help="print detection facts for a junction sequence")
    p.add_argument("--junctions", type=int, required=True)
    p.add_argument("--kinds", help="comma-separated i|r|u per junction, e.g. u,u,r")
    p.set_defaults(func=cmd_gen_facts)

    p = sub.add_parser("run", help="run an experiment spec and print the verdict table")
    p.add_argument("spec")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--fixtures", metavar="DIR")
    src.add_argument("--live", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("gen-prompt", help="print the prompt sent for an experiment")
    p.add_argument("spec")
    p.add_argument("--model", required=True)
    p.set_defaults(func=cmd_gen_prompt)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "limit", None) is not None and args.limit < 1:
        print("semnav: error: --limit must be positive", file=sys.stderr)
        return EXIT_USAGE
    name = getattr(args, "file", None) or ",".join(getattr(args, "files", []) or ["<input>"])
    try:
        return args.func(args)
    except (AspSyntaxError, SafetyError, ArityError) as exc:
        print(_syntax_message(name, exc), file=sys.stderr)
        return EXIT_SYNTAX
    except (DomainOverflow, ResourceExceeded) as exc:
        print(f"semnav: resource exceeded: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (ConfigError, WorldError) as exc:
        print(f"semnav: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
