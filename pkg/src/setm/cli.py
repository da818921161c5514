"""Command-line entry point: ``setm <command> ...``.

Exit codes: 0 success, 1 undefined computation (crash, fuel, invariance or
an equivalence failure), 2 usage or parse errors. Results go to stdout,
diagnostics to stderr.
"""
from __future__ import annotations

import argparse
import os
import sys

from . import __version__
from .hfset import format_set, parse_set, seeded_chooser
from .ordinal import Address
from .machine import (
    Halted,
    TableSyntaxError,
    describe_outcome,
    format_table,
    parse_table,
    run,
)
from .tapecode import (
    code_marking,
    decode_marking,
    encode_tree,
    format_code_text,
    is_well_formed,
    num_components,
    parse_code_text,
)

EXIT_OK, EXIT_UNDEFINED, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _read_text(path: str) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w") as fh:
        fh.write(text)


def _load_machine(source: str):
    if os.path.exists(source):
        try:
            return parse_table(_read_text(source), name=os.path.basename(source))
        except TableSyntaxError as exc:
            raise UsageError(f"{source}: {exc}") from None
    from .stdlib import catalogue

    lib = catalogue()
    if source in lib:
        return lib[source]()
    raise UsageError(f"no machine file or stdlib machine named {source!r}")


def _load_inputs(items, seed: int) -> dict:
    """Each -i is a set literal (one component) or a code file (its components)."""
    marking: dict = {}
    chooser = seeded_chooser(seed)
    for item in items:
        if os.path.exists(item):
            try:
                part = parse_code_text(_read_text(item))
            except ValueError as exc:
                raise UsageError(f"{item}: {exc}") from None
        else:
            try:
                x = parse_set(item)
            except ValueError as exc:
                raise UsageError(f"bad set literal {item!r}: {exc}") from None
            part = code_marking([encode_tree(x, chooser)])
        offset = num_components(marking)
        for a, m in part.items():
            marking[Address(a[0] + offset, a[1])] = m
    return marking


def _parse_sets(items) -> tuple:
    try:
        return tuple(parse_set(a) for a in items)
    except ValueError as exc:
        raise UsageError(f"bad set literal: {exc}") from None


def _load_term(path: str, tier_name: str):
    from .rec import ArityError, RecSyntaxError, Tier, TierError, derived_env, parse_rec

    try:
        tier = Tier.parse(tier_name)
        return parse_rec(_read_text(path), tier=tier, env=derived_env())
    except (RecSyntaxError, TierError, ArityError, ValueError) as exc:
        raise UsageError(f"{path}: {exc}") from None


# ---------------------------------------------------------------- commands


def cmd_run(args) -> int:
    table = _load_machine(args.machine)
    marking = _load_inputs(args.input, args.seed)
    if args.delimit:
        from .stdlib import delimit

        marking = delimit(marking)
    if args.trace:
        with open(args.trace, "w") as fh:
            outcome = run(table, marking, args.fuel, trace=fh)
    else:
        outcome = run(table, marking, args.fuel)
    if isinstance(outcome, Halted):
        sys.stdout.write(format_code_text(outcome.final))
        print(f"halted after {outcome.steps} steps", file=sys.stderr)
        return EXIT_OK
    print(describe_outcome(outcome), file=sys.stderr)
    return EXIT_UNDEFINED


def cmd_encode(args) -> int:
    xs = _parse_sets(args.input)
    marking = code_marking([encode_tree(x, seeded_chooser(args.seed)) for x in xs])
    _write_text(args.output, format_code_text(marking))
    return EXIT_OK


def cmd_decode(args) -> int:
    marking = _load_inputs(args.input, 0)
    if not is_well_formed(marking):
        print("input is not a well formed marking", file=sys.stderr)
        return EXIT_USAGE
    for x in decode_marking(marking):
        print(format_set(x))
    return EXIT_OK


def cmd_stdlib(args) -> int:
    from .stdlib import catalogue

    lib = catalogue()
    if args.list or not args.emit:
        for name in sorted(lib):
            print(name)
        return EXIT_OK
    if args.emit not in lib:
        raise UsageError(f"unknown stdlib machine {args.emit!r}; try --list")
    _write_text(args.output, format_table(lib[args.emit]()))
    return EXIT_OK


def cmd_rec_eval(args) -> int:
    from .rec import EvalEnv, EvalError, Tier, evaluate

    term = _load_term(args.expr, args.tier)
    values = _parse_sets(args.arg)
    if len(values) != term.arity:
        raise UsageError(f"term has arity {term.arity}, got {len(values)} arguments")
    env = EvalEnv(seed=args.seed, fuel=args.fuel, tier=Tier.parse(args.tier), woo_mode=args.woo)
    try:
        print(format_set(evaluate(term, values, env)))
    except EvalError as exc:
        print(f"undefined: {exc}", file=sys.stderr)
        return EXIT_UNDEFINED
    return EXIT_OK


def cmd_rec_compile(args) -> int:
    from .compiler import compile

    term = _load_term(args.expr, "REC")
    table = compile(term)
    _write_text(args.output, format_table(table))
    print(f"{len(table)} rules, {len(table.states())} states, width {table.width}", file=sys.stderr)
    return EXIT_OK


def cmd_equiv(args) -> int:
    from .compiler import equiv_check, flagship_corpus, write_report

    if args.corpus:
        terms = list(flagship_corpus().items())
    elif args.expr:
        terms = [(os.path.basename(args.expr), _load_term(args.expr, "REC"))]
    else:
        raise UsageError("equiv needs -e FILE or --corpus")
    reports = []
    for name, term in terms:
        report = equiv_check(term, args.rank, args.seeds, args.fuel, name=name)
        print(report.summary())
        reports.append(report)
    if args.report:
        write_report(reports, args.report)
    return EXIT_OK if all(r.ok for r in reports) else EXIT_UNDEFINED


def cmd_selftest(args) -> int:
    from .selftest import run_selftest

    return EXIT_OK if run_selftest(sys.stdout) else EXIT_UNDEFINED


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="setm", description="Set Turing machines on hereditarily finite sets.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", metavar="COMMAND")

    r = sub.add_parser("run", help="run a machine table")
    r.add_argument("-m", "--machine", required=True, help=".stm file or stdlib machine name")
    r.add_argument("-i", "--input", action="append", default=[],
                   help="set literal or code file; repeat for more components")
    r.add_argument("--fuel", type=int, default=10**6)
    r.add_argument("--seed", type=int, default=0, help="child order for encoding literals")
    r.add_argument("--trace", metavar="FILE", help="write one line per step")
    r.add_argument("--delimit", action="store_true", help="preprocess component 0 with the end delimiter")
    r.set_defaults(func=cmd_run)

    e = sub.add_parser("encode", help="set literal(s) to code text")
    e.add_argument("-i", "--input", action="append", required=True)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("-o", "--output")
    e.set_defaults(func=cmd_encode)

    d = sub.add_parser("decode", help="code text to set literal(s)")
    d.add_argument("-i", "--input", action="append", required=True)
    d.set_defaults(func=cmd_decode)

    s = sub.add_parser("stdlib", help="list or print standard machines")
    s.add_argument("--list", action="store_true")
    s.add_argument("--emit", metavar="NAME")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_stdlib)

    rec = sub.add_parser("rec", help="recursive set function terms")
    rsub = rec.add_subparsers(dest="rec_command", metavar="SUBCOMMAND")
    ev = rsub.add_parser("eval", help="interpret a term")
    ev.add_argument("-e", "--expr", required=True, help="term file")
    ev.add_argument("-a", "--arg", action="append", default=[], help="argument literal; repeat")
    ev.add_argument("--tier", default="REC", help="pREC, minREC or REC")
    ev.add_argument("--seed", type=int, default=0)
    ev.add_argument("--fuel", type=int, default=10**6)
    ev.add_argument("--woo", default="elements", choices=("elements", "trcl"))
    ev.set_defaults(func=cmd_rec_eval)
    co = rsub.add_parser("compile", help="compile a term to a machine table")
    co.add_argument("-e", "--expr", required=True)
    co.add_argument("-o", "--output")
    co.set_defaults(func=cmd_rec_compile)

    q = sub.add_parser("equiv", help="compiled machine vs interpreter sweep")
    q.add_argument("-e", "--expr", help="term file")
    q.add_argument("--corpus", action="store_true", help="the built-in term corpus")
    q.add_argument("--rank", type=int, default=2)
    q.add_argument("--seeds", type=int, default=3)
    q.add_argument("--fuel", type=int, default=10**7)
    q.add_argument("--report", metavar="FILE")
    q.set_defaults(func=cmd_equiv)

    t = sub.add_parser("selftest", help="quick end-to-end checks")
    t.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if not getattr(args, "func", None):
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"setm: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"setm: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
