"""Regenerate or check the step traces of the built-in tape routines.

    python scripts/golden_traces.py --check tests/golden
    python scripts/golden_traces.py --write /tmp/traces
"""
import argparse
import io
import sys
from pathlib import Path

from setm.hfset import hf_from_numeral
from setm.machine import Halted, run
from setm.ordinal import Address
from setm.stdlib import builtin, delimit
from setm.tapecode import Mark, code_marking, encode_tree

CASES = [("end", n) for n in (0, 1, 2)] + [(k, n) for k in ("copy", "erase", "traverse2") for n in (1, 2)]


def trace_of(kind: str, n: int) -> str:
    """end runs on the plain code of n; the others on the delimited code,
    copy with an empty set coded in component 1."""
    m = code_marking([encode_tree(hf_from_numeral(n))])
    if kind != "end":
        m = delimit(m)
    if kind == "copy":
        m[Address(1, ())] = Mark.ONE
    buf = io.StringIO()
    out = run(builtin(kind), m, 100, trace=buf)
    if not isinstance(out, Halted):
        raise RuntimeError(f"{kind} on {n} did not halt")
    return buf.getvalue()


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--check", metavar="DIR")
    g.add_argument("--write", metavar="DIR")
    args = p.parse_args(argv)
    bad = 0
    for kind, n in CASES:
        text = trace_of(kind, n)
        name = f"{kind}_{n}.trace"
        if args.write:
            Path(args.write).mkdir(parents=True, exist_ok=True)
            (Path(args.write) / name).write_text(text)
            print(f"wrote {name} ({text.count(chr(10))} lines)")
        else:
            same = (Path(args.check) / name).read_text() == text
            bad += not same
            print(f"{'ok  ' if same else 'DIFF'} {name}")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
