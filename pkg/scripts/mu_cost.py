"""Step counts of compiled search and recursion machines against input size.

Prints one row per numeral n: the node count of its code (2^n), then the
machine steps of least_not_in and of the rank recursion on n.
"""
import argparse
import sys

from setm.compiler import compile
from setm.hfset import hf_from_numeral, seeded_chooser
from setm.machine import Halted, run
from setm.rec import Adjoin, Proj, Recursion, apply, derived
from setm.tapecode import decode_marking, encode_args


def steps(table, args, fuel):
    out = run(table, encode_args(args, seeded_chooser(0)), fuel)
    if not isinstance(out, Halted):
        return None, None
    return out.steps, decode_marking(out.final)[0]


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--max", type=int, default=5, help="largest numeral")
    p.add_argument("--fuel", type=int, default=10**8)
    args = p.parse_args(argv)
    lni = compile(derived("least_not_in"))
    rank = compile(Recursion(apply(Adjoin(), Proj(2, 1), Proj(2, 1))))
    print(f"{'n':>3} {'nodes':>6} {'least_not_in':>14} {'rank':>12}")
    for n in range(args.max + 1):
        x = hf_from_numeral(n)
        s1, v1 = steps(lni, (x,), args.fuel)
        s2, v2 = steps(rank, (x,), args.fuel)
        assert v1 is None or v1 is x
        assert v2 is None or v2 is hf_from_numeral(n + 1)
        print(f"{n:>3} {len(encode_args((x,))):>6} {s1 if s1 is not None else 'fuel':>14} {s2 if s2 is not None else 'fuel':>12}", flush=True)
    return 0


if __name__ == "__main__":
    sys.exit(main())
