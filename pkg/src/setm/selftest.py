"""A fast end-to-end smoke check used by ``setm selftest``."""
from __future__ import annotations

import itertools
from typing import TextIO

from .hfset import enumerate_universe, hf_member, seeded_chooser
from .machine import Halted, run
from .tapecode import code_marking, decode_basic, encode_tree


def _codec() -> bool:
    return all(decode_basic(encode_tree(x, seeded_chooser(s))) is x
               for x in enumerate_universe(3) for s in range(3))


def _end_machine() -> bool:
    from .stdlib import builtin

    end = builtin("end")
    for x in enumerate_universe(2):
        out = run(end, code_marking([encode_tree(x)]), 100)
        if not isinstance(out, Halted):
            return False
    return True


def _membership() -> bool:
    from .stdlib import bool_value, m_decide

    decide = m_decide("member")
    universe = enumerate_universe(2)
    for x, y in itertools.product(universe, repeat=2):
        out = run(decide, code_marking([encode_tree(x), encode_tree(y)]), 10**6)
        if not isinstance(out, Halted) or bool_value(out.final) != int(hf_member(x, y)):
            return False
    return True


def _compiled_term() -> bool:
    from .compiler import equiv_check
    from .rec import derived

    return equiv_check(derived("upair"), 1, 2, 10**6).ok


def _interpreter() -> bool:
    from .hfset import hf_trcl
    from .rec import derived, evaluate

    trcl = derived("trcl")
    return all(evaluate(trcl, (x,)) is hf_trcl(x) for x in enumerate_universe(3))


CHECKS = (
    ("codec round trip", _codec),
    ("end machine halts", _end_machine),
    ("membership decider", _membership),
    ("interpreter trcl", _interpreter),
    ("compiled upair", _compiled_term),
)


def run_selftest(out: TextIO) -> bool:
    ok = True
    for name, check in CHECKS:
        passed = check()
        ok &= passed
        print(f"{'PASS' if passed else 'FAIL'} {name}", file=out)
    return ok
