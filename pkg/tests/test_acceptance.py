"""The ten acceptance criteria, one test each.

A summary line per criterion is printed at the end of the pytest run.
"""
import io
import itertools
import random
import time
from pathlib import Path

from conftest import codes, random_code
from setm.compiler import equiv_check, flagship_corpus, compile, mu_loop, recursion_loop
from setm.hfset import (
    EMPTY,
    enumerate_universe,
    hf,
    hf_from_numeral,
    hf_member,
    hf_rank,
    hf_trcl,
    seeded_chooser,
)
from setm.machine import Halted, fm_eval, run
from setm.ordinal import (
    UNDEFINED,
    Address,
    Constant,
    Cycle,
    Ramp,
    TransfiniteSeq,
    least_cofinal,
    parse_ordinal,
    pointwise_limit,
    weak_liminf,
)
from setm.rec import Adjoin, Proj, Recursion, apply, derived, derived_env, parse_rec
from setm.stdlib import (
    Asm,
    _mark_leaves,
    bool_value,
    builtin,
    canon_test,
    delimit,
    local_canonicalize,
    m_canonicalize,
    m_decide,
    m_ord,
    reference_iterate,
    while_loop,
)
from setm.tapecode import (
    Mark,
    code_marking,
    decode_basic,
    decode_marking,
    decode_oracle_g,
    encode_oracle_f,
    encode_tree,
    is_basic_code,
    is_canonical,
    node_rank,
)

GOLDEN = Path(__file__).parent / "golden"
U2 = enumerate_universe(2)
U3 = enumerate_universe(3)
ONE = hf(EMPTY)
W = parse_ordinal("w")


def _random_set(rng, rank):
    if rank == 0:
        return EMPTY
    pool = enumerate_universe(rank - 1) if rank <= 4 else None
    return hf(*[x for x in pool if rng.random() < 0.5])


def test_c01_codec_round_trip():
    start = time.perf_counter()
    rng = random.Random(1)
    samples = list(U3)
    samples += [_random_set(rng, 4) for _ in range(200)]
    assert len(U3) == 16
    for x in samples:
        for s in range(3):
            assert decode_basic(encode_tree(x, seeded_chooser(s))) is x
    assert time.perf_counter() - start < 5


def test_c02_oracle_decoding():
    start = time.perf_counter()
    rng = random.Random(2)
    for _ in range(500):
        paths = random_code(rng, 12)
        assert decode_oracle_g(paths) is decode_basic(paths)
    assert time.perf_counter() - start < 5
    # the oracle encoding is not decode-correct on {{0},{{0}}} under any order
    x = hf(ONE, hf(ONE))
    for order in itertools.permutations(hf_trcl(hf(x)).elements):
        paths = {p for _, p in encode_oracle_f(x, order)}
        assert is_basic_code(paths)
        assert decode_basic(paths) is not x


def test_c03_rank_preservation():
    for x in U3:
        for s in range(3):
            paths = encode_tree(x, seeded_chooser(s))
            for p in paths:
                sub = decode_basic({q[len(p):] for q in paths if q[:len(p)] == p})
                assert node_rank(paths, p) == hf_rank(sub)


def _golden_input(kind, n):
    m = code_marking([encode_tree(hf_from_numeral(n))])
    if kind == "end":
        return m
    m = delimit(m)
    if kind == "copy":
        m[Address(1, ())] = Mark.ONE
    return m


def test_c04_golden_traces():
    cases = [("end", n) for n in (0, 1, 2)] + [(k, n) for k in ("copy", "erase", "traverse2") for n in (1, 2)]
    for kind, n in cases:
        buf = io.StringIO()
        outcome = run(builtin(kind), _golden_input(kind, n), 100, trace=buf)
        assert isinstance(outcome, Halted) and outcome.steps < 100
        assert buf.getvalue() == (GOLDEN / f"{kind}_{n}.trace").read_text(), (kind, n)


def test_c05_deciders():
    start = time.perf_counter()
    for kind in ("member", "equal"):
        t = m_decide(kind)
        for x, y in itertools.product(U3, repeat=2):
            want = int(hf_member(x, y) if kind == "member" else x is y)
            for s in range(2):
                out = run(t, codes([x, y], [s, s + 1]), 10**6)
                assert isinstance(out, Halted)
                assert bool_value(out.final) == want, (kind, x, y, s)
    assert time.perf_counter() - start < 60


def _adversarial_codes():
    """Codes with repeated subtrees at several depths."""
    literal = [
        {(), (0,), (1,)},
        {(), (0,), (0, 0), (1,), (1, 0)},
        {(), (0,), (0, 0), (1,), (1, 0), (1, 1)},
        {(), (0,), (0, 0), (0, 1), (0, 1, 0), (1,), (1, 0), (1, 0, 0), (1, 1)},
        {(), (0,), (0, 0), (0, 0, 0), (1,), (1, 0), (1, 0, 0), (2,), (2, 0)},
    ]
    rng = random.Random(6)
    return [code_marking([p]) for p in literal] + [code_marking([random_code(rng, 10)]) for _ in range(25)]


def test_c06_canonicalization():
    mc = m_canonicalize()
    inputs = [codes([x], [s]) for x in U2 for s in range(3)] + _adversarial_codes()
    assert any(not is_canonical(m) for m in inputs)
    for m in inputs:
        out = run(mc, m, 10**7)
        assert isinstance(out, Halted)
        assert is_canonical(out.final)
        assert decode_marking(out.final) == decode_marking(m)


def _leaf_marked(m):
    asm = Asm("leaves")
    return run(asm.table(_mark_leaves(asm, "H")), m, 10**5).final


def _inner_recursion(t):
    if isinstance(t, Recursion):
        return t
    for c in t.children:
        found = _inner_recursion(c)
        if found:
            return found
    return None


def _loop_suite():
    """(name, M, MB, n, inputs) for the while-loop comparison."""
    env = derived_env()
    rec = lambda s: compile(parse_rec(s, env=env))  # noqa: E731
    numerals = [codes([hf_from_numeral(k)]) for k in range(3)]
    u2 = [codes([x], [s]) for x in U2 for s in (0, 1)]
    k0 = "(comp1 zero (proj 2 1))"
    above = rec(f"(cond (proj 2 1) (proj 2 2) {k0} (singleton {k0}))")
    trcl_g = compile(_inner_recursion(derived("trcl")).g)
    rank_g = compile(apply(Adjoin(), Proj(2, 1), Proj(2, 1)))
    in_two = rec("(cond (proj 1 1) (vn_succ (vn_succ zero)) (singleton zero) zero)")
    in_three = rec("(cond (proj 1 1) (adjoin (vn_succ (vn_succ zero)) (singleton (singleton zero)))"
                   " (singleton zero) zero)")
    empty_missing = rec("(cond zero (proj 1 1) zero (singleton zero))")
    pairs_ = [codes([x, y], [1, 0]) for x, y in itertools.product(U2, repeat=2)]
    return [
        ("canonicalize", local_canonicalize(), canon_test(), 1, [_leaf_marked(m) for m in u2]),
        ("mu least_not_in", *mu_loop(compile(derived("least_not_in").g), 1), 2,
         [codes([x, EMPTY]) for x in U2]),
        ("mu first_above", *mu_loop(above, 1), 2, [codes([hf_from_numeral(k), EMPTY]) for k in range(3)]),
        ("recursion trcl", *recursion_loop(trcl_g, 1), 2, pairs_),
        ("recursion rank", *recursion_loop(rank_g, 0), 1, u2),
        ("vn_succ below 2", compile(derived("vn_succ")), in_two, 1, u2),
        ("singleton below 3", compile(derived("singleton")), in_three, 1, u2),
        ("trcl until 0 in x", compile(derived("trcl")), empty_missing, 1, [m for m in u2 if m != codes([EMPTY])]),
        ("succ never", m_ord("succ"), compile(parse_rec("zero")), 1, numerals),
        ("succ below 2", m_ord("succ"), in_two, 1, numerals),
    ]


def test_c07_while_loop_fidelity():
    suite = _loop_suite()
    assert len(suite) >= 10
    for name, m, mb, n, inputs in suite:
        loop = while_loop(m, mb, n)
        for x in inputs:
            out = run(loop, x, 10**7)
            assert isinstance(out, Halted), name
            assert out.final == reference_iterate(m, mb, x, fuel=10**7), name


def _seq(tail, pieces=(), length=W):
    return TransfiniteSeq(length, pieces, tail)


def test_c08_limit_operators():
    a0, a1, a10 = Address(0, (0,)), Address(0, (1,)), Address(0, (1, 0))
    w2 = parse_ordinal("w*2")
    cases = [
        (weak_liminf, _seq(Ramp(Address(0, ()), W)), Address(0, (W,))),
        (weak_liminf, _seq(Ramp(Address(1, (2,)), W)), Address(1, (2, W))),
        (weak_liminf, _seq(Ramp(Address(0, ()), w2), length=w2), Address(0, (w2,))),
        (weak_liminf, _seq(Constant(a1)), a1),
        (weak_liminf, _seq(Constant(a1), pieces=((0, a0),)), a1),
        (weak_liminf, _seq(Cycle((a1, a0))), a0),
        (weak_liminf, _seq(Cycle((a10, a1))), a1),
        (weak_liminf, _seq(Cycle((Address(1, ()), a10))), a10),
        (least_cofinal, _seq(Cycle((3, 1, 2))), 1),
        (least_cofinal, _seq(Constant(4), pieces=((0, 0),)), 4),
        (pointwise_limit, _seq(Constant(Mark.ONE), pieces=((0, Mark.BLANK), (5, Mark.TWO))), Mark.ONE),
        (pointwise_limit, _seq(Cycle((Mark.BLANK, Mark.ONE))), UNDEFINED),
        (pointwise_limit, _seq(Cycle((Mark.TWO,))), Mark.TWO),
    ]
    assert len(cases) >= 12
    for op, seq, want in cases:
        assert op(seq) == want, (op.__name__, seq)


def test_c09_flagship_equivalence():
    start = time.perf_counter()
    for name, t in flagship_corpus().items():
        report = equiv_check(t, rank_bound=2, seeds=3, fuel=10**7, name=name)
        assert report.disagreements == 0, report.summary()
        assert report.invariance_errors == [], report.summary()
        assert report.counts()["agree"] == len(report.records), report.summary()
    assert time.perf_counter() - start < 600


def test_c10_code_invariance():
    seeds = range(5)
    for kind in ("member", "equal"):
        t = m_decide(kind)
        for args in itertools.product(U2, repeat=2):
            fm_eval(t, args, fuel=10**6, seeds=seeds)
    for name, term in flagship_corpus().items():
        table = compile(term)
        for args in itertools.product(U2, repeat=term.arity):
            fm_eval(table, args, fuel=10**7, seeds=seeds)
