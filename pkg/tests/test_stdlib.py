import itertools
import random

import pytest

from conftest import codes, random_code
from setm.asm import Asm
from setm.compiler import compile
from setm.hfset import EMPTY, HFSet, hf, hf_from_numeral, hf_member, kpair, seeded_chooser
from setm.machine import Crashed, Halted, Move, parse_table, run
from setm.ordinal import Address
from setm.rec import Zero
from setm.stdlib import (
    IterationError,
    bool_value,
    builtin,
    canon_test,
    catalogue,
    compose,
    delimit,
    erase_below,
    if_then_else,
    local_canonicalize,
    m_adjoin,
    m_canonicalize,
    m_decide,
    m_dedup,
    m_equal,
    m_exists_equal,
    m_forall_exists,
    m_ord,
    m_pair,
    reference_iterate,
    subtree_copy,
    validate_contract,
    while_loop,
    _mark_leaves,
)
from setm.tapecode import (
    Mark,
    code_marking,
    component_paths,
    decode_basic,
    decode_marking,
    induced,
    is_canonical,
)

ONE = hf(EMPTY)
TWO = hf(EMPTY, ONE)


def _halted(table, marking, fuel=10**6):
    out = run(table, marking, fuel)
    assert isinstance(out, Halted), out
    return out


def _rules(table):
    return {(s, int(m)): (int(w), mv.value, n) for (s, m), (w, mv, n) in table.rules.items()}


def test_builtin_tables_transcribed():
    assert _rules(builtin("end")) == {
        ("l0", 1): (10, "z", "l1"), ("l1", 0): (11, "u", "H"), ("l1", 1): (1, "+", "l1")}
    assert _rules(builtin("erase")) == {
        ("l0", 1): (10, "z", "l1"), ("l1", 0): (0, "u+", "l1"), ("l1", 1): (0, "z", "l1"),
        ("l1", 11): (0, "u", "H")}
    assert _rules(builtin("traverse2")) == {
        ("l0", 1): (10, "z", "l1"), ("l1", 0): (0, "u+", "l1"), ("l1", 1): (2, "z", "l1"),
        ("l1", 11): (0, "u", "H")}
    assert _rules(builtin("copy")) == {
        ("l0", 1): (10, "z", "l1"), ("l1", 0): (0, "u+", "l1"), ("l1", 1): (1, "s", "l2"),
        ("l1", 11): (0, "u", "H"), ("l2", 1): (1, "j+", "l3"), ("l3", 0): (1, "j-", "l4"),
        ("l4", 1): (1, "z", "l1")}


def test_builtins_on_small_universe(u2):
    for x in u2:
        for s in range(3):
            m = delimit(codes([x], [s]))
            out = _halted(builtin("traverse2"), m, 10**4).final
            assert {a for a, v in out.items() if v == Mark.TWO} == {a for a, v in m.items() if a.path and v == Mark.ONE}
            out = _halted(builtin("erase"), m, 10**4).final
            assert out == {Address(0, ()): Mark.DELIM}
            m2 = dict(m)
            m2[Address(1, ())] = Mark.ONE
            out = _halted(builtin("copy"), m2, 10**4).final
            assert decode_basic(component_paths(out, 1)) is x
            assert _halted(builtin("end"), codes([x], [s]), 10**4)


def test_compose_is_sequential(u2):
    pairs = [(m_ord("succ"), m_ord("succ")), (m_canonicalize(), m_dedup()), (builtin("end"), builtin("erase"))]
    for m1, m2 in pairs:
        both = compose(m1, m2)
        for x in u2:
            for s in range(2):
                m = codes([x], [s])
                first = run(m1, m, 10**6)
                want = run(m2, first.final, 10**6) if isinstance(first, Halted) else first
                got = run(both, m, 10**6)
                assert isinstance(got, Halted) == isinstance(want, Halted)
                if isinstance(got, Halted):
                    assert got.final == want.final


def test_compose_with_trivial_halt(u2):
    halt = parse_table("start l0\nl0 1 => 1 s H\n")
    for m in (m_ord("succ"), m_adjoin()):
        both = compose(m, halt)
        for x, y in itertools.product(u2, repeat=2):
            inp = codes([x] if m.name == "succ" else [x, y])
            assert run(both, inp, 10**6).final == run(m, inp, 10**6).final


def test_if_then_else(u2):
    zero = compile(Zero())
    ite = if_then_else(zero, builtin("end"), builtin("erase"))
    for x in u2:
        assert run(ite, codes([x]), 10**5).final == run(builtin("end"), codes([x]), 10**5).final
    dm = m_decide("member")
    ite = if_then_else(dm, m_pair("pair"), m_pair("opair"), n=2)
    rng = random.Random(2)
    from setm.hfset import enumerate_universe

    u3 = enumerate_universe(3)
    for _ in range(10):
        x, y = rng.choice(u3[:6]), rng.choice(u3)
        v = decode_marking(_halted(ite, codes([x, y])).final)
        assert v == (x, y, kpair(x, y) if hf_member(x, y) else hf(x, y))


def _leaf_marked(m):
    asm = Asm("leaves")
    return run(asm.table(_mark_leaves(asm, "H")), m, 10**5).final


def test_canonicalization_loop_matches_reference(u2):
    lc, ct = local_canonicalize(), canon_test()
    loop = while_loop(lc, ct, 1)
    for x in u2:
        for s in range(3):
            m = _leaf_marked(codes([x], [s]))
            assert _halted(loop, m, 10**7).final == reference_iterate(lc, ct, m)


def test_while_zero_iterations(u2):
    zero = compile(Zero())
    loop = while_loop(m_ord("succ"), zero, 1)
    for x in u2:
        assert _halted(loop, codes([x])).final == codes([x])


def test_reference_iterate_errors():
    one = compile(Zero())
    never = parse_table("start l0\nl0 1 => 1 z a\na 0 => 1 u H\n")  # always answers 1
    with pytest.raises(IterationError):
        reference_iterate(m_ord("succ"), never, codes([EMPTY]), max_iterations=5)
    assert reference_iterate(m_ord("succ"), one, codes([ONE])) == codes([ONE])


def test_erase_below():
    eb = erase_below()
    m = codes([TWO])
    m[Address(0, ())] = Mark.ONE_STAR
    assert _halted(eb, m).final == {Address(0, ()): Mark.ONE_STAR}
    m = codes([TWO])
    m[Address(0, (0,))] = Mark.ONE_STAR
    assert _halted(eb, m).final == m
    m = codes([TWO])
    m[Address(0, (1,))] = Mark.ONE_STAR
    want = dict(m)
    del want[Address(0, (1, 0))]
    assert _halted(eb, m).final == want


def test_erase_below_random(u3):
    eb = erase_below()
    rng = random.Random(5)
    for x in u3:
        m = codes([x], [rng.randrange(3)])
        eta = rng.choice(sorted(component_paths(m, 0)))
        m[Address(0, eta)] = Mark.ONE_STAR
        want = {a: v for a, v in m.items() if not (a.path[:len(eta)] == eta and len(a.path) > len(eta))}
        assert _halted(eb, m).final == want


def test_subtree_copy(u3):
    sc = subtree_copy()
    m = codes([TWO, EMPTY])
    m[Address(0, ())] = Mark.ONE_STAR
    m[Address(1, ())] = Mark.ONE_STAR
    out = _halted(sc, m).final
    assert induced(out, Address(1, ())) == induced(m, Address(0, ()))
    again = _halted(sc, out).final
    assert again == out
    rng = random.Random(9)
    for x in u3:
        for y in u3[:6]:
            m = codes([x, y], [0, 1])
            e0 = rng.choice(sorted(component_paths(m, 0)))
            e1 = rng.choice(sorted(component_paths(m, 1)))
            m[Address(0, e0)] = Mark.ONE_STAR
            m[Address(1, e1)] = Mark.TWO_STAR
            out = _halted(sc, m).final
            assert {a: v for a, v in out.items() if a.component == 0} == {a: v for a, v in m.items() if a.component == 0}
            off = lambda mm: {a: v for a, v in mm.items() if a.component == 1 and a.path[:len(e1)] != e1}  # noqa: E731
            assert off(out) == off(m)
            assert induced(out, Address(1, e1)) == induced(m, Address(0, e0))


def _literal(m, a, b):
    return induced(m, a) == induced(m, b)


def test_literal_deciders(u2):
    machines = {"eq": m_equal(), "ex": m_exists_equal(), "xy": m_forall_exists("x->y"), "yx": m_forall_exists("y->x")}
    kids = lambda m, c: [p for p in component_paths(m, c) if len(p) == 1]  # noqa: E731
    for x, y in itertools.product(u2, repeat=2):
        for seeds in [(0, 0), (0, 1)]:
            m = codes([x, y], seeds)
            want = {
                "eq": _literal(m, Address(0, ()), Address(1, ())),
                "ex": any(_literal(m, Address(0, ()), Address(1, p)) for p in kids(m, 1)),
                "xy": all(any(_literal(m, Address(0, p), Address(1, q)) for q in kids(m, 1)) for p in kids(m, 0)),
                "yx": all(any(_literal(m, Address(1, p), Address(0, q)) for q in kids(m, 0)) for p in kids(m, 1)),
            }
            for k, t in machines.items():
                out = _halted(t, m).final
                assert {a: v for a, v in out.items() if a.component < 2} == m
                assert bool_value(induced(out, Address(2, ()))) == want[k], (k, x, y)


def test_literal_equality_examples():
    dup = code_marking([{(), (0,)}, {(), (0,), (1,)}])  # both code {0}
    assert bool_value(induced(_halted(m_equal(), dup).final, Address(2, ()))) == 0
    same = codes([TWO, TWO])
    assert bool_value(induced(_halted(m_equal(), same).final, Address(2, ()))) == 1
    ex = codes([EMPTY, TWO])
    assert bool_value(induced(_halted(m_exists_equal(), ex).final, Address(2, ()))) == 1


def _check_canonical(mc, m):
    out = _halted(mc, m, 10**7).final
    assert is_canonical(out)
    assert decode_marking(out) == decode_marking(m)
    assert set(out.values()) == {Mark.ONE}
    return out


def test_canonicalize(u2):
    mc = m_canonicalize()
    assert _check_canonical(mc, codes([EMPTY])) == codes([EMPTY])
    for x in u2:
        for s in range(3):
            _check_canonical(mc, codes([x], [s]))
    x1 = code_marking([{(), (0,), (0, 0), (1,), (1, 0), (1, 1)}])
    assert not is_canonical(x1)
    out = _check_canonical(mc, x1)
    assert induced(out, Address(0, (0,))) == induced(out, Address(0, (1,)))


def test_canonicalize_random_duplicates():
    mc = m_canonicalize()
    rng = random.Random(3)
    for _ in range(40):
        _check_canonical(mc, code_marking([random_code(rng, 10)]))


def test_pairs(u2):
    for kind, f in (("pair", hf), ("opair", kpair)):
        t = m_pair(kind)
        for x, y in itertools.product(u2, repeat=2):
            assert decode_marking(_halted(t, codes([x, y], [1, 2])).final) == (x, y, f(x, y))
    assert decode_marking(_halted(m_pair("pair"), codes([EMPTY, EMPTY])).final)[2] is ONE


def test_pairing(u2):
    t = m_pair("pairing")
    for x, y in itertools.product(u2, repeat=2):
        m = codes([x, y], [1, 0])
        out = run(t, m, 10**6)
        if len(x) != len(y):
            assert isinstance(out, Crashed)
            continue
        xs = [decode_basic({p[1:] for p in component_paths(m, 0) if p[:1] == (i,)}) for i in range(len(x))]
        ys = [decode_basic({p[1:] for p in component_paths(m, 1) if p[:1] == (i,)}) for i in range(len(y))]
        assert decode_marking(out.final) == (x, y, HFSet(kpair(a, b) for a, b in zip(xs, ys)))


def test_ordinal_machines(u2):
    succ = m_ord("succ")
    for n in range(5):
        assert decode_marking(_halted(succ, codes([hf_from_numeral(n)])).final) == (hf_from_numeral(n + 1),)
    for x in u2:
        for s in range(3):
            v = decode_marking(_halted(m_ord("alpha_c"), codes([x], [s])).final)
            assert v == (x, hf_from_numeral(len(x)))
            v = decode_marking(_halted(m_ord("cwo"), codes([x], [s])).final)
            order = seeded_chooser(s)(x).order
            assert v == (x, hf_from_numeral(len(x)), HFSet(kpair(e, hf_from_numeral(i)) for i, e in enumerate(order)))
    # duplicate children: the ordinal counts code children, not elements
    v = decode_marking(_halted(m_ord("alpha_c"), code_marking([{(), (0,), (1,)}])).final)
    assert v == (ONE, TWO)


def test_adjoin_and_dedup(u2):
    for x, y in itertools.product(u2, repeat=2):
        assert decode_marking(_halted(m_adjoin(), codes([x, y], [1, 0])).final) == (HFSet(x.elements + (y,)),)
    dd = m_dedup()
    rng = random.Random(4)
    for _ in range(25):
        m = code_marking([random_code(rng, 9)])
        out = _halted(dd, m, 10**7).final
        assert decode_marking(out) == decode_marking(m)
        roots = [induced(out, Address(0, p)) for p in component_paths(out, 0) if len(p) == 1]
        assert len(roots) == len(decode_marking(m)[0])


def test_decide_on_small_universe(u2):
    for kind in ("member", "equal"):
        t = m_decide(kind)
        for x, y in itertools.product(u2, repeat=2):
            for s in range(2):
                got = bool_value(_halted(t, codes([x, y], [s, s + 1])).final)
                assert got == int(hf_member(x, y) if kind == "member" else x is y)
    assert bool_value(_halted(m_decide("member"), codes([TWO, TWO])).final) == 0


def test_validate_contract(u2):
    pairs = [codes([x, y]) for x, y in itertools.product(u2, repeat=2)]
    assert validate_contract(m_decide("member"), "boolean", pairs).verdict
    two_comp = []
    for x in u2:
        m = delimit(codes([x]))
        m[Address(1, ())] = Mark.ONE
        two_comp.append(m)
    assert validate_contract(builtin("copy"), "preserves-components", two_comp).verdict
    report = validate_contract(builtin("end"), "boolean", [codes([ONE])])
    assert not report.verdict and report.counterexample == codes([ONE])
    with pytest.raises(ValueError):
        validate_contract(builtin("end"), "nonsense", [])


def test_catalogue_builds():
    lib = catalogue()
    for name in ("end", "copy", "pair", "succ", "adjoin", "erase_below"):
        t = lib[name]()
        assert len(t) > 0
        assert all(mv in Move for _, mv, _ in t.rules.values())
