import itertools

from hypothesis import given, strategies as st

from setm.ordinal import (
    OMEGA,
    UNDEFINED,
    Address,
    Constant,
    Cycle,
    Ramp,
    TransfiniteSeq,
    address_compare,
    format_ordinal,
    is_initial_segment,
    is_strict_initial_segment,
    is_weak_upper_bound,
    least_cofinal,
    lex_compare,
    make_ordinal,
    ord_compare,
    ord_succ,
    parse_address,
    parse_ordinal,
    parse_path,
    pointwise_limit,
    weak_liminf,
)

W = OMEGA


def _below_omega_times_2(n=6):
    # explicit list in increasing order: 0..n-1, w, w+1, ..., w+n-1
    return list(range(n)) + [make_ordinal([(1, 1)] + ([(0, k)] if k else [])) for k in range(n)]


def test_ord_compare_matches_enumeration():
    order = _below_omega_times_2()
    for (i, a), (j, b) in itertools.product(enumerate(order), repeat=2):
        assert ord_compare(a, b) == (i > j) - (i < j)


def test_ord_compare_examples():
    assert ord_compare(0, 0) == 0
    assert ord_compare(W, 3) == 1
    assert ord_compare(parse_ordinal("w+1"), parse_ordinal("w*2")) == -1


def test_ord_succ():
    assert ord_succ(0) == 1
    assert ord_succ(2) == 3
    w1 = ord_succ(W)
    assert w1 == parse_ordinal("w+1")
    assert ord_compare(W, w1) == -1
    assert all(ord_compare(n, W) == -1 for n in range(100))


def test_parse_format_round_trip():
    for text in ["0", "7", "w", "w+1", "w*2+3", "w^2", "w^2*3+w+5", "w^w"]:
        assert format_ordinal(parse_ordinal(text)) == text


cnf = st.recursive(
    st.integers(0, 4),
    lambda inner: st.lists(st.tuples(inner, st.integers(1, 3)), min_size=1, max_size=3).map(
        lambda ts: make_ordinal(sorted({e: c for e, c in ts}.items(), key=lambda t: _key(t[0]), reverse=True))
    ),
    max_leaves=6,
)


def _key(a):
    from functools import cmp_to_key

    return cmp_to_key(ord_compare)(a)


@given(cnf, cnf, cnf)
def test_ord_compare_is_total_order(a, b, c):
    assert ord_compare(a, a) == 0
    assert ord_compare(a, b) == -ord_compare(b, a)
    if ord_compare(a, b) <= 0 and ord_compare(b, c) <= 0:
        assert ord_compare(a, c) <= 0


@given(cnf)
def test_succ_is_immediate(a):
    s = ord_succ(a)
    assert ord_compare(a, s) == -1


def test_lex_compare_examples():
    assert lex_compare((1,), (1, 0)) == -1
    assert lex_compare((), ()) == 0
    assert lex_compare((0, 5), (1,)) == -1


_PATHS = [p for k in range(4) for p in itertools.product([0, 1, 2, W], repeat=k)]


def test_lex_is_total_and_extends_initial_segments():
    for a, b in itertools.product(_PATHS, repeat=2):
        c = lex_compare(a, b)
        assert c == -lex_compare(b, a)
        assert (c == 0) == (a == b)
        if is_strict_initial_segment(a, b):
            assert c == -1
    small = [p for p in _PATHS if len(p) <= 2]
    for a, b, c in itertools.product(small, repeat=3):
        if lex_compare(a, b) < 0 and lex_compare(b, c) < 0:
            assert lex_compare(a, c) < 0


def test_lex_brute_force_over_small_alphabet():
    paths = [p for k in range(3) for p in itertools.product([0, 1, 5], repeat=k)]
    ranked = sorted(paths, key=lambda p: [x + 1 for x in p] + [0])  # prefix sorts first
    for i, j in itertools.product(range(len(ranked)), repeat=2):
        assert lex_compare(ranked[i], ranked[j]) == (i > j) - (i < j)


def test_initial_segment():
    assert is_initial_segment((), (3, 1))
    assert not is_initial_segment((0,), (1, 0))
    assert is_initial_segment((0, W), (0, W, 2))
    assert is_initial_segment((1, 2), (1, 2))
    assert not is_strict_initial_segment((1, 2), (1, 2))


def test_path_and_address_syntax():
    assert parse_path("[0,w,2]") == (0, W, 2)
    assert parse_path("[]") == ()
    assert parse_address("3:[1,0]") == Address(3, (1, 0))


def _seq(tail, pieces=()):
    return TransfiniteSeq(W, pieces, tail)


def test_weak_liminf_examples():
    assert weak_liminf(_seq(Constant(Address(0, (5,))))) == Address(0, (5,))
    assert weak_liminf(_seq(Cycle((Address(0, (0, 0)), Address(0, (0,)))))) == Address(0, (0,))
    assert weak_liminf(_seq(Ramp(Address(0, ()), W))) == Address(0, (W,))


def test_cycle_liminf_by_definition():
    values = (Address(0, (0, 0)), Address(0, (0,)))
    seq = _seq(Cycle(values))
    # the weak upper bounds among the cycle values, and the least of them
    bounds = [v for v in values if is_weak_upper_bound(seq, v)]
    assert min(bounds, key=lambda a: (a.component,) + a.path) == weak_liminf(seq)


_ADDRS = [Address(c, p) for c in (0, 1) for p in _PATHS if len(p) <= 2]
_SEQS = [
    _seq(Constant(Address(0, (1,)))),
    _seq(Cycle((Address(0, (1, 0)), Address(0, (2,)), Address(1, ())))),
    _seq(Ramp(Address(0, ()), W)),
    _seq(Ramp(Address(0, (1,)), W)),
    _seq(Cycle((Address(1, (0,)), Address(0, (W,))))),
]


def test_weak_liminf_is_least_weak_upper_bound():
    for seq in _SEQS:
        eta = weak_liminf(seq)
        assert is_weak_upper_bound(seq, eta)
        for a in _ADDRS:
            if address_compare(a, eta) < 0:
                assert not is_weak_upper_bound(seq, a), (seq, a)


def test_least_cofinal():
    assert least_cofinal(_seq(Constant(3))) == 3
    assert least_cofinal(_seq(Cycle((1, 2)))) == 1
    assert least_cofinal(_seq(Cycle((5, 2, 7)))) == 2


def test_pointwise_limit():
    assert pointwise_limit(_seq(Constant(2))) == 2
    assert pointwise_limit(_seq(Cycle((0, 1)))) is UNDEFINED
    assert pointwise_limit(_seq(Constant(11), pieces=((0, 1), (5, 3)))) == 11


def test_constant_tail_operators_agree():
    for v in [0, 4, 9]:
        seq = _seq(Constant(v), pieces=((0, 1),))
        assert least_cofinal(seq) == pointwise_limit(seq) == v
    a = Address(2, (1, 1))
    assert weak_liminf(_seq(Constant(a))) == a


def test_sequence_validation():
    import pytest

    with pytest.raises(ValueError):
        TransfiniteSeq(5, (), Constant(1))
    with pytest.raises(ValueError):
        Cycle((1, 1))
    with pytest.raises(ValueError):
        TransfiniteSeq(W, ((3, 1), (1, 2)), Constant(1))
