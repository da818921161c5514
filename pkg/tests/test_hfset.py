import itertools

import pytest
from hypothesis import given, strategies as st

from setm.hfset import (
    EMPTY,
    HFSet,
    ackermann,
    enumerate_universe,
    format_set,
    from_ackermann,
    hf,
    hf_from_numeral,
    hf_member,
    hf_rank,
    hf_trcl,
    kpair,
    parse_set,
    sample_woo,
    unkpair,
)

E = EMPTY
ONE = hf(E)
TWO = hf(E, ONE)


def test_member_examples():
    assert hf_member(E, ONE)
    assert not hf_member(ONE, ONE)
    assert hf_member(ONE, TWO)


def test_rank_examples():
    assert hf_rank(E) == 0
    assert hf_rank(TWO) == 2
    assert hf_rank(hf(hf(ONE))) == 3


def test_trcl_examples():
    assert hf_trcl(E) is E
    assert hf_trcl(hf(ONE)) is hf(ONE, E)
    assert hf_trcl(TWO) is TWO


def test_ackermann_examples():
    assert ackermann(E) == 0
    assert ackermann(ONE) == 1
    assert ackermann(TWO) == 3


def test_numerals():
    assert hf_from_numeral(0) is E
    assert hf_from_numeral(1) is ONE
    assert hf_from_numeral(2) is TWO
    for n in range(1, 8):
        assert hf_from_numeral(n) is HFSet(hf_from_numeral(k) for k in range(n))


def test_canonical_equality():
    assert hf(ONE, E, ONE) is hf(E, ONE)
    assert hf(E, ONE).elements == (E, ONE)


def test_ackermann_bijection():
    for n in range(10**4):
        assert ackermann(from_ackermann(n)) == n
    for x in enumerate_universe(3):
        assert from_ackermann(ackermann(x)) is x


def test_universe_sizes():
    assert enumerate_universe(0) == [E]
    assert enumerate_universe(1) == [E, ONE]
    assert len(enumerate_universe(2)) == 4
    assert len(enumerate_universe(3)) == 16
    with pytest.raises(ValueError, match="too large"):
        enumerate_universe(5)


def test_universe_is_all_sets_of_bounded_rank(u3):
    assert len(set(u3)) == 16
    assert all(hf_rank(x) <= 3 for x in u3)
    # every subset of V_3 is in V_4 and vice versa
    v4 = enumerate_universe(4)
    assert set(v4) == {HFSet(c) for r in range(17) for c in itertools.combinations(u3, r)}


def test_trcl_is_transitive(u3):
    for x in u3:
        t = hf_trcl(x)
        assert all(e in t for e in x)
        assert all(z in t for y in t for z in y)


def _longest_chain(x):
    return 0 if not x.elements else 1 + max(_longest_chain(y) for y in x)


def test_rank_is_longest_descending_chain(u3):
    # explicit chain search: length of the longest x > y1 > ... > yk chain
    def chains(x):
        yield [x]
        for y in x:
            for c in chains(y):
                yield [x] + c

    for x in u3:
        assert hf_rank(x) == max(len(c) for c in chains(x)) - 1


def test_sample_woo_examples():
    assert sample_woo(E, 5).order == ()
    assert sample_woo(TWO, 0).order == (E, ONE)
    assert sample_woo(TWO, 1).order == (ONE, E)


def test_sample_woo_reaches_every_permutation():
    for x in [TWO, hf_from_numeral(3), hf(E, hf(ONE), TWO)]:
        seen = {sample_woo(x, s).order for s in range(300)}
        assert seen == set(itertools.permutations(x.elements))


@given(st.integers(0, 65535), st.integers(0, 50))
def test_sample_woo_is_deterministic_permutation(n, seed):
    x = from_ackermann(n)
    w = sample_woo(x, seed)
    assert sorted(w.order) == list(x.elements)
    assert w == sample_woo(x, seed)


def test_kpair_round_trip(u2):
    for a, b in itertools.product(u2, repeat=2):
        assert kpair(a, b) is hf(hf(a), hf(a, b))
        assert unkpair(kpair(a, b)) == (a, b)


@given(st.integers(0, 65535))
def test_literal_round_trip(n):
    x = from_ackermann(n)
    assert parse_set(format_set(x)) is x


def test_literals():
    assert parse_set("{}") is E
    assert parse_set(" { {} , {{}} } ") is TWO
    assert parse_set("{0,0,1}") is TWO
    assert parse_set("3") is hf_from_numeral(3)
    for bad in ["{", "{}}", "{a}", ""]:
        with pytest.raises(ValueError):
            parse_set(bad)
