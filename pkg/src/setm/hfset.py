"""Hereditarily finite sets as canonical, interned values.

Every ``HFSet`` is interned, so structural equality is object identity and
sets can be used freely as dict keys. Elements are kept sorted by Ackermann
number, which also fixes the textual form.

    >>> two = hf_from_numeral(2)
    >>> format_set(two)
    '{{},{{}}}'
    >>> ackermann(two)
    3
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from functools import cmp_to_key
from typing import Callable, Iterable, Sequence


def _ack_cmp(x: "HFSet", y: "HFSet") -> int:
    # compare Ackermann numbers without building them: the largest element
    # in the symmetric difference decides
    if x is y:
        return 0
    ex, ey = x.elements, y.elements
    i, j = len(ex) - 1, len(ey) - 1
    while i >= 0 and j >= 0:
        c = _ack_cmp(ex[i], ey[j])
        if c:
            return c
        i -= 1
        j -= 1
    return (i >= 0) - (j >= 0)


_ack_key = cmp_to_key(_ack_cmp)


class HFSet:
    __slots__ = ("elements", "_rank", "_ack", "__weakref__")
    _table: dict = {}

    def __new__(cls, elements: Iterable["HFSet"] = ()):
        uniq = set(elements)
        for e in uniq:
            if not isinstance(e, HFSet):
                raise TypeError(f"HFSet elements must be HFSet, got {type(e).__name__}")
        key = tuple(sorted(uniq, key=_ack_key))
        found = cls._table.get(key)
        if found is not None:
            return found
        obj = super().__new__(cls)
        obj.elements = key
        obj._rank = None
        obj._ack = None
        cls._table[key] = obj
        return obj

    @classmethod
    def _from_sorted(cls, key: tuple) -> "HFSet":
        # caller guarantees key is duplicate-free and in Ackermann order
        found = cls._table.get(key)
        if found is not None:
            return found
        obj = super().__new__(cls)
        obj.elements = key
        obj._rank = None
        obj._ack = None
        cls._table[key] = obj
        return obj

    def __reduce__(self):
        return (HFSet, (self.elements,))

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, item):
        return item in self.elements

    def __lt__(self, other):
        return _ack_cmp(self, other) < 0

    def __repr__(self):
        return f"HFSet({format_set(self)})"

    def __str__(self):
        return format_set(self)


EMPTY = HFSet()


def hf(*elements: HFSet) -> HFSet:
    return HFSet(elements)


def hf_member(x: HFSet, y: HFSet) -> bool:
    return x in y.elements


def hf_rank(x: HFSet) -> int:
    if x._rank is None:
        x._rank = 1 + max(hf_rank(e) for e in x.elements) if x.elements else 0
    return x._rank


def hf_trcl(x: HFSet) -> HFSet:
    """Transitive closure: the elements of x and, recursively, theirs."""
    seen: set = set()
    stack = list(x.elements)
    while stack:
        y = stack.pop()
        if y not in seen:
            seen.add(y)
            stack.extend(y.elements)
    return HFSet(seen)


def hf_union(x: HFSet, y: HFSet) -> HFSet:
    return HFSet(x.elements + y.elements)


def hf_big_union(x: HFSet) -> HFSet:
    return HFSet(e for y in x.elements for e in y.elements)


def ackermann(x: HFSet) -> int:
    if x._ack is None:
        x._ack = sum(1 << ackermann(e) for e in x.elements)
    return x._ack


def from_ackermann(n: int) -> HFSet:
    if n < 0:
        raise ValueError("Ackermann numbers are non-negative")
    elems = []
    i = 0
    while n:
        if n & 1:
            elems.append(from_ackermann(i))
        n >>= 1
        i += 1
    return HFSet(elems)


_NUMERALS = [EMPTY]


def hf_from_numeral(n: int) -> HFSet:
    """The von Neumann numeral n = {0, ..., n-1}."""
    if n < 0:
        raise ValueError("numerals are non-negative")
    while len(_NUMERALS) <= n:
        last = _NUMERALS[-1]
        # a numeral exceeds all its elements, so appending keeps the order
        _NUMERALS.append(HFSet._from_sorted(last.elements + (last,)))
    return _NUMERALS[n]


def numeral_value(x: HFSet) -> int | None:
    """Inverse of hf_from_numeral, or None if x is not a numeral."""
    n = len(x.elements)
    return n if x is hf_from_numeral(n) else None


def kpair(a: HFSet, b: HFSet) -> HFSet:
    """Kuratowski ordered pair {{a},{a,b}}."""
    return hf(hf(a), hf(a, b))


def unkpair(p: HFSet) -> tuple[HFSet, HFSet] | None:
    """Inverse of kpair, or None if p is not an ordered pair."""
    els = p.elements
    if len(els) == 1:
        (s,) = els
        if len(s) == 1:
            return s.elements[0], s.elements[0]
        return None
    if len(els) != 2:
        return None
    small, big = sorted(els, key=len)
    if len(small) != 1 or len(big) != 2 or small.elements[0] not in big:
        return None
    a = small.elements[0]
    b = big.elements[0] if big.elements[1] is a else big.elements[1]
    return a, b


# ---------------------------------------------------------------- woo


@dataclass(frozen=True)
class Woo:
    """A well ordering of ``subject`` by an ordinal: position i holds the
    element mapped to i."""

    subject: HFSet
    order: tuple

    def __post_init__(self):
        if len(self.order) != len(self.subject) or set(self.order) != set(self.subject):
            raise ValueError("woo order must be a permutation of the subject")

    def index(self, x: HFSet) -> int:
        return self.order.index(x)

    def as_set(self) -> HFSet:
        """The bijection as a set of Kuratowski pairs (element, numeral)."""
        return HFSet(kpair(e, hf_from_numeral(i)) for i, e in enumerate(self.order))


def _unrank_permutation(items: Sequence, rank: int) -> tuple:
    pool = list(items)
    out = []
    for k in range(len(pool), 0, -1):
        q, rank = divmod(rank, math.factorial(k - 1))
        out.append(pool.pop(q))
    return tuple(out)


def sample_woo(x: HFSet, seed: int) -> Woo:
    """Deterministic well ordering of x's elements.

    Seed 0 is the Ackermann order. Any other seed picks a pseudo-random
    non-identity permutation (when |x| >= 2), derived from the seed and x.
    """
    n = len(x)
    if seed == 0 or n < 2:
        return Woo(x, x.elements)
    total = math.factorial(n)
    rng = random.Random(f"{seed}:{format_set(x)}")
    rank = 1 + rng.randrange(total - 1)
    return Woo(x, _unrank_permutation(x.elements, rank))


Chooser = Callable[[HFSet], Woo]


def seeded_chooser(seed: int) -> Chooser:
    return lambda v: sample_woo(v, seed)


def trcl_chooser(x: HFSet, seed: int) -> Chooser:
    """Order every set reached from x by restricting one woo of trcl({x})."""
    closure = hf_trcl(hf(x))
    order = sample_woo(closure, seed).order
    pos = {e: i for i, e in enumerate(order)}

    def choose(v: HFSet) -> Woo:
        return Woo(v, tuple(sorted(v.elements, key=pos.__getitem__)))

    return choose


# ---------------------------------------------------------------- universe

UNIVERSE_LIMIT = 4


def universe_size(rank_bound: int) -> int:
    size = 1
    for _ in range(rank_bound):
        size = 1 << size
    return size


def enumerate_universe(rank_bound: int) -> list[HFSet]:
    """All sets of rank <= rank_bound, in Ackermann order."""
    if rank_bound < 0:
        raise ValueError("rank bound must be non-negative")
    if rank_bound > UNIVERSE_LIMIT:
        raise ValueError(
            f"rank bound {rank_bound} too large: rank <= 5 already has "
            f"2**65536 sets; the limit is {UNIVERSE_LIMIT}"
        )
    return [from_ackermann(i) for i in range(universe_size(rank_bound))]


# ---------------------------------------------------------------- literals


def format_set(x: HFSet) -> str:
    return "{" + ",".join(format_set(e) for e in x.elements) + "}"


def parse_set(text: str) -> HFSet:
    """Parse ``{}``, ``{a,b}`` and decimal numerals (von Neumann)."""
    s = "".join(text.split())
    pos = 0

    def parse() -> HFSet:
        nonlocal pos
        if pos >= len(s):
            raise ValueError("unexpected end of set literal")
        if s[pos].isdigit():
            start = pos
            while pos < len(s) and s[pos].isdigit():
                pos += 1
            return hf_from_numeral(int(s[start:pos]))
        if s[pos] != "{":
            raise ValueError(f"unexpected {s[pos]!r} at {pos} in set literal")
        pos += 1
        elems = []
        if pos < len(s) and s[pos] == "}":
            pos += 1
            return EMPTY
        while True:
            elems.append(parse())
            if pos < len(s) and s[pos] == ",":
                pos += 1
                continue
            if pos < len(s) and s[pos] == "}":
                pos += 1
                return HFSet(elems)
            raise ValueError(f"expected ',' or '}}' at {pos} in set literal")

    out = parse()
    if pos != len(s):
        raise ValueError(f"trailing input at {pos} in set literal")
    return out


def all_permutations(x: HFSet) -> list[tuple]:
    return list(itertools.permutations(x.elements))
