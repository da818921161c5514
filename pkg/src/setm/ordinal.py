"""Ordinals below epsilon_0 in Cantor normal form, ordinal paths and addresses,
and the three limit operators over finitely described transfinite sequences.

Finite ordinals are plain ``int`` values everywhere; ``Ordinal`` instances only
appear for infinite ordinals (the constructor normalizes finite results back to
``int``). Comparison between the two kinds works in both directions.

    >>> w = parse_ordinal("w")
    >>> ord_compare(w, 3)
    1
    >>> format_ordinal(ord_succ(parse_ordinal("w*2+3")))
    'w*2+4'
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import total_ordering
from typing import Any, NamedTuple, Sequence, Union

LESS, EQUAL, GREATER = -1, 0, 1


@total_ordering
class Ordinal:
    """An infinite ordinal ``w^e1*c1 + w^e2*c2 + ...`` with e1 > e2 > ...

    Use :func:`make_ordinal` to build values; it returns an ``int`` when the
    result is finite.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms):
        self.terms = tuple(terms)
        self._hash = hash(self.terms)

    def __eq__(self, other):
        if isinstance(other, Ordinal):
            return self.terms == other.terms
        if isinstance(other, int):
            return False
        return NotImplemented

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        if isinstance(other, (Ordinal, int)):
            return ord_compare(self, other) < 0
        return NotImplemented

    def __repr__(self):
        return f"Ordinal({format_ordinal(self)!r})"

    def __str__(self):
        return format_ordinal(self)


OrdinalLike = Union[int, Ordinal]
OMEGA = Ordinal(((1, 1),))


def _terms(a: OrdinalLike):
    if isinstance(a, Ordinal):
        return a.terms
    if a < 0:
        raise ValueError(f"negative ordinal {a}")
    return ((0, a),) if a else ()


def make_ordinal(terms) -> OrdinalLike:
    """Normalize a term list (exponent, coefficient) into an ordinal value.

    Terms must already be in strictly decreasing exponent order with positive
    coefficients.
    """
    terms = tuple((e, c) for e, c in terms)
    for (e1, _), (e2, _) in zip(terms, terms[1:]):
        if ord_compare(e1, e2) <= 0:
            raise ValueError("exponents must be strictly decreasing")
    if any(c < 1 for _, c in terms):
        raise ValueError("coefficients must be positive")
    if not terms:
        return 0
    if len(terms) == 1 and terms[0][0] == 0:
        return terms[0][1]
    return Ordinal(terms)


def ord_compare(a: OrdinalLike, b: OrdinalLike) -> int:
    """Three-way comparison: -1, 0 or 1."""
    if isinstance(a, int) and isinstance(b, int):
        return (a > b) - (a < b)
    ta, tb = _terms(a), _terms(b)
    for (ea, ca), (eb, cb) in zip(ta, tb):
        c = ord_compare(ea, eb)
        if c:
            return c
        if ca != cb:
            return 1 if ca > cb else -1
    return (len(ta) > len(tb)) - (len(ta) < len(tb))


def ord_succ(a: OrdinalLike) -> OrdinalLike:
    if isinstance(a, int):
        return a + 1
    terms = list(a.terms)
    if terms[-1][0] == 0:
        terms[-1] = (0, terms[-1][1] + 1)
    else:
        terms.append((0, 1))
    return Ordinal(terms)


def is_limit(a: OrdinalLike) -> bool:
    return isinstance(a, Ordinal) and a.terms[-1][0] != 0


def is_finite(a: OrdinalLike) -> bool:
    return isinstance(a, int)


# ---------------------------------------------------------------- text syntax

_TOKEN = re.compile(r"\s*(\d+|w|\^|\*|\+|\(|\))")


def _tokenize(text: str):
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"bad ordinal syntax at {pos}: {text!r}")
        out.append(m.group(1))
        pos = m.end()
    return out


class _OrdParser:
    def __init__(self, tokens):
        self.toks = tokens
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise ValueError(f"expected {expected or 'token'}, got {tok!r}")
        self.i += 1
        return tok

    def ordinal(self):
        terms = [self.term()]
        while self.peek() == "+":
            self.take("+")
            terms.append(self.term())
        return _add_terms(terms)

    def term(self):
        tok = self.take()
        if tok.isdigit():
            return (0, int(tok))
        if tok != "w":
            raise ValueError(f"unexpected {tok!r}")
        exp: OrdinalLike = 1
        if self.peek() == "^":
            self.take("^")
            if self.peek() == "(":
                self.take("(")
                exp = self.ordinal()
                self.take(")")
            elif self.peek() == "w":
                self.take("w")
                exp = OMEGA
            else:
                exp = int(self.take())
        coef = 1
        if self.peek() == "*":
            self.take("*")
            coef = int(self.take())
        if exp == 0:
            return (0, coef)
        return (exp, coef)


def _add_terms(terms) -> OrdinalLike:
    # ordinal addition of monomials: a smaller exponent followed by a larger
    # one is absorbed, equal exponents add coefficients
    out: list = []
    for e, c in terms:
        if c == 0:
            continue
        while out and ord_compare(out[-1][0], e) < 0:
            out.pop()
        if out and ord_compare(out[-1][0], e) == 0:
            out[-1] = (e, out[-1][1] + c)
        else:
            out.append((e, c))
    return make_ordinal(out)


def parse_ordinal(text: str) -> OrdinalLike:
    p = _OrdParser(_tokenize(text))
    val = p.ordinal()
    if p.peek() is not None:
        raise ValueError(f"trailing input in ordinal {text!r}")
    return val


def format_ordinal(a: OrdinalLike) -> str:
    if isinstance(a, int):
        return str(a)
    parts = []
    for e, c in a.terms:
        if e == 0:
            parts.append(str(c))
            continue
        if e == 1:
            base = "w"
        elif isinstance(e, int) or e == OMEGA:
            base = f"w^{format_ordinal(e)}"
        else:
            base = f"w^({format_ordinal(e)})"
        parts.append(base if c == 1 else f"{base}*{c}")
    return "+".join(parts)


# ---------------------------------------------------------------- paths

Path = tuple


class Address(NamedTuple):
    component: int
    path: Path = ()

    def __str__(self):
        return format_address(self)


def lex_compare(a: Sequence[OrdinalLike], b: Sequence[OrdinalLike]) -> int:
    """Lexicographic order with proper initial segments first."""
    for x, y in zip(a, b):
        c = ord_compare(x, y)
        if c:
            return c
    return (len(a) > len(b)) - (len(a) < len(b))


def is_initial_segment(a: Sequence, b: Sequence) -> bool:
    """Non-strict prefix test: ``a`` is ``b`` or a prefix of ``b``."""
    return len(a) <= len(b) and all(x == y for x, y in zip(a, b))


def is_strict_initial_segment(a: Sequence, b: Sequence) -> bool:
    return len(a) < len(b) and is_initial_segment(a, b)


def address_compare(a: Address, b: Address) -> int:
    """Order addresses as the sequence component followed by the path."""
    return lex_compare((a[0],) + tuple(a[1]), (b[0],) + tuple(b[1]))


def parse_path(text: str) -> Path:
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise ValueError(f"path must be bracketed: {text!r}")
    inner = text[1:-1].strip()
    if not inner:
        return ()
    return tuple(parse_ordinal(part) for part in inner.split(","))


def format_path(path: Sequence[OrdinalLike]) -> str:
    return "[" + ",".join(format_ordinal(x) for x in path) + "]"


def parse_address(text: str) -> Address:
    comp, sep, rest = text.strip().partition(":")
    if not sep:
        raise ValueError(f"address needs 'n:[...]': {text!r}")
    return Address(int(comp), parse_path(rest))


def format_address(addr: Address) -> str:
    return f"{addr[0]}:{format_path(addr[1])}"


# ---------------------------------------------------------------- sequences


@dataclass(frozen=True)
class Constant:
    value: Any


@dataclass(frozen=True)
class Cycle:
    """Each value recurs cofinally often below the sequence length."""

    values: tuple

    def __post_init__(self):
        if not self.values:
            raise ValueError("cycle needs at least one value")
        if len(set(self.values)) != len(self.values):
            raise ValueError("cycle values must be pairwise distinct")


@dataclass(frozen=True)
class Ramp:
    """Tail whose term at index g is ``base`` extended by g, up to ``limit``."""

    base: Address
    limit: OrdinalLike


class Undefined:
    """Marker for a limit that does not exist."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "Undefined"


UNDEFINED = Undefined()


@dataclass(frozen=True)
class TransfiniteSeq:
    """A sequence of limit length: a piecewise constant prefix then a tail.

    ``pieces`` holds ``(start, value)`` pairs; the tail describes cofinal
    behaviour, which is all the limit operators look at.
    """

    length: OrdinalLike
    pieces: tuple = ()
    tail: Any = None

    def __post_init__(self):
        if not is_limit(self.length):
            raise ValueError("sequence length must be a limit ordinal")
        starts = [s for s, _ in self.pieces]
        for s1, s2 in zip(starts, starts[1:]):
            if ord_compare(s1, s2) >= 0:
                raise ValueError("piece starts must be strictly increasing")
        if any(ord_compare(s, self.length) >= 0 for s in starts):
            raise ValueError("piece start beyond sequence length")
        if not isinstance(self.tail, (Constant, Cycle, Ramp)):
            raise ValueError("tail must be Constant, Cycle or Ramp")
        if isinstance(self.tail, Ramp) and self.tail.limit != self.length:
            raise ValueError("ramp limit must equal the sequence length")


def _as_address(v) -> Address:
    return Address(v[0], tuple(v[1]))


def weak_liminf(seq: TransfiniteSeq) -> Address:
    """Least address that bounds (non-strictly) cofinally many terms."""
    tail = seq.tail
    if isinstance(tail, Constant):
        return _as_address(tail.value)
    if isinstance(tail, Cycle):
        best = _as_address(tail.values[0])
        for v in tail.values[1:]:
            v = _as_address(v)
            if address_compare(v, best) < 0:
                best = v
        return best
    base = _as_address(tail.base)
    return Address(base.component, base.path + (tail.limit,))


def is_weak_upper_bound(seq: TransfiniteSeq, eta: Address) -> bool:
    """Decide on the description whether cofinally many terms are <= eta."""
    eta = _as_address(eta)
    tail = seq.tail
    if isinstance(tail, Constant):
        return address_compare(_as_address(tail.value), eta) <= 0
    if isinstance(tail, Cycle):
        return any(address_compare(_as_address(v), eta) <= 0 for v in tail.values)
    base = _as_address(tail.base)
    bseq = (base.component,) + base.path
    eseq = (eta.component,) + eta.path
    if is_initial_segment(eseq, bseq):
        return False  # every term extends eta strictly
    if is_strict_initial_segment(bseq, eseq):
        # eta = base + (d,) + rest: terms base+(g,) with g <= d lie below eta
        return ord_compare(eseq[len(bseq)], tail.limit) >= 0
    return lex_compare(bseq, eseq) < 0


def least_cofinal(seq: TransfiniteSeq):
    """Least value occurring cofinally; used for limit states."""
    tail = seq.tail
    if isinstance(tail, Constant):
        return tail.value
    if isinstance(tail, Cycle):
        return min(tail.values)
    raise ValueError("a ramp tail has no cofinal value")


def pointwise_limit(seq: TransfiniteSeq):
    """Eventual value of the sequence, or UNDEFINED if it keeps changing."""
    tail = seq.tail
    if isinstance(tail, Constant):
        return tail.value
    if isinstance(tail, Cycle):
        return tail.values[0] if len(tail.values) == 1 else UNDEFINED
    raise ValueError("a ramp tail has no pointwise limit")
