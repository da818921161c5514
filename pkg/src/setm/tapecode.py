"""Tape markings, basic codes, and the maps between codes and HF sets.

A marking is a plain ``dict`` from ``Address`` (component, path) to a
non-blank ``Mark``. A basic code is a set of paths that is closed under
prefixes and has no gaps between sibling indices.

Besides the production encoder/decoder this module keeps two staged
constructions (``decode_oracle_g`` and ``encode_oracle_f``) that build the same
objects by iterating to a fixpoint; they serve as independent oracles.
"""
from __future__ import annotations

from enum import IntEnum
from typing import Iterable, Mapping, Sequence

from .hfset import EMPTY, Chooser, HFSet, hf_trcl, hf, seeded_chooser
from .ordinal import (
    Address,
    format_path,
    is_strict_initial_segment,
    lex_compare,
    parse_path,
)
from functools import cmp_to_key


class Mark(IntEnum):
    BLANK = 0
    ONE = 1
    TWO = 2
    THREE = 3
    FOUR = 4
    BLANK_STAR = 5
    ONE_STAR = 6
    TWO_STAR = 7
    THREE_STAR = 8
    FOUR_STAR = 9
    DELIM = 10
    END = 11

    def __str__(self):
        return MARK_TEXT[self]

    @property
    def starred(self) -> "Mark":
        if 0 <= self <= 4:
            return Mark(self + 5)
        raise ValueError(f"{self} has no raised-star form")

    @property
    def unstarred(self) -> "Mark":
        if 5 <= self <= 9:
            return Mark(self - 5)
        raise ValueError(f"{self} is not a raised-star mark")

    @property
    def is_starred(self) -> bool:
        return 5 <= self <= 9


MARK_TEXT = {
    Mark.BLANK: "0", Mark.ONE: "1", Mark.TWO: "2", Mark.THREE: "3", Mark.FOUR: "4",
    Mark.BLANK_STAR: "0*", Mark.ONE_STAR: "1*", Mark.TWO_STAR: "2*",
    Mark.THREE_STAR: "3*", Mark.FOUR_STAR: "4*", Mark.DELIM: "*", Mark.END: "**",
}
TEXT_MARK = {v: k for k, v in MARK_TEXT.items()}
NUM_MARKS = len(Mark)


def parse_mark(text: str) -> Mark:
    try:
        return TEXT_MARK[text.strip()]
    except KeyError:
        raise ValueError(f"unknown mark {text!r}") from None


Marking = dict  # Address -> Mark, blanks omitted


def clean(marking: Mapping) -> dict:
    """Copy a marking, dropping blank cells and normalizing keys and marks."""
    return {Address(a[0], tuple(a[1])): Mark(m) for a, m in marking.items() if m}


def component_paths(marking: Mapping, k: int) -> frozenset:
    return frozenset(a[1] for a, m in marking.items() if m and a[0] == k)


def num_components(marking: Mapping) -> int:
    """Least n with every non-blank cell in a component below n."""
    return 1 + max((a[0] for a, m in marking.items() if m), default=-1)


# ---------------------------------------------------------------- basic codes


def _child_index(path):
    return path[-1]


def is_basic_code(paths: Iterable[Sequence]) -> bool:
    S = {tuple(p) for p in paths}
    if () not in S:
        return False
    for p in S:
        if not p:
            continue
        if p[:-1] not in S:
            return False
        last = p[-1]
        # no gaps: the predecessor sibling must be present; limit indices
        # always leave a gap because a basic code is finite
        if isinstance(last, int):
            if last > 0 and p[:-1] + (last - 1,) not in S:
                return False
        else:
            return False
    return True


def is_well_formed(marking: Mapping) -> bool:
    n = num_components(marking)
    return all(is_basic_code(component_paths(marking, k)) for k in range(n))


def children(paths: frozenset, p: tuple) -> list:
    out = []
    i = 0
    while p + (i,) in paths:
        out.append(p + (i,))
        i += 1
    return out


def _require_code(paths) -> frozenset:
    S = frozenset(tuple(p) for p in paths)
    if not is_basic_code(S):
        raise ValueError("not a basic code")
    return S


def node_rank(paths: Iterable[Sequence], p: Sequence = ()) -> int:
    S = _require_code(paths)
    p = tuple(p)
    if p not in S:
        raise ValueError(f"{format_path(p)} is not in the code")
    memo: dict = {}

    def rank(q):
        if q not in memo:
            kids = children(S, q)
            memo[q] = 1 + max(rank(c) for c in kids) if kids else 0
        return memo[q]

    return rank(p)


def marking_rank(marking: Mapping) -> int:
    n = num_components(marking)
    return max((node_rank(component_paths(marking, k)) for k in range(n)), default=0)


def decode_basic(paths: Iterable[Sequence]) -> HFSet:
    S = _require_code(paths)
    return _decode_at(S, ())


def _decode_at(S: frozenset, root: tuple) -> HFSet:
    memo: dict = {}
    # iterative post-order keeps deep codes off the recursion limit
    stack = [(root, False)]
    while stack:
        q, done = stack.pop()
        if q in memo:
            continue
        kids = children(S, q)
        if done or not kids:
            memo[q] = HFSet(memo[c] for c in kids)
        else:
            stack.append((q, True))
            stack.extend((c, False) for c in kids)
    return memo[root]


def decode_marking(marking: Mapping) -> tuple:
    """Decode every component of a well-formed marking."""
    if not is_well_formed(marking):
        raise ValueError("marking is not well formed")
    return tuple(decode_basic(component_paths(marking, k)) for k in range(num_components(marking)))


def induced(marking: Mapping, eta: Address) -> dict:
    """Component-0 marking seen from eta: path p carries X at eta + p."""
    comp, base = eta[0], tuple(eta[1])
    n = len(base)
    return {
        Address(0, a[1][n:]): m
        for a, m in marking.items()
        if m and a[0] == comp and a[1][:n] == base
    }


def decode_oracle_g(paths: Iterable[Sequence]) -> HFSet:
    """Decode by the staged construction: leaves get the empty set at stage
    0; at each later stage every unassigned node whose extensions are all
    assigned gets the set of its children's values; stop at the fixpoint.
    """
    S = _require_code(paths)
    assigned = {p: EMPTY for p in S if not any(is_strict_initial_segment(p, q) for q in S)}
    while True:
        stage = {}
        for p in S:
            if p in assigned:
                continue
            below = [q for q in S if is_strict_initial_segment(p, q)]
            if all(q in assigned for q in below):
                stage[p] = HFSet(assigned[q] for q in below if len(q) == len(p) + 1)
        if not stage:
            break
        assigned.update(stage)
    return assigned[()]


# ---------------------------------------------------------------- encoders


def encode_tree(x: HFSet, chooser: Chooser | None = None) -> frozenset:
    """Unfold x into a basic code; children follow the chooser's order."""
    chooser = chooser or seeded_chooser(0)
    out = set()
    stack = [(x, ())]
    while stack:
        v, p = stack.pop()
        out.add(p)
        for i, e in enumerate(chooser(v).order):
            stack.append((e, p + (i,)))
    return frozenset(out)


def code_marking(codes: Sequence[Iterable[Sequence]], mark: Mark = Mark.ONE) -> dict:
    """Marking with code i in component i, every support cell marked ``mark``."""
    return {Address(k, tuple(p)): mark for k, code in enumerate(codes) for p in code}


def encode_args(args: Sequence[HFSet], chooser: Chooser | None = None) -> dict:
    return code_marking([encode_tree(x, chooser) for x in args])


def encode_oracle_f(x: HFSet, order: Sequence[HFSet]) -> frozenset:
    """Staged path assignment over trcl({x}).

    ``order`` enumerates trcl({x}). Each stage places the least (in that
    order) unplaced element reachable by a membership chain through placed
    elements, under its least placed parent, at the first free child index.
    Every element is placed exactly once, so the result need not decode to x
    when an element has several parents. Returns (element, path) pairs.
    """
    closure = hf_trcl(hf(x))
    order = tuple(order)
    if set(order) != set(closure.elements) or len(order) != len(closure):
        raise ValueError("order must enumerate trcl({x}) without repetition")
    pos = {e: i for i, e in enumerate(order)}
    path_of = {x: ()}
    used = {()}
    while True:
        candidates = [
            u for u in order
            if u not in path_of and any(u in p.elements for p in path_of)
        ]
        if not candidates:
            break
        u = candidates[0]
        parent = min((p for p in path_of if u in p.elements), key=pos.__getitem__)
        base = path_of[parent]
        gamma = 0
        while base + (gamma,) in used:
            gamma += 1
        path_of[u] = base + (gamma,)
        used.add(base + (gamma,))
    return frozenset(path_of.items())


# ---------------------------------------------------------------- comparisons


def code_equiv(s1: Iterable[Sequence], s2: Iterable[Sequence]) -> bool:
    """Tree isomorphism of two basic codes (children as a multiset)."""
    a, b = _require_code(s1), _require_code(s2)

    def shape(S, p):
        return tuple(sorted(shape(S, c) for c in children(S, p)))

    return shape(a, ()) == shape(b, ())


def is_canonical(marking: Mapping) -> bool:
    """Nodes with equal decoded value carry literally equal submarkings."""
    if not is_well_formed(marking):
        raise ValueError("marking is not well formed")
    groups: dict = {}
    for k in range(num_components(marking)):
        S = component_paths(marking, k)
        for p in S:
            value = _decode_at(S, p)
            sub = induced(marking, Address(k, p))
            groups.setdefault(value, []).append(sub)
    return all(all(s == subs[0] for s in subs[1:]) for subs in groups.values())


def sorted_paths(paths: Iterable[Sequence]) -> list:
    return sorted((tuple(p) for p in paths), key=cmp_to_key(lex_compare))


# ---------------------------------------------------------------- text format


def parse_code_text(text: str) -> dict:
    """Lines ``n:[path] = mark`` (component prefix and mark optional)."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        lhs, _, rhs = line.partition("=")
        lhs = lhs.strip()
        try:
            if lhs.startswith("["):
                comp, path = 0, parse_path(lhs)
            else:
                c, sep, rest = lhs.partition(":")
                if not sep:
                    raise ValueError("expected '[path]' or 'n:[path]'")
                comp, path = int(c), parse_path(rest)
            mark = parse_mark(rhs) if rhs.strip() else Mark.ONE
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
        if mark:
            out[Address(comp, path)] = mark
    return out


def format_code_text(marking: Mapping) -> str:
    def key(a):
        return (a[0], cmp_to_key(lex_compare)(a[1]))

    lines = []
    for a in sorted(clean(marking), key=key):
        m = Mark(marking[a])
        suffix = "" if m == Mark.ONE else f" = {m}"
        lines.append(f"{a[0]}:{format_path(a[1])}{suffix}")
    return "\n".join(lines) + ("\n" if lines else "")
