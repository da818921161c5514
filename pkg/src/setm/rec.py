"""Recursive set functions on HF sets: terms, parser and interpreter.

Terms are immutable trees. Each node has a fixed arity, checked when the
node is built:

    Zero                     1
    Proj(n, i)               n
    Adjoin                   2
    Cond                     4
    Comp1(G: n+1, H: m)      m+n   G(H(x1..xm), y1..yn)
    Comp2(G: n+m+1, H: m)    m+n   G(x1..xm, H(x1..xm), y1..yn)
    Recursion(G: n+2)        n+1   F(x, z) = G(U{F(x, u) | u in z}, x, z)
    Mu(G: n+1)               n     least numeral a with G(x, a) = 0
    RandomWoo(G: 2n)         n     G(x1..xn, f1..fn), fi a well ordering of xi

Well orderings are passed to G as sets of Kuratowski pairs (element, numeral).

    >>> t = parse_rec("(adjoin zero zero)")
    >>> format_set(evaluate(t, (EMPTY,)))
    '{{}}'
"""
from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Sequence

from .hfset import (
    EMPTY,
    HFSet,
    Woo,
    format_set,
    hf,
    hf_from_numeral,
    hf_member,
    hf_trcl,
    sample_woo,
)


class EvalError(Exception):
    """Base class for interpreter failures."""


class ArityError(EvalError, ValueError):
    pass


class TierError(EvalError, ValueError):
    pass


class FuelExhausted(EvalError):
    pass


class RecSyntaxError(ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        where = f"{line}:{col}: " if line else ""
        super().__init__(where + message)
        self.line, self.col = line, col


class Tier(IntEnum):
    PREC = 0
    MINREC = 1
    REC = 2

    def __str__(self):
        return {0: "pREC", 1: "minREC", 2: "REC"}[self]

    @classmethod
    def parse(cls, text: str) -> "Tier":
        for t in cls:
            if str(t).lower() == text.strip().lower():
                return t
        raise ValueError(f"unknown tier {text!r} (pREC, minREC or REC)")


# ---------------------------------------------------------------- terms


class RecTerm:
    """Common base. Subclasses set ``arity`` in ``__post_init__``."""

    arity: int

    @property
    def children(self) -> tuple:
        return ()

    @property
    def tier(self) -> Tier:
        return max((c.tier for c in self.children), default=Tier.PREC)

    def __str__(self):
        return format_rec(self)


@dataclass(frozen=True, eq=True)
class Zero(RecTerm):
    arity: int = field(default=1, init=False)


@dataclass(frozen=True)
class Proj(RecTerm):
    n: int
    i: int
    arity: int = field(default=0, init=False)

    def __post_init__(self):
        if not (1 <= self.i <= self.n):
            raise ArityError(f"proj needs 1 <= i <= n, got n={self.n} i={self.i}")
        object.__setattr__(self, "arity", self.n)


@dataclass(frozen=True)
class Adjoin(RecTerm):
    arity: int = field(default=2, init=False)


@dataclass(frozen=True)
class Cond(RecTerm):
    arity: int = field(default=4, init=False)


@dataclass(frozen=True)
class Comp1(RecTerm):
    g: RecTerm
    h: RecTerm
    arity: int = field(default=0, init=False)

    def __post_init__(self):
        if self.g.arity < 1:
            raise ArityError("comp1: G needs at least one argument")
        object.__setattr__(self, "arity", self.g.arity - 1 + self.h.arity)

    @property
    def children(self):
        return (self.g, self.h)


@dataclass(frozen=True)
class Comp2(RecTerm):
    g: RecTerm
    h: RecTerm
    arity: int = field(default=0, init=False)

    def __post_init__(self):
        if self.g.arity < self.h.arity + 1:
            raise ArityError(
                f"comp2: G has arity {self.g.arity}, needs at least {self.h.arity + 1}"
            )
        object.__setattr__(self, "arity", self.g.arity - 1)

    @property
    def children(self):
        return (self.g, self.h)


@dataclass(frozen=True)
class Recursion(RecTerm):
    g: RecTerm
    arity: int = field(default=0, init=False)

    def __post_init__(self):
        if self.g.arity < 2:
            raise ArityError("rec: G needs at least two arguments")
        object.__setattr__(self, "arity", self.g.arity - 1)

    @property
    def children(self):
        return (self.g,)


@dataclass(frozen=True)
class Mu(RecTerm):
    g: RecTerm
    arity: int = field(default=0, init=False)

    def __post_init__(self):
        if self.g.arity < 1:
            raise ArityError("mu: G needs at least one argument")
        object.__setattr__(self, "arity", self.g.arity - 1)

    @property
    def children(self):
        return (self.g,)

    @property
    def tier(self):
        return max(Tier.MINREC, self.g.tier)


@dataclass(frozen=True)
class RandomWoo(RecTerm):
    g: RecTerm
    arity: int = field(default=0, init=False)

    def __post_init__(self):
        if self.g.arity % 2:
            raise ArityError(f"rwoo: G needs an even arity, got {self.g.arity}")
        object.__setattr__(self, "arity", self.g.arity // 2)

    @property
    def children(self):
        return (self.g,)

    @property
    def tier(self):
        return Tier.REC


def apply(g: RecTerm, *hs: RecTerm) -> RecTerm:
    """Substitution g(h1(x), ..., hr(x)) with every hi of the same arity k.

    Lowered to the two composition forms: first pad g with k dummy leading
    arguments, then fill its slots left to right with Comp2.
    """
    if len(hs) != g.arity:
        raise ArityError(f"applying an arity-{g.arity} term to {len(hs)} arguments")
    if not hs:
        raise ArityError("cannot apply a term to zero arguments")
    k = hs[0].arity
    if k < 1 or any(h.arity != k for h in hs):
        raise ArityError(
            "applied terms must share one positive arity, got "
            + ", ".join(str(h.arity) for h in hs)
        )
    out: RecTerm = Comp1(g, Proj(k + 1, k + 1))
    for h in hs:
        out = Comp2(out, h)
    return out


def check_tier(t: RecTerm, tier: Tier) -> None:
    if t.tier > tier:
        raise TierError(f"term needs tier {t.tier}, but only {tier} is allowed")


# ---------------------------------------------------------------- printing


def format_rec(t: RecTerm) -> str:
    if isinstance(t, Zero):
        return "zero"
    if isinstance(t, Proj):
        return f"(proj {t.n} {t.i})"
    if isinstance(t, Adjoin):
        return "adjoin"
    if isinstance(t, Cond):
        return "cond"
    keyword = {Comp1: "comp1", Comp2: "comp2", Recursion: "rec", Mu: "mu", RandomWoo: "rwoo"}
    return "(" + " ".join([keyword[type(t)]] + [format_rec(c) for c in t.children]) + ")"


# ---------------------------------------------------------------- parser

_TOKEN = re.compile(r"\s+|;[^\n]*|\(|\)|[^\s();]+")


@dataclass(frozen=True)
class _Tok:
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list:
    out = []
    line, start = 1, 0
    for m in _TOKEN.finditer(text):
        s = m.group()
        if not s.isspace() and not s.startswith(";"):
            out.append(_Tok(s, line, m.start() - start + 1))
        nl = s.count("\n")
        if nl:
            line += nl
            start = m.start() + s.rindex("\n") + 1
    return out


def _read(tokens: list) -> list:
    """Tokens to nested lists of _Tok; raises on unbalanced parentheses."""
    forms, stack = [], []
    for tok in tokens:
        if tok.text == "(":
            stack.append((tok, []))
        elif tok.text == ")":
            if not stack:
                raise RecSyntaxError("unexpected ')'", tok.line, tok.col)
            opener, items = stack.pop()
            node = (opener, items)
            (stack[-1][1] if stack else forms).append(node)
        else:
            (stack[-1][1] if stack else forms).append(tok)
    if stack:
        tok = stack[-1][0]
        raise RecSyntaxError("unclosed '('", tok.line, tok.col)
    return forms


_ATOMS = {"zero": Zero, "adjoin": Adjoin, "cond": Cond}
_UNARY = {"rec": Recursion, "mu": Mu, "rwoo": RandomWoo}
_KEYWORDS = set(_ATOMS) | set(_UNARY) | {"proj", "comp1", "comp2", "def"}


def _where(form):
    tok = form[0] if isinstance(form, tuple) else form
    return tok.line, tok.col


def _build(form, env: dict) -> RecTerm:
    try:
        return _build_inner(form, env)
    except ArityError as exc:
        if getattr(exc, "_located", False):
            raise
        err = RecSyntaxError(str(exc), *_where(form))
        err._located = True
        raise err from None


def _build_inner(form, env: dict) -> RecTerm:
    if isinstance(form, _Tok):
        name = form.text
        if name in _ATOMS:
            return _ATOMS[name]()
        if name in env:
            return env[name]
        raise RecSyntaxError(f"unknown name {name!r}", form.line, form.col)
    opener, items = form
    if not items:
        raise RecSyntaxError("empty form", opener.line, opener.col)
    head = items[0]
    args = items[1:]
    if isinstance(head, _Tok) and head.text == "proj":
        if len(args) != 2 or not all(isinstance(a, _Tok) and a.text.isdigit() for a in args):
            raise RecSyntaxError("expected (proj n i) with decimal n and i", opener.line, opener.col)
        return Proj(int(args[0].text), int(args[1].text))
    if isinstance(head, _Tok) and head.text in ("comp1", "comp2"):
        if len(args) != 2:
            raise RecSyntaxError(f"{head.text} takes two terms", opener.line, opener.col)
        cls = Comp1 if head.text == "comp1" else Comp2
        return cls(_build(args[0], env), _build(args[1], env))
    if isinstance(head, _Tok) and head.text in _UNARY:
        if len(args) != 1:
            raise RecSyntaxError(f"{head.text} takes one term", opener.line, opener.col)
        return _UNARY[head.text](_build(args[0], env))
    if isinstance(head, _Tok) and head.text == "def":
        raise RecSyntaxError("def is only allowed at top level", opener.line, opener.col)
    g = _build(head, env)
    if not args:
        return g
    return apply(g, *(_build(a, env) for a in args))


def parse_rec(text: str, tier: Tier = Tier.REC, env: dict | None = None) -> RecTerm:
    """Parse a term file: any number of ``(def name term)`` then one term.

    With no trailing term, the definition named ``main`` (or else the last
    definition) is the result. ``(t a1 ... ar)`` for a term t of arity r is
    the substitution t(a1, ..., ar); the ai must share one arity.
    """
    names = dict(env or {})
    forms = _read(_tokenize(text))
    result = None
    last_def = None
    for form in forms:
        if isinstance(form, tuple) and form[1] and isinstance(form[1][0], _Tok) and form[1][0].text == "def":
            opener, items = form
            if len(items) != 3 or not isinstance(items[1], _Tok):
                raise RecSyntaxError("expected (def name term)", opener.line, opener.col)
            name = items[1].text
            if name in _KEYWORDS or name.isdigit():
                raise RecSyntaxError(f"cannot redefine {name!r}", items[1].line, items[1].col)
            names[name] = last_def = _build(items[2], names)
            continue
        if result is not None:
            line, col = _where(form)
            raise RecSyntaxError("more than one top-level term", line, col)
        result = _build(form, names)
    if result is None:
        result = names.get("main", last_def)
    if result is None:
        raise RecSyntaxError("no term found")
    check_tier(result, tier)
    return result


# ---------------------------------------------------------------- evaluation

WOO_MODES = ("elements", "trcl")


@dataclass(frozen=True)
class EvalEnv:
    """Seed for the well-ordering chooser, a step budget and the tier."""

    seed: int = 0
    fuel: int = 10**6
    tier: Tier = Tier.REC
    woo_mode: str = "elements"

    def __post_init__(self):
        if self.fuel < 1:
            raise ValueError("fuel must be at least 1")
        if self.woo_mode not in WOO_MODES:
            raise ValueError(f"woo mode must be one of {WOO_MODES}")

    def woo(self, x: HFSet) -> Woo:
        subject = hf_trcl(x) if self.woo_mode == "trcl" else x
        return sample_woo(subject, self.seed)


@dataclass
class _Run:
    env: EvalEnv
    fuel: int
    memo: dict = field(default_factory=dict)
    mu_log: list = field(default_factory=list)

    def tick(self):
        self.fuel -= 1
        if self.fuel < 0:
            raise FuelExhausted(f"fuel {self.env.fuel} exhausted")


def evaluate(t: RecTerm, args: Sequence[HFSet], env: EvalEnv | None = None) -> HFSet:
    """Value of t at args; raises EvalError subclasses."""
    env = env or EvalEnv()
    check_tier(t, env.tier)
    args = tuple(args)
    if len(args) != t.arity:
        raise ArityError(f"term has arity {t.arity}, got {len(args)} arguments")
    return _eval(t, args, _Run(env, env.fuel))


def evaluate_traced(t: RecTerm, args: Sequence[HFSet], env: EvalEnv | None = None):
    """Like ``evaluate`` but also returns every Mu search as
    (term, args, result) triples, for post-hoc checks."""
    env = env or EvalEnv()
    check_tier(t, env.tier)
    args = tuple(args)
    if len(args) != t.arity:
        raise ArityError(f"term has arity {t.arity}, got {len(args)} arguments")
    run = _Run(env, env.fuel)
    return _eval(t, args, run), run.mu_log


def _eval(t: RecTerm, args: tuple, run: _Run) -> HFSet:
    key = (id(t), args)
    hit = run.memo.get(key)
    if hit is not None:
        return hit
    run.tick()
    if isinstance(t, Zero):
        out = EMPTY
    elif isinstance(t, Proj):
        out = args[t.i - 1]
    elif isinstance(t, Adjoin):
        x, y = args
        out = HFSet(x.elements + (y,))
    elif isinstance(t, Cond):
        x, y, u, v = args
        out = u if hf_member(x, y) else v
    elif isinstance(t, Comp1):
        m = t.h.arity
        out = _eval(t.g, (_eval(t.h, args[:m], run),) + args[m:], run)
    elif isinstance(t, Comp2):
        m = t.h.arity
        out = _eval(t.g, args[:m] + (_eval(t.h, args[:m], run),) + args[m:], run)
    elif isinstance(t, Recursion):
        *xs, z = args
        xs = tuple(xs)
        s = HFSet(e for u in z.elements for e in _eval(t, xs + (u,), run).elements)
        out = _eval(t.g, (s,) + args, run)
    elif isinstance(t, Mu):
        alpha = 0
        while True:
            a = hf_from_numeral(alpha)
            if _eval(t.g, args + (a,), run) is EMPTY:
                break
            alpha += 1
        out = a
        run.mu_log.append((t, args, out))
    elif isinstance(t, RandomWoo):
        fs = tuple(run.env.woo(x).as_set() for x in args)
        out = _eval(t.g, args + fs, run)
    else:
        raise TypeError(f"not a term: {t!r}")
    run.memo[key] = out
    return out


# ---------------------------------------------------------------- invariance


@dataclass(frozen=True)
class InvarianceVerdict:
    invariant: bool
    trials: int
    outputs: tuple  # (woo tuple as sets, output) per trial

    def __bool__(self):
        return self.invariant


def woo_tuples(args: Sequence[HFSet], trials: int, mode: str = "elements"):
    """Up to ``trials`` distinct tuples of well orderings of the arguments."""
    subjects = [hf_trcl(x) if mode == "trcl" else x for x in args]
    total = math.prod(math.factorial(len(s)) for s in subjects)
    want = min(trials, total)
    seen, out = set(), []
    for seed in itertools.count():
        if len(out) >= want or seed > 50 * want + 100:
            break
        tup = tuple(sample_woo(s, seed) for s in subjects)
        key = tuple(w.order for w in tup)
        if key not in seen:
            seen.add(key)
            out.append(tup)
    if len(out) < want:
        # small factorials: fall back to exhaustive enumeration
        for perms in itertools.product(*(itertools.permutations(s.elements) for s in subjects)):
            if len(out) >= want:
                break
            if perms not in seen:
                seen.add(perms)
                out.append(tuple(Woo(s, p) for s, p in zip(subjects, perms)))
    return out


def check_woo_invariance(g: RecTerm, args: Sequence[HFSet], trials: int,
                         env: EvalEnv | None = None) -> InvarianceVerdict:
    """Sample G(x, f) over distinct well orderings f; invariant iff all equal."""
    env = env or EvalEnv()
    args = tuple(args)
    if g.arity != 2 * len(args):
        raise ArityError(f"G must have arity {2 * len(args)}, has {g.arity}")
    outputs = []
    for tup in woo_tuples(args, trials, env.woo_mode):
        fs = tuple(w.as_set() for w in tup)
        outputs.append((fs, evaluate(g, args + fs, env)))
    values = {o for _, o in outputs}
    return InvarianceVerdict(len(values) <= 1, len(outputs), tuple(outputs))


# ---------------------------------------------------------------- derived terms


def _p(n, i):
    return Proj(n, i)


def _const(value_term: RecTerm, k: int) -> RecTerm:
    """A closed unary term made k-ary by ignoring all arguments but the first."""
    return apply(value_term, _p(k, 1))


def _derived_terms() -> dict:
    zero, adj, cond = Zero(), Adjoin(), Cond()
    singleton = apply(adj, apply(zero, _p(1, 1)), _p(1, 1))
    upair = apply(adj, apply(adj, apply(zero, _p(2, 1)), _p(2, 1)), _p(2, 2))
    vn_succ = apply(adj, _p(1, 1), _p(1, 1))
    one1 = apply(adj, zero, zero)  # x -> {0}
    char_in = apply(cond, _p(2, 1), _p(2, 2), _const(one1, 2), _const(zero, 2))
    # T(p, u) = s if u in p else s + {u}, where s = U{T(p, w) | w in u};
    # with p = {z} this is trcl(z) at the top and trcl({u}) below it
    step = apply(cond, _p(3, 3), _p(3, 2), _p(3, 1), apply(adj, _p(3, 1), _p(3, 3)))
    trcl = apply(Recursion(step), singleton, _p(1, 1))
    not_in = apply(cond, _p(2, 2), _p(2, 1), _const(one1, 2), _const(zero, 2))
    least_not_in = Mu(not_in)
    return {
        "singleton": singleton,
        "upair": upair,
        "vn_succ": vn_succ,
        "char_in": char_in,
        "trcl": trcl,
        "least_not_in": least_not_in,
    }


DERIVED = _derived_terms()
DERIVED_NAMES = tuple(DERIVED)


def derived(name: str) -> RecTerm:
    try:
        return DERIVED[name]
    except KeyError:
        raise ValueError(f"unknown derived term {name!r}; one of {', '.join(DERIVED)}") from None


def derived_env() -> dict:
    """Name bindings for parse_rec so term files can use the derived terms."""
    return dict(DERIVED)


__all__ = [
    "Adjoin", "ArityError", "Comp1", "Comp2", "Cond", "DERIVED_NAMES", "EvalEnv",
    "EvalError", "FuelExhausted", "InvarianceVerdict", "Mu", "Proj", "RandomWoo",
    "RecSyntaxError", "RecTerm", "Recursion", "Tier", "TierError", "Zero", "apply",
    "check_tier", "check_woo_invariance", "derived", "derived_env", "evaluate",
    "evaluate_traced", "format_rec", "format_set", "hf", "parse_rec", "woo_tuples",
]
