"""Compile recursive set function terms to set Turing machines.

Every compiled machine follows the stdlib calling convention: the k inputs
sit in components 0..k-1, all other components are blank, the head starts
and halts on the 0-root, and on halting the output code (marks 1 only) is in
component 0 with everything else blank.

Recursion is compiled by adorning the code Z of the recursion argument:
every node eta of Z receives, below the storage node (the first blank child
slot of eta), a code of F(x, Z_eta). Adorned data nodes are marked 2,
storage subtrees 3, so the child indices of Z never change. A sweep adorns
each node whose children were all adorned before it started; sweeps repeat
until the root is adorned.
"""
from __future__ import annotations

import itertools
import json
import time
from dataclasses import asdict, dataclass, field
from typing import Iterable, Mapping, Sequence

from . import asm as A
from . import stdlib as S
from .asm import HALT, L_C, Asm, Cursor
from .hfset import HFSet, enumerate_universe, format_set, seeded_chooser
from .machine import Crashed, FuelExhausted as MachineFuel, Halted, MachineTable, describe_outcome, run
from .ordinal import Address
from .rec import (
    Adjoin,
    Comp1,
    Comp2,
    Cond,
    EvalEnv,
    EvalError,
    Mu,
    Proj,
    RandomWoo,
    RecTerm,
    Recursion,
    Zero,
    evaluate,
    format_rec,
)
from .tapecode import Mark, children, component_paths, decode_marking, encode_args, encode_tree

ADORNED = 2
STORED = 3


# ---------------------------------------------------------------- plumbing

_LIBRARY: dict = {}


def _lib(name: str) -> MachineTable:
    """Shared stdlib machines; embedding copies them, so sharing is safe."""
    if name not in _LIBRARY:
        _LIBRARY[name] = S.catalogue()[name]()
    return _LIBRARY[name]


def _identity() -> MachineTable:
    asm = Asm("id")
    return asm.table(asm.state({A.ALL: (None, "s", HALT)}, "id"))


def _arrange(asm: Asm, moves: Sequence[tuple], nxt: str, at: int = 0) -> str:
    """Move components src -> dst (each dst blank when its turn comes);
    from and to the root of ``at``."""
    pending = [(s, d) for s, d in moves if s != d]
    order = []
    while pending:
        sources = {s for s, _ in pending}
        for k, (s, d) in enumerate(pending):
            if d not in sources:
                order.append(pending.pop(k))
                break
        else:
            raise ValueError(f"cyclic component arrangement {pending}")
    entry = nxt
    pos = at
    hops = []
    for s, d in order:
        hops.append((pos, s, d))
        pos = s
    entry = A.goto(asm, pos, at, nxt)
    for frm, s, d in reversed(hops):
        entry = A.goto(asm, frm, s, A.move_comp(asm, s, d, entry))
    return entry


def _copy_block(asm: Asm, srcs: Sequence[int], dsts: Sequence[int], nxt: str, at: int = 0) -> str:
    """Aligned copies srcs[i] -> dsts[i]; from and to the root of ``at``."""
    pos = at
    hops = []
    for s, d in zip(srcs, dsts):
        hops.append((pos, s, d))
        pos = s
    entry = A.goto(asm, pos, at, nxt)
    for frm, s, d in reversed(hops):
        entry = A.goto(asm, frm, s, A.copy_comp(asm, s, d, entry))
    return entry


def _width(asm: Asm, *tables_at: tuple) -> int:
    return max([asm.width] + [base + t.width for base, t in tables_at])


# ---------------------------------------------------------------- initial functions


def compile_zero() -> MachineTable:
    asm = Asm("zero")
    return asm.table(A.erase_comp(asm, 0, S.write_bool(asm, False, HALT)))


def compile_proj(n: int, i: int) -> MachineTable:
    if not 1 <= i <= n:
        raise ValueError("projection index out of range")
    if n == 1:
        return _identity()
    asm = Asm(f"proj{n}_{i}")
    keep = i - 1
    others = [c for c in range(n) if c != keep]
    if keep == 0:
        start = S.erase_all(asm, others, HALT)
    else:
        start = S.erase_all(asm, others, _arrange(asm, [(keep, 0)], HALT))
    return asm.table(start, width=n)


def compile_adjoin() -> MachineTable:
    return _lib("adjoin")


def compile_cond() -> MachineTable:
    """u if x in y else v, deciding membership on copies in components 4, 5."""
    asm = Asm("cond")
    decide = _lib("decide_member")

    def pick(keep: int, drop: int) -> str:
        rest = S.erase_all(asm, (0, 1, drop), _arrange(asm, [(keep, 0)], HALT))
        return A.goto(asm, 4, 0, rest)

    branch = S.read_bool(asm, pick(3, 2), pick(2, 3))
    test = S.call(asm, decide, 4, A.goto(asm, 0, 4, branch))
    start = _copy_block(asm, (0, 1), (4, 5), test)
    return asm.table(start, width=_width(asm, (4, decide)))


# ---------------------------------------------------------------- composition


def compile_comp(g: MachineTable, h: MachineTable, m: int, n: int, second: bool) -> MachineTable:
    """G(H(x), y) or G(x, H(x), y) for x of length m and y of length n."""
    asm = Asm("comp2" if second else "comp1")
    base = m + n + 1
    run_g = asm.embed(g, HALT)
    if second:
        moves = [(m + j, m + 1 + j) for j in range(n)] + [(base, m)]
        after_h = _arrange(asm, moves, run_g)
    else:
        moves = [(m + j, 1 + j) for j in range(n)] + [(base, 0)]
        after_h = S.erase_all(asm, range(m), _arrange(asm, moves, run_g))
    call_h = S.call(asm, h, base, after_h)
    start = _copy_block(asm, range(m), range(base, base + m), call_h)
    return asm.table(start, width=_width(asm, (0, g), (base, h)))


# ---------------------------------------------------------------- recursion


@dataclass(frozen=True)
class _RecLayout:
    """Components used by the recursion machines for n parameters."""

    n: int

    @property
    def z(self):
        return self.n

    @property
    def w(self):
        return self.n + 1

    @property
    def P(self):
        return Cursor(self.z, self.n + 2)

    @property
    def Q(self):
        return Cursor(self.z, self.n + 3)

    @property
    def lt(self):
        return self.n + 4

    @property
    def base(self):
        return self.n + 5


def _kernel(asm: Asm, lay: _RecLayout, g: MachineTable, after: str) -> str:
    """At P's cursor on an unadorned node eta whose children are adorned:
    store G(union of child adornments, x, Z_eta) at eta's storage node, mark
    eta adorned, continue in ``after`` at P's cursor."""
    P, Q, n, b = lay.P, lay.Q, lay.n, lay.base
    T = Cursor(lay.w, lay.lt)
    V = Cursor(b + n + 1, lay.lt)
    U = Cursor(b, lay.lt)

    # phase 3: storage node of eta gets G's output (marked 3); then mark eta
    mark_eta = A.descend(asm, A.keep(asm.state({1: (ADORNED, P.from_data, after)}, "ka"), P.to_data))
    erase_out = A.goto(asm, Q.layer, b, A.erase_comp(asm, b, A.goto(asm, b, P.layer, mark_eta)))
    clear_q = asm.chain(A.jmoves(lay.lt, Q.layer), A.descend(asm, A.op_clear(asm, erase_out)))
    stored = asm.state(A.op_clear(asm, clear_q), "k3")
    copy_out = A.region_copy(asm, U, Q, stored, root_write=STORED, write=STORED)
    slot = A.find_blank_child(asm, Q, A.commute(asm, Q, U, A.keep(copy_out)))
    set_u = A.set_root_cursor(asm, U, A.commute(asm, U, Q, A.keep(slot)))
    to_storage = A.descend(asm, A.clone(asm, P, Q, set_u, A.jmoves(Q.layer, lay.lt)))

    # phase 2: G's inputs at b..b+n+1, then G
    run_g = S.call(asm, g, b, A.goto(asm, 0, P.layer, to_storage))
    params = _copy_block(asm, range(n), range(b + 1, b + 1 + n), run_g)
    move_w = A.goto(asm, lay.lt, lay.w, A.move_comp(asm, lay.w, b, A.goto(asm, lay.w, 0, params)))
    clear_v = asm.chain(A.jmoves(Q.layer, lay.lt), A.descend(asm, A.op_clear(asm, move_w)))
    copied_z = asm.state(A.op_clear(asm, clear_v), "k2")
    copy_z = A.region_copy(asm, Q, V, copied_z, root_write=1, write=1, skip=(STORED,))
    set_v = A.set_root_cursor(asm, V, A.commute(asm, V, Q, A.keep(copy_z)))
    union_done = A.commute(asm, Q, T, A.op_clear(asm, set_v))

    # phase 1: union of the children's adornments into W, via Q and T
    read_child = asm.label("kc")  # data cell of a child of eta
    read_grand = asm.label("kg")  # data cell of a child of a storage node
    next_child = asm.state(A.op_next(asm, read_child, Q.to_data), "kn")
    up_to_child = asm.state(A.op_root_up(asm, next_child), "ku")
    up_to_storage = asm.state(A.op_root_up(asm, up_to_child), "ku")
    next_grand = asm.state(A.op_next(asm, read_grand, Q.to_data), "kx")
    back_q = A.commute(asm, T, Q, A.keep(next_grand))
    copied = A.commute(asm, Q, T, A.op_root_up(asm, back_q))
    copy_g = A.region_copy(asm, Q, T, copied, root_write=1, write=1)
    to_t = A.commute(asm, Q, T, A.keep(A.find_blank_child(asm, T, A.commute(asm, T, Q, A.keep(copy_g)))))
    asm.add_cases(read_grand, {STORED: (None, Q.from_data, to_t), 0: (None, Q.from_data, up_to_storage)})
    read_storage = asm.label("ks")
    into_grand = asm.state(A.op_root_down(asm, read_grand, Q.to_data), "kd")
    asm.add_cases(read_storage, {
        (1, ADORNED): (None, Q.from_data, asm.state(A.op_next(asm, read_storage, Q.to_data), "kt")),
        STORED: (None, Q.from_data, into_grand),
    })
    into_child = asm.state(A.op_root_down(asm, read_storage, Q.to_data), "kd")
    asm.add_cases(read_child, {
        ADORNED: (None, Q.from_data, into_child),
        (0, STORED): (None, Q.from_data, asm.state(A.op_root_up(asm, union_done), "ke")),
    })
    first_child = asm.state(A.op_root_down(asm, read_child, Q.to_data), "kf")
    w_root = asm.state({0: (1, T.from_data, A.commute(asm, T, Q, A.keep(first_child)))}, "kw")
    set_t = A.set_root_cursor(asm, T, w_root, T.to_data)
    return asm.state(A.clone(asm, P, Q, set_t, A.jmoves(Q.layer, lay.lt)), "k0")


def _sweep(lay: _RecLayout, g: MachineTable) -> MachineTable:
    """One local recursion sweep over Z in component n."""
    asm = Asm("rec_sweep")
    P = lay.P
    home = A.goto(asm, P.layer, 0, HALT)
    done = asm.state(A.op_clear(asm, home), "sd")
    rd, ck = asm.label("sr"), asm.label("sc")
    # the region root is the layer root, so clearing it there clears the layer
    after = asm.state({L_C: A.op_next(asm, rd, P.to_data)[L_C],
                       A.rooted(A.L_RC): (0, (), home)}, "sa")
    kernel = _kernel(asm, lay, g, after)
    candidate = asm.state(A.op_down(asm, ck, P.to_data), "sk")
    asm.add_cases(rd, {
        1: (None, P.from_data, candidate),
        ADORNED: (None, P.from_data, asm.state(A.op_next(asm, rd, P.to_data), "sn")),
        (0, STORED): (None, P.from_data, asm.state(A.op_up_next(asm, rd, done, P.to_data), "su")),
    })
    asm.add_cases(ck, {
        1: (None, P.from_data, candidate),
        ADORNED: (None, P.from_data, asm.state(A.op_next(asm, ck, P.to_data), "sm")),
        (0, STORED): (None, P.from_data, asm.state(A.op_up(asm, kernel, kernel), "sp")),
    })
    root = asm.state({1: (None, P.from_data, candidate), (ADORNED,): (None, P.from_data, done)}, "s0")
    start = A.goto(asm, 0, P.layer, A.set_root_cursor(asm, P, asm.chain(P.to_data, root)))
    return asm.table(start, width=_width(asm, (lay.base, g)))


def _root_unadorned(n: int) -> MachineTable:
    """Boolean test on (x, Z*): 1 while the root of Z* is not adorned."""
    asm = Asm("rec_test")
    comps = range(n + 1)
    yes = S.erase_all(asm, comps, S.write_bool(asm, True, HALT))
    no = S.erase_all(asm, comps, S.write_bool(asm, False, HALT))
    check = asm.state({ADORNED: (None, A.jmoves(n, 0), no),
                       tuple(m for m in A.DATA if m != ADORNED): (None, A.jmoves(n, 0), yes)}, "rt")
    return asm.table(A.goto(asm, 0, n, check), width=n + 1)


def _extract(lay: _RecLayout) -> MachineTable:
    """(x, Z*) with the root adorned to the stored root value."""
    asm = Asm("rec_out")
    Q, T = lay.Q, Cursor(lay.w, lay.lt)
    finish = S.erase_all(asm, range(lay.n + 1), _arrange(asm, [(lay.w, 0)], HALT))
    clear_t = A.goto(asm, lay.lt, 0, finish)
    clear_q = asm.chain(A.jmoves(Q.layer, lay.lt), A.descend(asm, A.op_clear(asm, clear_t)))
    copied = asm.state(A.op_clear(asm, clear_q), "xc")
    copy = A.region_copy(asm, Q, T, copied, root_write=1, write=1)
    set_t = A.set_root_cursor(asm, T, A.commute(asm, T, Q, A.keep(copy)))
    found = A.climb(asm, {(6, 7, 8, 9): (None, A.jmoves(Q.layer, lay.lt), set_t)})
    scan = asm.label("xs")
    asm.add_cases(scan, {
        (1, ADORNED): (None, Q.from_data, asm.state(A.op_next(asm, scan, Q.to_data), "xn")),
        STORED: (None, Q.from_data, found),
    })
    start = A.goto(asm, 0, Q.layer, A.set_root_cursor(asm, Q, asm.state(A.op_root_down(asm, scan, Q.to_data), "x0")))
    return asm.table(start, width=lay.lt + 1)


def compile_recursion_kernel(g: MachineTable, n: int) -> MachineTable:
    """On (x1..xn, Z*) whose root children are all adorned: adorn the root."""
    lay = _RecLayout(n)
    asm = Asm("rec_kernel")
    P = lay.P
    home = A.goto(asm, P.layer, 0, HALT)
    after = asm.state(A.op_clear(asm, home), "kh")
    kernel = _kernel(asm, lay, g, after)
    start = A.goto(asm, 0, P.layer, A.set_root_cursor(asm, P, kernel))
    return asm.table(start, width=_width(asm, (lay.base, g)))


def compile_recursion_sweep(g: MachineTable, n: int) -> MachineTable:
    return _sweep(_RecLayout(n), g)


def recursion_loop(g: MachineTable, n: int) -> tuple:
    """(body, test) of the sweep loop on (x_1..x_n, z)."""
    return _sweep(_RecLayout(n), g), _root_unadorned(n)


def compile_recursion(g: MachineTable, n: int) -> MachineTable:
    lay = _RecLayout(n)
    loop = S.while_loop(*recursion_loop(g, n), n + 1)
    table = S.compose(loop, _extract(lay))
    table.name = "rec"
    return table


# ---------------------------------------------------------------- mu


def _mu_test(g: MachineTable, n: int) -> MachineTable:
    """Boolean on (x, a): 1 while G(x, a) is not the empty set."""
    asm = Asm("mu_test")
    decide = _lib("decide_equal")
    flip = S.read_bool(asm, S.write_bool(asm, True, HALT), S.write_bool(asm, False, HALT))
    run_decide = asm.embed(decide, flip)
    zero_c = A.goto(asm, 0, 1, S.write_bool(asm, False, A.goto(asm, 1, 0, run_decide)))
    start = asm.embed(g, zero_c)
    return asm.table(start, width=max(g.width, decide.width, 2))


def mu_loop(g: MachineTable, n: int) -> tuple:
    """(body, test) of the search loop on (x_1..x_n, a_C)."""
    succ = _lib("succ")
    step_asm = Asm("mu_step")
    step = step_asm.table(S.call(step_asm, succ, n, HALT), width=n + succ.width)
    return step, _mu_test(g, n)


def compile_mu(g: MachineTable, n: int) -> MachineTable:
    """Search a = 0, 1, ... with a kept as a canonical numeral in component n."""
    asm = Asm("mu")
    loop = S.while_loop(*mu_loop(g, n), n + 1)
    finish = S.erase_all(asm, range(n), _arrange(asm, [(n, 0)], HALT))
    run_loop = asm.embed(loop, finish)
    init = A.goto(asm, 0, n, S.write_bool(asm, False, A.goto(asm, n, 0, run_loop)))
    return asm.table(init, width=max(loop.width, n + 1))


# ---------------------------------------------------------------- random woo


def compile_random_woo(g: MachineTable, n: int) -> MachineTable:
    """G(x, f) where f_i well orders x_i by its code's child order."""
    asm = Asm("rwoo")
    dedup = _lib("dedup")
    cwo = _lib("cwo")
    base = 2 * n
    run_g = asm.embed(g, HALT)
    entry = run_g
    for i in reversed(range(n)):
        keep = S.erase_all(asm, (base, base + 1), _arrange(asm, [(base + 2, n + i)], entry))
        order = S.call(asm, cwo, base, keep)
        unique = S.call(asm, dedup, base, order)
        entry = _copy_block(asm, (i,), (base,), unique)
    return asm.table(entry, width=_width(asm, (0, g), (base, cwo), (base, dedup)))


# ---------------------------------------------------------------- driver


def compile(t: RecTerm, _cache: dict | None = None) -> MachineTable:
    """Machine computing t; deterministic and total (divergence shows at run time)."""
    cache = {} if _cache is None else _cache
    key = id(t)
    hit = cache.get(key)
    if hit is not None:
        return hit[1]
    if isinstance(t, Zero):
        out = compile_zero()
    elif isinstance(t, Proj):
        out = compile_proj(t.n, t.i)
    elif isinstance(t, Adjoin):
        out = compile_adjoin()
    elif isinstance(t, Cond):
        out = compile_cond()
    elif isinstance(t, (Comp1, Comp2)):
        g, h = compile(t.g, cache), compile(t.h, cache)
        m = t.h.arity
        out = compile_comp(g, h, m, t.arity - m, isinstance(t, Comp2))
    elif isinstance(t, Recursion):
        out = compile_recursion(compile(t.g, cache), t.arity - 1)
    elif isinstance(t, Mu):
        out = compile_mu(compile(t.g, cache), t.arity)
    elif isinstance(t, RandomWoo):
        out = compile_random_woo(compile(t.g, cache), t.arity)
    else:
        raise TypeError(f"not a term: {t!r}")
    cache[key] = (t, out)  # keep t alive so its id stays unique
    return out


# ---------------------------------------------------------------- adornments


@dataclass(frozen=True)
class StorageAddr:
    """The storage node of ``base``: its first blank child slot."""

    base: Address
    resolved: Address


def storage_address(marking: Mapping, eta: Address) -> StorageAddr:
    comp, path = eta[0], tuple(eta[1])
    if not marking.get(Address(comp, path)):
        raise ValueError("the storage node is defined only below marked cells")
    i = 0
    while marking.get(Address(comp, path + (i,))):
        i += 1
    return StorageAddr(Address(comp, path), Address(comp, path + (i,)))


@dataclass(frozen=True)
class AdornedCode:
    """A marking whose recursion component carries stored values at the
    storage nodes of ``adorned_at``."""

    marking: dict
    adorned_at: frozenset


def adorn(args: Sequence[HFSet], z: HFSet, value, max_rank: int | None = None,
          chooser=None) -> AdornedCode:
    """Reference adornment: (x, Z) encoded with ``chooser``; every node of Z
    of rank <= max_rank (all nodes if None) gets the code of
    ``value(args, Z_eta)`` at its storage node, marked 3, and is marked 2."""
    chooser = chooser or seeded_chooser(0)
    n = len(args)
    marking = encode_args(tuple(args) + (z,), chooser)
    paths = component_paths(marking, n)
    rank: dict = {}
    for p in sorted(paths, key=len, reverse=True):
        kids = children(paths, p)
        rank[p] = 1 + max(rank[c] for c in kids) if kids else 0
    adorned = set()
    for p in sorted(paths, key=len, reverse=True):
        if max_rank is not None and rank[p] > max_rank:
            continue
        slot = p + (len(children(paths, p)),)
        sub = decode_marking({Address(0, q[len(p):]): Mark.ONE for q in paths if q[:len(p)] == p})[0]
        for q in encode_tree(value(tuple(args), sub), chooser):
            marking[Address(n, slot + q)] = Mark(STORED)
        marking[Address(n, p)] = Mark(ADORNED)
        adorned.add(p)
    return AdornedCode(marking, frozenset(adorned))


def read_adornments(marking: Mapping, n: int) -> dict:
    """Path -> stored value for every adorned node of component n."""
    out = {}
    for a, m in marking.items():
        if a[0] != n or m != ADORNED:
            continue
        slot = storage_address(marking, a).resolved[1]
        # the storage node is the last child; adorned nodes keep it last
        slot = slot[:-1] + (slot[-1] - 1,)
        if marking.get(Address(n, slot)) != STORED:
            raise ValueError(f"adorned node {a[1]} has no storage node")
        sub = {Address(0, a2[1][len(slot):]): Mark.ONE for a2, m2 in marking.items()
               if a2[0] == n and a2[1][:len(slot)] == slot}
        out[a[1]] = decode_marking(sub)[0]
    return out


# ---------------------------------------------------------------- equivalence


VERDICTS = ("agree", "disagree", "fuel-out", "crash", "both-undefined", "machine-only")


@dataclass
class EquivRecord:
    term: str
    args: tuple
    seed: int
    verdict: str
    expected: str | None
    got: str | None
    steps: int | None
    detail: str = ""


@dataclass
class EquivReport:
    term: str
    rank_bound: int
    seeds: tuple
    fuel: int
    records: list = field(default_factory=list)
    invariance_errors: list = field(default_factory=list)
    compile_seconds: float = 0.0
    run_seconds: float = 0.0
    rules: int = 0

    def counts(self) -> dict:
        out = {v: 0 for v in VERDICTS}
        for r in self.records:
            out[r.verdict] += 1
        return out

    @property
    def disagreements(self) -> int:
        c = self.counts()
        return c["disagree"] + c["fuel-out"] + c["crash"] + c["machine-only"]

    @property
    def ok(self) -> bool:
        return self.disagreements == 0 and not self.invariance_errors

    def summary(self) -> str:
        c = self.counts()
        return (f"{self.term}: {len(self.records)} cases, {c['agree']} agree, "
                f"{self.disagreements} disagree, {len(self.invariance_errors)} invariance errors, "
                f"{c['both-undefined']} undefined on both sides "
                f"(compile {self.compile_seconds:.1f}s, runs {self.run_seconds:.1f}s)")

    def to_json(self) -> dict:
        return {
            "term": self.term,
            "rank_bound": self.rank_bound,
            "seeds": list(self.seeds),
            "fuel": self.fuel,
            "rules": self.rules,
            "counts": self.counts(),
            "invariance_errors": self.invariance_errors,
            "ok": self.ok,
            "records": [asdict(r) | {"args": list(r.args)} for r in self.records],
        }


def equiv_check(t: RecTerm, rank_bound: int = 2, seeds: int | Iterable[int] = 3,
                fuel: int = 10**7, name: str | None = None) -> EquivReport:
    """Run the compiled machine and the interpreter on every argument tuple
    from the rank-bounded universe under each encoding seed."""
    seeds = tuple(range(seeds)) if isinstance(seeds, int) else tuple(seeds)
    report = EquivReport(name or format_rec(t), rank_bound, seeds, fuel)
    t0 = time.perf_counter()
    machine = compile(t)
    report.compile_seconds = time.perf_counter() - t0
    report.rules = len(machine)
    t0 = time.perf_counter()
    universe = enumerate_universe(rank_bound)
    for args in itertools.product(universe, repeat=t.arity):
        shown = tuple(format_set(a) for a in args)
        outputs = {}
        for seed in seeds:
            try:
                expected = evaluate(t, args, EvalEnv(seed=seed, fuel=fuel))
            except EvalError:
                expected = None
            outcome = run(machine, encode_args(args, seeded_chooser(seed)), fuel)
            got = None
            detail = ""
            if isinstance(outcome, Halted):
                try:
                    values = decode_marking(outcome.final)
                except ValueError:
                    values = None
                if values is not None and len(values) == 1:
                    got = values[0]
                    outputs[seed] = got
                else:
                    detail = "output is not a single well formed component"
            else:
                detail = describe_outcome(outcome)
            if expected is None:
                verdict = "both-undefined" if got is None else "machine-only"
            elif got is None:
                verdict = "fuel-out" if isinstance(outcome, MachineFuel) else (
                    "crash" if isinstance(outcome, Crashed) else "disagree")
            else:
                verdict = "agree" if got is expected else "disagree"
            steps = getattr(outcome, "steps", None)
            report.records.append(EquivRecord(
                report.term, shown, seed, verdict,
                None if expected is None else format_set(expected),
                None if got is None else format_set(got), steps, detail))
        if len(set(outputs.values())) > 1:
            report.invariance_errors.append({
                "args": list(shown),
                "outputs": {str(s): format_set(v) for s, v in outputs.items()},
            })
    report.run_seconds = time.perf_counter() - t0
    return report


def write_report(reports: Sequence[EquivReport], path) -> None:
    with open(path, "w") as fh:
        json.dump([r.to_json() for r in reports], fh, indent=1)
        fh.write("\n")


def flagship_corpus() -> dict:
    """The terms of the equivalence acceptance run, by name."""
    from .rec import DERIVED, apply

    return {
        "zero": Zero(),
        "proj": Proj(3, 2),
        "adjoin_via_comp": apply(Adjoin(), Proj(2, 2), Proj(2, 1)),
        "cond": Cond(),
        **{k: DERIVED[k] for k in ("char_in", "singleton", "upair", "vn_succ", "trcl", "least_not_in")},
    }
