"""The standard machines: four hand-written tables and generated ones.

Generated machines follow one calling convention. A machine for n inputs
reads components 0..n-1, assumes every other component is blank, starts and
halts on the 0-root, and records in ``MachineTable.width`` how many
components it may touch. Relocating a machine to component b (jump there, run,
jump back) is then safe whenever components b.. are blank.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Sequence

from . import asm as A
from .asm import Asm, Cursor, HALT
from .machine import (
    Halted,
    MachineTable,
    describe_outcome,
    parse_table,
    run,
)
from .ordinal import Address
from .tapecode import Mark, is_well_formed, num_components


class MachineKind(Enum):
    END = "end"
    ERASE = "erase"
    TRAVERSE2 = "traverse2"
    COPY = "copy"


BUILTIN_SOURCES = {
    MachineKind.END: """\
start l0
l0 1 => * z l1
l1 0 => ** u H
l1 1 => 1 + l1
""",
    MachineKind.ERASE: """\
start l0
l0 1 => * z l1
l1 0 => 0 u+ l1
l1 1 => 0 z l1
l1 ** => 0 u H
""",
    MachineKind.TRAVERSE2: """\
start l0
l0 1 => * z l1
l1 0 => 0 u+ l1
l1 1 => 2 z l1
l1 ** => 0 u H
""",
    MachineKind.COPY: """\
start l0
l0 1 => * z l1
l1 0 => 0 u+ l1
l1 1 => 1 s l2
l1 ** => 0 u H
l2 1 => 1 j+ l3
l3 0 => 1 j- l4
l4 1 => 1 z l1
""",
}


def builtin(kind: MachineKind | str) -> MachineTable:
    kind = MachineKind(kind)
    table = parse_table(BUILTIN_SOURCES[kind], name=kind.value)
    table.width = 2 if kind is MachineKind.COPY else 1
    return table


def delimit(marking: Mapping, comp: int = 0) -> dict:
    """Put the end mark on the first blank root child of ``comp``.

    This is the preprocessed form the erase, traverse-2 and copy tables read.
    """
    out = dict(marking)
    i = 0
    while out.get(Address(comp, (i,))):
        i += 1
    out[Address(comp, (i,))] = Mark.END
    return out


# ---------------------------------------------------------------- helpers


def call(asm: Asm, table: MachineTable, base: int, nxt: str, at: int = 0) -> str:
    """Jump from the root of ``at`` to ``base``, run ``table`` there, jump back."""
    asm.use(base + table.width - 1, at)
    back = asm.chain(A.jmoves(base, at), nxt)
    return asm.chain(A.jmoves(at, base), asm.embed(table, back))


def write_bool(asm: Asm, value: bool, nxt: str) -> str:
    """At a blank component root: write the code of 0 or 1, stay at the root."""
    if not value:
        return asm.state({0: (1, "s", nxt)}, "b0")
    up = asm.state({0: (1, "u", nxt)}, "b1")
    return asm.state({0: (1, "z", up)}, "b1")


def read_bool(asm: Asm, false: str, true: str) -> str:
    """At the root of a Boolean code: erase it and branch on its value."""
    f = asm.label("rb")
    asm.on(f, 0, 0, "u", false)
    asm.on(f, 1, 0, "u", true)
    return asm.state({1: (0, "z", f)}, "rb")


def erase_all(asm: Asm, comps: Sequence[int], nxt: str, at: int = 0) -> str:
    """Erase the listed components; starts and ends at the root of ``at``."""
    entry = nxt
    pos = at
    steps = []
    for c in comps:
        steps.append((pos, c))
        pos = c
    entry = A.goto(asm, pos, at, nxt)
    for frm, c in reversed(steps):
        entry = A.goto(asm, frm, c, A.erase_comp(asm, c, entry))
    return entry


def finish_bool(asm: Asm, at: int, value: bool) -> str:
    """Write a Boolean at the blank root of ``at`` and halt from the 0-root."""
    return write_bool(asm, value, A.goto(asm, at, 0, HALT))


# ---------------------------------------------------------------- combinators


def compose(m1: MachineTable, m2: MachineTable) -> MachineTable:
    """Run ``m1`` then ``m2``: m1's halt state is rewired to m2's start."""
    asm = Asm(f"{m1.name}>{m2.name}")
    second = asm.embed(m2, HALT)
    first = asm.embed(m1, second)
    return asm.table(first, width=max(m1.width, m2.width))


def _copy_inputs(asm: Asm, n: int, nxt: str) -> str:
    """Aligned copies of components 0..n-1 onto n..2n-1; from and to the 0-root."""
    entry = A.goto(asm, n - 1, 0, nxt) if n > 1 else nxt
    for i in reversed(range(n)):
        entry = A.copy_comp(asm, i, n + i, entry)
        if i > 0:
            entry = A.goto(asm, i - 1, i, entry)
    return entry


def if_then_else(mb: MachineTable, m1: MachineTable, m2: MachineTable, n: int = 1) -> MachineTable:
    """Run ``m1`` if ``mb`` answers 0 on the input, else ``m2``."""
    asm = Asm(f"ite({mb.name},{m1.name},{m2.name})")
    asm.use(2 * n - 1)
    run1 = asm.embed(m1, HALT)
    run2 = asm.embed(m2, HALT)
    branch = read_bool(asm, A.goto(asm, n, 0, run1), A.goto(asm, n, 0, run2))
    test = call(asm, mb, n, A.goto(asm, 0, n, branch))
    width = max(m1.width, m2.width, n + mb.width, 2 * n)
    return asm.table(_copy_inputs(asm, n, test), width=width)


def while_loop(m: MachineTable, mb: MachineTable, n: int = 1) -> MachineTable:
    """Apply ``m`` while ``mb`` answers 1; stop at the first 0."""
    asm = Asm(f"while({m.name},{mb.name})")
    asm.use(2 * n - 1)
    loop = asm.label("loop")
    body = asm.embed(m, loop)
    branch = read_bool(asm, A.goto(asm, n, 0, HALT), A.goto(asm, n, 0, body))
    test = call(asm, mb, n, A.goto(asm, 0, n, branch))
    asm.alias(loop, _copy_inputs(asm, n, test))
    return asm.table(loop, width=max(m.width, n + mb.width, 2 * n))


class IterationError(RuntimeError):
    """An iterate was undefined or the iteration did not stop."""


def bool_value(marking: Mapping):
    """0 or 1 for a Boolean code in a single component, else None."""
    cells = {a: int(v) for a, v in marking.items() if v}
    if cells == {Address(0, ()): 1}:
        return 0
    if cells == {Address(0, ()): 1, Address(0, (0,)): 1}:
        return 1
    return None


def reference_iterate(m: MachineTable, mb: MachineTable, x: Mapping, fuel: int = 10**6,
                      max_iterations: int = 10_000) -> dict:
    """X_0 = x, X_(k+1) = m(X_k); returns the first X_k on which mb gives 0."""
    current = {a: v for a, v in x.items() if v}
    for _ in range(max_iterations):
        test = run(mb, current, fuel)
        verdict = bool_value(test.final) if isinstance(test, Halted) else None
        if verdict is None:
            raise IterationError(f"test machine gave no Boolean: {describe_outcome(test)}")
        if verdict == 0:
            return current
        out = run(m, current, fuel)
        if not isinstance(out, Halted):
            raise IterationError(f"loop body undefined: {describe_outcome(out)}")
        current = out.final
    raise IterationError(f"no fixpoint within {max_iterations} iterations")


# ---------------------------------------------------------------- unique marks

STARRED = (5, 6, 7, 8, 9)


def erase_below(target: int = 0, components: int | None = None) -> MachineTable:
    """Zero everything strictly below the unique raised-star cell of ``target``."""
    n = components if components is not None else target + 1
    asm = Asm(f"erase_below{target}")
    cur = Cursor(target, n)
    home = A.goto(asm, n, 0, HALT)
    clear = asm.state(A.op_clear(asm, home), "clr")
    erase = A.region_erase(asm, cur, clear)
    found = A.descend(asm, A.keep(erase))
    search = A.find_mark(asm, cur, STARRED, found, "no_unique_mark")
    start = A.goto(asm, 0, n, A.set_root_cursor(asm, cur, search))
    return asm.table(start, width=n + 1)


def subtree_copy(components: int = 2) -> MachineTable:
    """Replace the cone at the unique mark of component 1 by a copy of the
    cone at the unique mark of component 0 (root mark included)."""
    n = components
    asm = Asm("subtree_copy")
    src, dst = Cursor(0, n), Cursor(1, n + 1)
    home = A.goto(asm, n + 1, 0, HALT)
    clear_dst = A.descend(asm, A.op_clear(asm, home))
    clear_src = asm.state(A.op_clear(asm, clear_dst, ("j+",)), "cs")
    copy = A.region_copy(asm, src, dst, clear_src)
    to_src = A.commute(asm, dst, src, A.keep(copy))
    erase = A.region_erase(asm, dst, asm.state(A.keep(to_src), "ed"))
    found_dst = A.descend(asm, A.keep(erase))
    find_dst = A.set_root_cursor(asm, dst, A.find_mark(asm, dst, STARRED, found_dst, "no_unique_mark"))
    found_src = asm.chain(("j+",), find_dst)
    start = A.goto(asm, 0, n, A.set_root_cursor(asm, src, A.find_mark(asm, src, STARRED, found_src,
                                                                        "no_unique_mark")))
    return asm.table(start, width=n + 2)


# ---------------------------------------------------------------- equality

NEW_REP = 7  # raised-star 2: a representative found in the current sweep
CANDIDATE = 6  # raised-star 1


def m_equal() -> MachineTable:
    """Literal equality of components 0 and 1; verdict in component 2."""
    asm = Asm("equal")
    yes = A.goto(asm, 0, 2, finish_bool(asm, 2, True))
    no = A.goto(asm, 0, 2, finish_bool(asm, 2, False))
    return asm.table(A.compare_comps(asm, 0, 1, yes, no), width=3)


def _search_children(asm: Asm, fixed: Cursor, moving: Cursor, found: str, missing: str) -> str:
    """Is some root child of ``moving``'s component literally equal to the
    region at ``fixed``? Starts on the cursor of ``moving`` (region root at the
    component root); ends on that cursor with the region root at the found
    child, or back at the component root if missing.
    """
    rd = asm.label("sc")
    miss = asm.state(A.op_root_up(asm, missing), "sm")
    cmp_ne = A.commute(asm, fixed, moving, A.op_next(asm, rd, moving.to_data))
    cmp_eq = A.commute(asm, fixed, moving, A.keep(found, (), A.AT_REGION_ROOT))
    compare = A.region_compare(asm, fixed, moving, cmp_eq, cmp_ne)
    asm.on(rd, A.NONZERO, None, moving.from_data, A.commute(asm, moving, fixed, A.keep(compare)))
    asm.on(rd, 0, None, moving.from_data, miss)
    return asm.state(A.op_root_down(asm, rd, moving.to_data), "sd")


def m_exists_equal() -> MachineTable:
    """Is component 0 literally equal to the cone at some root child of
    component 1? Verdict in component 2."""
    asm = Asm("exists_equal")
    fixed, moving = Cursor(0, 3), Cursor(1, 4)

    def finish(value):
        home = A.goto(asm, 3, 2, finish_bool(asm, 2, value))
        clear_fixed = A.descend(asm, A.op_clear(asm, home))
        return asm.state(A.op_clear(asm, clear_fixed, ("j-",)), "fin")

    search = _search_children(asm, fixed, moving, finish(True), finish(False))
    start = _set_cursors(asm, fixed, moving, search)
    return asm.table(start, width=5)


def _set_cursors(asm: Asm, first: Cursor, second: Cursor, nxt: str) -> str:
    """From the 0-root: root cursors in two adjacent layers, end on ``second``."""
    assert second.layer == first.layer + 1
    return A.goto(asm, 0, first.layer, A.set_root_cursor(asm, first, A.set_root_cursor(asm, second, nxt),
                                                           ("j+",)))


def _forall_exists(asm: Asm, outer: Cursor, inner: Cursor, holds: str, fails: str) -> str:
    """Every root child cone of ``outer`` equals some root child cone of
    ``inner``. Starts on ``outer``'s root cursor; ends on it (at the root)."""
    rd = asm.label("fa")
    back_root = asm.state(A.op_root_up(asm, holds), "fh")
    after_found = asm.state(A.op_root_up(asm, A.commute(asm, inner, outer, A.op_next(asm, rd, outer.to_data))),
                            "ff")
    after_missing = A.commute(asm, inner, outer, A.op_root_up(asm, fails))
    search = _search_children(asm, outer, inner, after_found, after_missing)
    asm.on(rd, A.NONZERO, None, outer.from_data, A.commute(asm, outer, inner, A.keep(search)))
    asm.on(rd, 0, None, outer.from_data, back_root)
    return asm.state(A.op_root_down(asm, rd, outer.to_data), "fd")


def m_forall_exists(direction: str = "x->y") -> MachineTable:
    """Every root child cone of one input is literally equal to some root
    child cone of the other; verdict in component 2."""
    if direction not in ("x->y", "y->x"):
        raise ValueError("direction must be 'x->y' or 'y->x'")
    asm = Asm(f"forall_exists[{direction}]")
    c0, c1 = Cursor(0, 3), Cursor(1, 4)
    outer, inner = (c0, c1) if direction == "x->y" else (c1, c0)

    def finish(value):
        home = A.goto(asm, 3, 2, finish_bool(asm, 2, value))
        clear0 = A.descend(asm, A.op_clear(asm, home))
        clear1 = A.descend(asm, A.op_clear(asm, clear0, ("j-",)))
        return A.climb(asm, {(6, 7, 8, 9): (None, A.jmoves(outer.layer, 4), clear1)})

    body = _forall_exists(asm, outer, inner, finish(True), finish(False))
    start = _set_cursors(asm, c0, c1, A.commute(asm, c1, outer, A.keep(body)) if outer == c0
                         else asm.state(A.keep(body), "go"))
    return asm.table(start, width=5)


# ---------------------------------------------------------------- canonicalization


def _mark_leaves(asm: Asm, nxt: str) -> str:
    """Aligned pass over component 0 turning leaf marks 1 into 2."""
    start, root_first, first, visit, up = (asm.label(h) for h in ("l0", "lr", "lf", "lv", "lu"))
    asm.on(start, 1, A.DELIM, "z", root_first)
    asm.on(root_first, 0, None, "u", asm.state({A.DELIM: (2, "s", nxt)}, "ll"))
    asm.on(root_first, 1, None, "z", first)
    leaf = asm.state({1: (2, "+", visit)}, "lx")
    asm.on(first, 0, None, "u", leaf)
    asm.on(first, 1, None, "z", first)
    asm.on(visit, 1, None, "z", first)
    asm.on(visit, 0, None, "u", up)
    asm.on(up, 1, None, "+", visit)
    asm.on(up, A.DELIM, 1, "s", nxt)
    return start


def canon_test() -> MachineTable:
    """Boolean: 1 unless the root of component 0 is marked 2."""
    asm = Asm("not_done")
    done = asm.label("nd")
    out1 = A.erase_comp(asm, 0, write_bool(asm, True, HALT))
    out0 = A.erase_comp(asm, 0, write_bool(asm, False, HALT))
    asm.on(done, 2, None, "s", out0)
    asm.on(done, (1, 3, 4, 5, 6, 7, 8, 9), None, "s", out1)
    return asm.table(done, width=1)


def local_canonicalize() -> MachineTable:
    """One sweep: the nodes of the next rank become canonical and marked 2.

    Before the sweep every node of rank below some a is canonical and marked
    2, the others 1. Candidates (1-nodes whose children are all 2) are exactly
    the rank-a nodes. Each candidate is compared with the representatives
    found earlier in the sweep; when it decodes to the same set it is
    rewritten as a literal copy, otherwise it becomes a representative.
    """
    asm = Asm("local_canon")
    rho, nu = Cursor(0, 1), Cursor(0, 2)
    c, d = Cursor(0, 3), Cursor(0, 4)
    asm.use(4)
    home = A.goto(asm, 1, 0, HALT)
    finished = asm.state(A.op_clear(asm, home), "done")

    # phase 3: representatives back to 2
    f_rd = asm.label("f")
    asm.on(f_rd, 1, None, rho.from_data, asm.state(A.op_down(asm, f_rd, rho.to_data), "fd"))
    asm.on(f_rd, (2, NEW_REP), 2, rho.from_data, asm.state(A.op_next(asm, f_rd, rho.to_data), "fn"))
    asm.on(f_rd, 0, None, rho.from_data, asm.state(A.op_up_next(asm, f_rd, finished, rho.to_data), "fu"))
    phase3 = asm.state(A.op_down(asm, f_rd, rho.to_data), "f0")

    # phase 2: candidates in pre-order at rho
    c_rd = asm.label("c")
    cand_next = asm.state(A.op_next(asm, c_rd, rho.to_data), "cn")
    mark_new = asm.state({CANDIDATE: (NEW_REP, rho.from_data, cand_next)}, "new")
    mark_dup = asm.state({CANDIDATE: (2, rho.from_data, cand_next)}, "dup")

    # representatives walk at nu
    r_rd = asm.label("r")
    rep_next = asm.state(A.op_next(asm, r_rd, nu.to_data), "rn")
    clear_c_new = A.descend(asm, A.op_clear(asm, asm.chain(("j-", "j-"), A.descend(asm, A.keep(mark_new, rho.to_data)))))
    no_match = asm.state(A.op_clear(asm, clear_c_new, ("j+",)), "nm")
    asm.on(r_rd, 1, None, nu.from_data, asm.state(A.op_down(asm, r_rd, nu.to_data), "rd"))
    asm.on(r_rd, (2, CANDIDATE), None, nu.from_data, rep_next)
    asm.on(r_rd, 0, None, nu.from_data, asm.state(A.op_up_next(asm, r_rd, no_match, nu.to_data), "ru"))

    # cleanups: clear d, c, nu (layers 4, 3, 2) then mark rho
    def clear_all_from_d(target: str) -> dict:
        clear_nu = A.descend(asm, A.op_clear(asm, asm.chain(("j-",), A.descend(asm, A.keep(target, rho.to_data)))))
        clear_c = A.descend(asm, A.op_clear(asm, clear_nu, ("j-",)))
        return A.op_clear(asm, clear_c, ("j-",))

    dup_from_d = clear_all_from_d(mark_dup)
    # next representative: clear d only, advance nu
    next_rep_from_d = A.op_clear(asm, A.descend(asm, A.op_next(asm, r_rd, nu.to_data)), ("j-", "j-"))

    # same value: erase below rho (c), copy nu's cone (d) without its root mark
    copy = A.region_copy(asm, d, c, asm.state(dup_from_d, "cpd"), root_write=False)
    erase = A.region_erase(asm, c, A.commute(asm, c, d, A.keep(copy)))
    equal_value = A.commute(asm, d, c, A.keep(erase))
    # both inclusions of children cones
    second = _forall_exists(asm, d, c, equal_value, asm.state(next_rep_from_d, "nr2"))
    first = _forall_exists(asm, c, d, A.commute(asm, c, d, A.keep(second)),
                           A.commute(asm, c, d, next_rep_from_d))
    literal = A.region_compare(asm, c, d, A.commute(asm, c, d, dup_from_d), first, roots=False)
    # a representative at nu: clone it into d, compare with rho's clone in c
    clone_d = A.clone(asm, nu, d, asm.chain(("j-",), A.descend(asm, A.keep(literal))))
    asm.on(r_rd, NEW_REP, None, nu.from_data, asm.state(clone_d, "rep"))

    # a candidate at rho: clone it into c, start nu at the root
    start_nu = A.set_root_cursor(asm, nu, asm.state(A.op_down(asm, r_rd, nu.to_data), "r0"))
    process = asm.state(A.clone(asm, rho, c, start_nu, ("j-",)), "cand")
    asm.on(c_rd, 1, None, rho.from_data, asm.state(A.op_down(asm, c_rd, rho.to_data), "cd"))
    asm.on(c_rd, (2, NEW_REP), None, rho.from_data, cand_next)
    asm.on(c_rd, CANDIDATE, None, rho.from_data, process)
    asm.on(c_rd, 0, None, rho.from_data, asm.state(A.op_up_next(asm, c_rd, phase3, rho.to_data), "cu"))
    # the root alone is a candidate: nothing to compare
    phase2 = asm.state({A.AT_REGION_ROOT: (None, rho.to_data, asm.state({
        CANDIDATE: (2, rho.from_data, finished), 1: (None, rho.from_data, asm.state(
            A.op_down(asm, c_rd, rho.to_data), "c0"))}, "c0"))}, "p2")

    # phase 1: mark candidates
    s_rd, a_rd = asm.label("s"), asm.label("a")
    visit = asm.state(A.op_down(asm, s_rd, rho.to_data), "v")
    adv_next = asm.state(A.op_next(asm, a_rd, rho.to_data), "an")
    mark_cand = asm.state({1: (CANDIDATE, rho.from_data, adv_next)}, "mc")
    mark_root = asm.state({1: (CANDIDATE, rho.from_data, phase2)}, "mr")
    asm.on(s_rd, 2, None, rho.from_data, asm.state(A.op_next(asm, s_rd, rho.to_data), "sn"))
    asm.on(s_rd, 1, None, rho.from_data, visit)
    asm.on(s_rd, 0, None, rho.from_data, asm.state(
        A.op_up(asm, mark_cand, mark_root, rho.to_data, rho.to_data), "su"))
    asm.on(a_rd, 2, None, rho.from_data, adv_next)
    asm.on(a_rd, 1, None, rho.from_data, visit)
    asm.on(a_rd, 0, None, rho.from_data, asm.state(A.op_up_next(asm, a_rd, phase2, rho.to_data), "au"))
    start = A.goto(asm, 0, 1, A.set_root_cursor(asm, rho, visit))
    return asm.table(start, width=5)


def m_canonicalize() -> MachineTable:
    """Rewrite a code so that equal sets have literally equal cones."""
    asm = Asm("canonicalize")
    loop = while_loop(local_canonicalize(), canon_test(), 1)
    final = A.relabel_comp(asm, 0, {2: 1}, HALT)
    body = asm.embed(loop, final)
    return asm.table(_mark_leaves(asm, body), width=loop.width)


def m_dedup() -> MachineTable:
    """Canonicalize, then drop every root child literally equal to an earlier
    one; the result has no two root children coding the same set."""
    asm = Asm("dedup")
    canon = m_canonicalize()
    a, b, t = Cursor(0, 2), Cursor(0, 3), Cursor(1, 4)
    finish = A.goto(asm, 4, 0, A.erase_comp(asm, 0, A.goto(asm, 0, 1, A.move_comp(
        asm, 1, 0, A.goto(asm, 1, 0, HALT)))))
    clear_t = asm.chain(A.jmoves(2, 4), A.descend(asm, A.op_clear(asm, finish)))
    read_a = asm.label("da")
    done = asm.state(A.op_root_up(asm, asm.state(A.op_clear(asm, clear_t), "dc")), "dd")
    next_a = asm.state(A.op_next(asm, read_a, a.to_data), "dn")
    # keep child i: graft a copy under the output root
    copied = A.commute(asm, a, t, A.op_root_up(asm, A.commute(asm, t, a, A.keep(next_a))))
    copy = A.region_copy(asm, a, t, copied)
    keep_child = A.commute(asm, a, t, A.keep(A.find_blank_child(asm, t, A.commute(asm, t, a, A.keep(copy)))))
    # b walks the earlier siblings; it has reached a when a's layer shows a
    # cursor at b's path
    same = asm.label("ds")
    drop = asm.state(A.op_clear(asm, asm.chain(A.jmoves(3, 2), A.descend(asm, A.keep(next_a)))), "dx")
    unique = asm.state(A.op_clear(asm, asm.chain(A.jmoves(3, 2), A.descend(asm, A.keep(keep_child)))), "du")
    differ = asm.state(A.op_next(asm, same, ()), "dv")
    compare = A.region_compare(asm, b, a, drop, differ)
    asm.add_cases(same, A.keep(asm.state({
        A.AT_REGION_ROOT: (None, A.jmoves(2, 3), unique),
        (0, A.L_T, A.rooted(A.L_T)): (None, A.jmoves(2, 3), compare),
    }, "dq"), A.jmoves(3, 2)))
    start_b = A.climb(asm, {(6, 7, 8, 9): (None, A.jmoves(2, 3), A.set_root_cursor(
        asm, b, asm.state(A.op_root_down(asm, same), "db")))})
    asm.add_cases(read_a, {A.NONZERO: (None, a.from_data, start_b), 0: (None, a.from_data, done)})
    first = asm.state(A.op_root_down(asm, read_a, a.to_data), "d0")
    cursors = A.set_root_cursor(asm, t, asm.chain(A.jmoves(4, 2), A.set_root_cursor(asm, a, first)))
    out_root = A.goto(asm, 0, 1, write_bool(asm, False, A.goto(asm, 1, 4, cursors)))
    return asm.table(asm.embed(canon, out_root), width=max(canon.width, 5))


# ---------------------------------------------------------------- pairs


def _write_at(asm: Asm, cur: Cursor, mark: int, nxt: str) -> dict:
    """Cases at the cursor: write ``mark`` on its (blank) data cell, return."""
    back = asm.state({0: (mark, cur.from_data, nxt)}, "wa")
    return A.keep(back, cur.to_data)


def _copy_into(asm: Asm, src: Cursor, dst: Cursor, nxt: str) -> dict:
    """Cases at ``dst``'s cursor: copy src's region there, return to dst."""
    done = A.commute(asm, src, dst, A.keep(nxt))
    return A.keep(A.commute(asm, dst, src, A.keep(A.region_copy(asm, src, dst, done))))


def _opair_at(asm: Asm, x: Cursor, y: Cursor, t: Cursor, nxt: str) -> str:
    """At t's cursor on a blank slot: build {{x},{x,y}} there from the regions
    of x and y; ends on t's cursor, back on that slot."""
    steps = [
        lambda s: _write_at(asm, t, 1, s),
        lambda s: A.op_root_down(asm, s),
        lambda s: _write_at(asm, t, 1, s),
        lambda s: A.op_root_down(asm, s),
        lambda s: _copy_into(asm, x, t, s),
        lambda s: A.op_root_up(asm, s),
        lambda s: A.op_next(asm, s),
        lambda s: _write_at(asm, t, 1, s),
        lambda s: A.op_root_down(asm, s),
        lambda s: _copy_into(asm, x, t, s),
        lambda s: A.op_next(asm, s),
        lambda s: _copy_into(asm, y, t, s),
        lambda s: A.op_root_up(asm, s),
        lambda s: A.op_root_up(asm, s),
    ]
    return A.seq(asm, [lambda s, f=f: asm.state(f(s), "op") for f in steps], nxt)


def m_pair(kind: str = "pair") -> MachineTable:
    """Component 2 gets {x, y}, the ordered pair (x, y), or the pairing of
    the root children of components 0 and 1 index by index."""
    if kind not in ("pair", "opair", "pairing"):
        raise ValueError(f"unknown pair kind {kind!r}")
    asm = Asm(f"pair[{kind}]")
    x, y, t = Cursor(0, 3), Cursor(1, 4), Cursor(2, 5)
    home = A.goto(asm, 3, 0, HALT)
    clear_x = A.descend(asm, A.op_clear(asm, home))
    clear_y = A.descend(asm, A.op_clear(asm, clear_x, ("j-",)))
    end = asm.state(A.op_clear(asm, clear_y, ("j-",)), "end")  # on t's cursor

    if kind == "pair":
        body = A.seq(asm, [
            lambda s: asm.state(_write_at(asm, t, 1, s), "pr"),
            lambda s: asm.state(A.op_root_down(asm, s), "pd"),
            lambda s: asm.state(_copy_into(asm, x, t, s), "p0"),
            lambda s: asm.state(A.op_next(asm, s), "p1"),
            lambda s: asm.state(_copy_into(asm, y, t, s), "p2"),
            lambda s: asm.state(A.op_root_up(asm, s), "p3"),
        ], end)
    elif kind == "opair":
        body = _opair_at(asm, x, y, t, end)
    else:
        # x and y walk the root children in step; t builds pair i at <i>
        check = asm.label("ck")
        advance = asm.state(A.op_next(asm, A.commute(asm, t, x, A.op_next(asm, A.commute(
            asm, x, y, A.op_next(asm, check))))), "adv")
        build = _opair_at(asm, x, y, t, advance)
        stop = A.commute(asm, x, t, A.op_root_up(asm, end))
        x_has = asm.state({A.NONZERO: (None, x.from_data, A.commute(asm, x, t, A.keep(build)))}, "xh")
        x_not = asm.state({0: (None, x.from_data, stop)}, "xn")
        y_rd = asm.state({A.NONZERO: (None, y.from_data, A.commute(asm, y, x, A.keep(x_has, x.to_data))),
                          0: (None, y.from_data, A.commute(asm, y, x, A.keep(x_not, x.to_data)))}, "yr")
        asm.add_cases(check, A.keep(y_rd, y.to_data))
        start_x = A.commute(asm, t, x, A.op_root_down(asm, A.commute(asm, x, y, A.op_root_down(asm, check))))
        body = asm.state(_write_at(asm, t, 1, asm.state(A.op_root_down(asm, start_x), "pd")), "pr")
    start = A.goto(asm, 0, 3, A.set_root_cursor(asm, x, A.set_root_cursor(
        asm, y, A.set_root_cursor(asm, t, body), ("j+",)), ("j+",)))
    return asm.table(start, width=6)


# ---------------------------------------------------------------- ordinals


def _graft(asm: Asm, nxt: str) -> str:
    """From the 0-root: move the code in component 1 to the first blank root
    child of component 0. Uses layers 2 and 3."""
    src, dst = Cursor(1, 3), Cursor(0, 2)
    erase = A.goto(asm, 2, 1, A.erase_comp(asm, 1, A.goto(asm, 1, 0, nxt)))
    clear_dst = A.descend(asm, A.op_clear(asm, erase))
    clear_src = asm.state(A.op_clear(asm, clear_dst, ("j-",)), "cs")
    copy = A.region_copy(asm, src, dst, clear_src)
    seek = A.find_blank_child(asm, dst, A.commute(asm, dst, src, A.keep(copy)))
    cursors = A.set_root_cursor(asm, dst, A.set_root_cursor(asm, src, asm.chain(
        ("j-",), A.descend(asm, A.keep(seek)))), ("j+",))
    return A.goto(asm, 0, 2, cursors)


def m_adjoin() -> MachineTable:
    """(x, y) to x + {y}: the code of y becomes a new root child of x."""
    asm = Asm("adjoin")
    return asm.table(_graft(asm, HALT), width=4)


def _succ() -> MachineTable:
    """a_C to (a+1)_C: append a copy of a at the first blank root child."""
    asm = Asm("succ")
    return asm.table(A.copy_comp(asm, 0, 1, _graft(asm, HALT)), width=4)


def _alpha_c() -> MachineTable:
    """(x) to (x, a_C) with a the number of root children of x's code."""
    asm = Asm("alpha_c")
    succ = _succ()
    layer = 1 + succ.width
    cur = Cursor(0, layer)
    rd = asm.label("ac")
    home = A.goto(asm, layer, 0, HALT)
    again = asm.chain(A.jmoves(1, layer), A.descend(asm, A.op_next(asm, rd, cur.to_data)))
    grow = call(asm, succ, 1, again, at=1)
    asm.on(rd, A.NONZERO, None, cur.from_data, A.climb(asm, {(6, 7, 8, 9): (None, A.jmoves(layer, 1), grow)}))
    asm.on(rd, 0, None, cur.from_data, asm.state(A.op_clear(asm, home), "acd"))
    first = asm.state(A.op_root_down(asm, rd, cur.to_data), "a0")
    start = A.goto(asm, 0, 1, write_bool(asm, False, A.goto(asm, 1, layer, A.set_root_cursor(asm, cur, first))))
    return asm.table(start, width=layer + 1)


def m_ord(kind: str = "succ") -> MachineTable:
    """Canonical ordinals: successor, the ordinal of a code's root children,
    and that ordinal with the index-by-index pairing."""
    if kind == "succ":
        return _succ()
    if kind == "alpha_c":
        return _alpha_c()
    if kind == "cwo":
        table = compose(_alpha_c(), m_pair("pairing"))
        table.name = "cwo"
        return table
    raise ValueError(f"unknown ordinal machine {kind!r}")


# ---------------------------------------------------------------- decisions


def m_decide(kind: str = "member") -> MachineTable:
    """Boolean decision of x in y or x = y on the sets the two inputs code.

    The inputs are paired into {x, y}, canonicalized, split again, and the
    literal search runs on the canonical copies.
    """
    if kind not in ("member", "equal"):
        raise ValueError(f"unknown decision {kind!r}")
    asm = Asm(f"decide[{kind}]")
    pair, canon = m_pair("pair"), m_canonicalize()
    test = m_exists_equal() if kind == "member" else m_equal()
    # verdict in component 2: erase the inputs, move it to component 0
    finish = erase_all(asm, (0, 1), A.goto(asm, 0, 2, A.move_comp(asm, 2, 0, A.goto(asm, 2, 0, HALT))))
    decide = asm.embed(test, finish)
    # split the canonical pair code: <0> to component 0, <1> to component 1
    z, t0, t1 = Cursor(2, 3), Cursor(0, 4), Cursor(1, 4)
    cleanup = A.descend(asm, A.op_clear(asm, A.goto(asm, 4, 2, A.erase_comp(asm, 2, A.goto(asm, 2, 0, decide)))))
    copy1 = A.region_copy(asm, z, t1, asm.state(A.op_clear(asm, cleanup, ("j+",)), "c1"))
    second = A.commute(asm, z, t0, A.op_clear(asm, A.set_root_cursor(
        asm, t1, A.commute(asm, t1, z, A.op_next(asm, copy1)))))
    copy0 = A.region_copy(asm, z, t0, second)
    cursors = A.set_root_cursor(asm, z, A.set_root_cursor(asm, t0, asm.chain(
        ("j-",), A.descend(asm, A.op_root_down(asm, copy0)))), ("j+",))
    split = A.goto(asm, 0, 3, cursors)
    canonical = call(asm, canon, 2, split)
    start = asm.embed(pair, erase_all(asm, (0, 1), canonical))
    return asm.table(start, width=max(2 + canon.width, pair.width, test.width))


# ---------------------------------------------------------------- contracts


@dataclass(frozen=True)
class ContractReport:
    kind: str
    verdict: bool
    counterexample: dict | None = None
    reason: str = ""

    def __post_init__(self):
        if not self.verdict and self.counterexample is None:
            raise ValueError("a failed contract needs a counterexample")


CONTRACT_KINDS = ("boolean", "preserves-components")


def validate_contract(m: MachineTable, kind: str, corpus, fuel: int = 10**6) -> ContractReport:
    """Check a Boolean or component-preservation contract on every marking of
    ``corpus``; the first violation is reported."""
    if kind not in CONTRACT_KINDS:
        raise ValueError(f"unknown contract {kind!r}; expected one of {CONTRACT_KINDS}")
    for x in corpus:
        x = {a: v for a, v in x.items() if v}
        if not is_well_formed(x):
            continue
        out = run(m, x, fuel)
        if kind == "boolean":
            if not isinstance(out, Halted):
                return ContractReport(kind, False, x, describe_outcome(out))
            if bool_value(out.final) is None:
                return ContractReport(kind, False, x, "output is not the code of 0 or 1")
        elif isinstance(out, Halted) and num_components(out.final) != num_components(x):
            return ContractReport(kind, False, x, f"{num_components(x)} components in, "
                                                  f"{num_components(out.final)} out")
    return ContractReport(kind, True)


# ---------------------------------------------------------------- catalogue


def catalogue() -> dict:
    """Every named machine: name -> zero-argument constructor."""
    out = {k.value: (lambda k=k: builtin(k)) for k in MachineKind}
    out.update({
        "equal": m_equal,
        "exists_equal": m_exists_equal,
        "forall_exists_xy": lambda: m_forall_exists("x->y"),
        "forall_exists_yx": lambda: m_forall_exists("y->x"),
        "canonicalize": m_canonicalize,
        "local_canonicalize": local_canonicalize,
        "pair": lambda: m_pair("pair"),
        "opair": lambda: m_pair("opair"),
        "pairing": lambda: m_pair("pairing"),
        "adjoin": m_adjoin,
        "dedup": m_dedup,
        "succ": lambda: m_ord("succ"),
        "alpha_c": lambda: m_ord("alpha_c"),
        "cwo": lambda: m_ord("cwo"),
        "decide_member": lambda: m_decide("member"),
        "decide_equal": lambda: m_decide("equal"),
        "erase_below": erase_below,
        "subtree_copy": subtree_copy,
    })
    return out
