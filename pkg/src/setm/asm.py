"""Macro assembler for set Turing machine tables.

Builders are written in continuation-passing style: every routine receives the
state(s) to continue in and returns its own entry state, so programs are
assembled back to front. ``Asm.alias`` ties forward references for loops.

Two families of routines live here.

Aligned routines work on whole components whose roots are anchors; they mark
the root with the delimiter mark while traversing, so data components may use
marks 1-4 and their raised-star forms but not the two delimiter marks.

Cursor routines keep a position in a *layer* component: the layer stores the
path from the component root to the cursor, with one distinguished node (the
region root) that bounds traversals. Because a jump keeps the path, the data
cell under a cursor is a fixed number of jumps away. Two cursors in different
layers support lockstep copy and comparison between arbitrary subtrees.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .machine import HALT, MachineTable, Move
from .tapecode import Mark

ALL = tuple(range(12))
NONZERO = tuple(range(1, 12))
DATA = (1, 2, 3, 4, 5, 6, 7, 8, 9)
DELIM, END = 10, 11

_MARKS = tuple(Mark)
_MOVES = {m.value: m for m in Move}
_MOVE_TEXT = {m: m.value for m in Move}

# layer marks; the raised-star form flags the component root
L_T, L_C, L_R, L_RC = 1, 2, 3, 4
ROOTED = 5
THREAD = (1, 2, 3, 4, 6, 7, 8, 9)


def jmoves(frm: int, to: int) -> tuple:
    return ("j+",) * (to - frm) if to >= frm else ("j-",) * (frm - to)


class Asm:
    def __init__(self, name: str = "m"):
        self.name = name
        self.rules: dict = {}
        self.parent: dict = {}
        self.count = 0
        self._chains: dict = {}
        self.width = 1

    # ------------------------------------------------------------ basics

    def label(self, hint: str = "s") -> str:
        self.count += 1
        return f"{hint}{self.count}"

    def alias(self, a: str, b: str) -> None:
        """Make label ``a`` behave as ``b`` (resolved when the table is built)."""
        if a == b:
            raise ValueError("alias loop")
        self.parent[a] = b

    def find(self, s: str) -> str:
        seen = []
        while s in self.parent:
            seen.append(s)
            s = self.parent[s]
            if len(seen) > 10000:
                raise ValueError("alias cycle")
        return s

    def _add(self, state, mark, write, move, nxt):
        key = (state, mark)
        val = (write, move, nxt)
        old = self.rules.get(key)
        if old is not None and old != val:
            raise ValueError(f"conflicting rules for {key}: {old} vs {val}")
        self.rules[key] = val

    def chain(self, moves: Iterable[str], nxt: str) -> str:
        """State performing ``moves`` without changing marks, then ``nxt``."""
        moves = tuple(moves)
        if not moves:
            return nxt
        key = (moves, nxt)
        st = self._chains.get(key)
        if st is None:
            st = self.label("j")
            self._chains[key] = st
            rest = self.chain(moves[1:], nxt)
            for m in ALL:
                self._add(st, m, m, moves[0], rest)
        return st

    def on(self, state: str, marks, write, moves, nxt: str) -> str:
        """Rules for ``state`` on each mark: write (None keeps the mark, or a
        mark, or a function of the mark), perform ``moves``, enter ``nxt``."""
        if isinstance(marks, int):
            marks = (marks,)
        if isinstance(moves, str):
            moves = (moves,)
        moves = tuple(moves) or ("s",)
        target = self.chain(moves[1:], nxt)
        for m in marks:
            if write is None:
                w = m
            elif callable(write):
                w = write(m)
            else:
                w = write
            self._add(state, m, w, moves[0], target)
        return state

    def state(self, cases: dict, hint: str = "s") -> str:
        """New state from ``{marks: (write, moves, next)}``."""
        st = self.label(hint)
        self.add_cases(st, cases)
        return st

    def add_cases(self, st: str, cases: dict) -> None:
        for marks, (write, moves, nxt) in cases.items():
            self.on(st, marks, write, moves, nxt)

    def embed(self, table: MachineTable, exit: str) -> str:
        """Copy ``table`` with fresh state names; its halt leads to ``exit``."""
        prefix = self.label("e") + "."

        def name(s):
            return exit if s == HALT else prefix + s

        for (s, m), (w, mv, n) in table.rules.items():
            self._add(name(s), int(m), int(w), _MOVE_TEXT[mv], name(n))
        return name(table.start)

    def table(self, entry: str, name: str | None = None, width: int | None = None) -> MachineTable:
        t = MachineTable(self.find(entry), name=name or self.name)
        out = t.rules
        for (s, m), (w, mv, n) in self.rules.items():
            s2 = self.find(s)
            if s2 == HALT:
                raise ValueError("the halt state H cannot have rules")
            rule = (_MARKS[w], _MOVES[mv], self.find(n))
            key = (s2, _MARKS[m])
            old = out.get(key)
            if old is not None:
                if old != rule:
                    raise ValueError(f"alias merge conflict on {key}")
                continue
            out[key] = rule
        t.width = width if width is not None else self.width
        return t

    def use(self, *comps: int) -> None:
        """Record that the machine touches these components."""
        self.width = max(self.width, 1 + max(comps))


def seq(asm: Asm, steps: list, exit: str) -> str:
    """Chain builders ``f(cont) -> entry`` front to back."""
    entry = exit
    for f in reversed(steps):
        entry = f(entry)
    return entry


def table_width(table: MachineTable) -> int:
    return getattr(table, "width", 1)


# ================================================================ aligned


def goto(asm: Asm, frm: int, to: int, nxt: str) -> str:
    """Jump from the root of component ``frm`` to the same path in ``to``."""
    asm.use(frm, to)
    return asm.chain(jmoves(frm, to), nxt)


def write_root(asm: Asm, comp: int, mark: int, nxt: str) -> str:
    """Write ``mark`` at the current cell (any previous mark) and stay."""
    asm.use(comp)
    return asm.state({ALL: (mark, "s", nxt)}, "wr")


def copy_comp(asm: Asm, src: int, dst: int, nxt: str, marks=DATA) -> str:
    """Copy component ``src`` onto the blank component ``dst`` (same paths).

    Enters and leaves at the root of ``src``.
    """
    asm.use(src, dst)
    there, back = jmoves(src, dst), jmoves(dst, src)
    visit, desc, up, fin = asm.label("cv"), asm.label("cd"), asm.label("cu"), asm.label("cf")
    start = asm.label("c0")
    asm.on(start, 0, None, "s", nxt)
    for m in marks:
        w = asm.state({0: (m, back, desc)}, "cw")
        asm.on(start, m, DELIM, there, w)
        asm.on(visit, m, None, there, w)
        asm.on(up, m, None, "+", visit)
    asm.on(desc, tuple(marks) + (DELIM,), None, "z", visit)
    asm.on(visit, 0, None, "u", up)
    # back at the anchored root: restore its mark from the copy
    asm.on(up, DELIM, None, there, fin)
    for m in marks:
        restore = asm.state({DELIM: (m, "s", nxt)}, "cr")
        asm.on(fin, m, None, back, restore)
    return start


def erase_comp(asm: Asm, comp: int, nxt: str, marks=DATA) -> str:
    """Erase a whole component (post-order). Enters and leaves at its root."""
    asm.use(comp)
    start, visit, up = asm.label("x0"), asm.label("xv"), asm.label("xu")
    asm.on(start, 0, None, "s", nxt)
    asm.on(start, marks, DELIM, "z", visit)
    asm.on(visit, marks, None, "z", visit)
    asm.on(visit, 0, None, "u", up)
    asm.on(up, marks, 0, "+", visit)
    asm.on(up, DELIM, 0, "s", nxt)
    return start


def compare_comps(asm: Asm, a: int, b: int, eq: str, ne: str, marks=DATA) -> str:
    """Literal equality of components ``a`` and ``b`` (marks included).

    Enters and leaves at the root of ``a``.
    """
    asm.use(a, b)
    there, back = jmoves(a, b), jmoves(b, a)
    start, visit, desc, up = asm.label("q0"), asm.label("qv"), asm.label("qd"), asm.label("qu")
    blank_up = asm.label("qb")
    climb_ne, climb_eq = asm.label("qn"), asm.label("qe")
    # roots
    empty = asm.state({0: (0, back, asm.state({0: (0, "s", eq)}, "qr")),
                       NONZERO: (None, back, asm.state({0: (0, "s", ne)}, "qr"))}, "qz")
    asm.on(start, 0, None, there, empty)
    for m in marks:
        ok = asm.state({m: (DELIM, "z", visit)}, "qk")
        bad = asm.state({m: (None, "s", ne)}, "qx")
        chk = asm.label("qc")
        asm.on(chk, m, None, back, ok)
        asm.on(chk, tuple(x for x in ALL if x != m), None, back, bad)
        asm.on(start, m, None, there, chk)
    # inner nodes
    for m in tuple(marks) + (0,):
        chk = asm.label("qc")
        asm.on(visit, m, None, there, chk)
        asm.on(chk, m, None, back, desc if m else blank_up)
        asm.on(chk, tuple(x for x in ALL if x != m), None, back, climb_ne)
    asm.on(desc, marks, None, "z", visit)
    asm.on(blank_up, 0, None, "u", up)
    asm.on(up, marks, None, "+", visit)
    asm.on(up, DELIM, None, "s", climb_eq)
    # climb to the anchored root and restore its mark from component b
    for tag, climb, out in (("e", climb_eq, eq), ("n", climb_ne, ne)):
        asm.on(climb, tuple(marks) + (0,), None, "u", climb)
        fetch = asm.label("qf" + tag)
        asm.on(climb, DELIM, None, there, fetch)
        for m in marks:
            restore = asm.state({DELIM: (m, "s", out)}, "qr")
            asm.on(fetch, m, None, back, restore)
    return start


def relabel_comp(asm: Asm, comp: int, mapping: dict, nxt: str, marks=DATA) -> str:
    """Rewrite every mark of a component through ``mapping`` (pre-order)."""
    asm.use(comp)
    start = asm.label("r0")
    asm.on(start, 0, None, "s", nxt)
    for m in marks:
        # the root is delimited; remember its new mark in the state
        done = asm.state({DELIM: (mapping.get(m, m), "s", nxt)}, "rd")
        inner_visit = asm.label("rv")
        inner_up = asm.label("ru")
        asm.on(start, m, DELIM, "z", inner_visit)
        for x in marks:
            asm.on(inner_visit, x, mapping.get(x, x), "z", inner_visit)
            asm.on(inner_up, x, None, "+", inner_visit)
        asm.on(inner_visit, 0, None, "u", inner_up)
        asm.on(inner_up, DELIM, None, "s", done)
    return start


def move_comp(asm: Asm, src: int, dst: int, nxt: str) -> str:
    """Copy ``src`` to blank ``dst`` then erase ``src``; ends at ``src`` root."""
    return copy_comp(asm, src, dst, erase_comp(asm, src, nxt))




# ================================================================ cursors


@dataclass(frozen=True)
class Cursor:
    """A position kept in ``layer`` over the data component ``data``."""

    data: int
    layer: int

    @property
    def to_data(self) -> tuple:
        return jmoves(self.layer, self.data)

    @property
    def from_data(self) -> tuple:
        return jmoves(self.data, self.layer)


def rooted(m: int) -> int:
    return m + ROOTED


CURSOR = (L_C, L_RC, rooted(L_C), rooted(L_RC))
AT_REGION_ROOT = (L_RC, rooted(L_RC))

Cases = dict  # marks -> (write, moves, next)


def at(cur: Cursor, cases: Cases, asm: Asm, hint: str = "at") -> str:
    """State applying ``cases`` to the cursor cell the head is on."""
    return asm.state(cases, hint)


def keep(nxt: str, moves=(), marks=CURSOR) -> Cases:
    return {tuple(marks): (None, moves, nxt)}


def climb(asm: Asm, on_root: Cases) -> str:
    """Up the thread to the layer root; ``on_root`` handles the root cell."""
    st = asm.label("cl")
    asm.on(st, (1, 2, 3, 4), None, "u", st)
    asm.add_cases(st, on_root)
    return st


def descend(asm: Asm, at_cursor: Cases) -> str:
    """From the layer root down the thread; ``at_cursor`` handles the cursor."""
    root, scan = asm.label("dr"), asm.label("ds")
    asm.on(root, (rooted(L_T), rooted(L_R)), None, "z", scan)
    asm.on(scan, 0, None, "+", scan)
    asm.on(scan, (L_T, L_R), None, "z", scan)
    for marks, case in at_cursor.items():
        if isinstance(marks, int):
            marks = (marks,)
        for m in marks:
            asm.on(root if m >= ROOTED else scan, m, *case)
    return root


def commute(asm: Asm, a: Cursor, b: Cursor, at_cursor: Cases) -> str:
    """From the cursor of ``a`` (any thread cell) to the cursor of ``b``."""
    asm.use(a.layer, b.layer)
    return climb(asm, {(6, 7, 8, 9): (None, jmoves(a.layer, b.layer), descend(asm, at_cursor))})


def op_down(asm: Asm, nxt: str, moves=()) -> Cases:
    """Cursor moves to child 0; the region root stays."""
    land = asm.state({0: (L_C, moves, nxt)}, "dn")
    return {L_C: (L_T, "z", land), L_RC: (L_R, "z", land),
            rooted(L_C): (rooted(L_T), "z", land), rooted(L_RC): (rooted(L_R), "z", land)}


def op_up(asm: Asm, nxt: str, at_root: str, moves=(), root_moves=()) -> Cases:
    """Cursor strictly below the region root moves to its parent; continues
    in ``at_root`` when the parent is the region root."""
    land = asm.state({L_T: (L_C, moves, nxt), rooted(L_T): (rooted(L_C), moves, nxt),
                      L_R: (L_RC, root_moves, at_root), rooted(L_R): (rooted(L_RC), root_moves, at_root)},
                     "up")
    return {L_C: (0, "u", land)}


def op_next(asm: Asm, nxt: str, moves=()) -> Cases:
    """Cursor moves to the next sibling slot, keeping its role."""
    land_c = asm.state({0: (L_C, moves, nxt)}, "nx")
    land_rc = asm.state({0: (L_RC, moves, nxt)}, "nx")
    return {L_C: (0, "+", land_c), L_RC: (0, "+", land_rc)}


def op_up_next(asm: Asm, nxt: str, at_root: str, moves=(), root_moves=()) -> Cases:
    """Cursor goes to its parent's next sibling slot; if the parent is the
    region root the cursor stops there instead and ``at_root`` follows."""
    land = asm.state({0: (L_C, moves, nxt)}, "un")
    mid = asm.state({L_T: (0, "+", land),
                     L_R: (L_RC, root_moves, at_root), rooted(L_R): (rooted(L_RC), root_moves, at_root)},
                    "um")
    return {L_C: (0, "u", mid)}


def op_root_down(asm: Asm, nxt: str, moves=()) -> Cases:
    """Region root and cursor together move to child 0."""
    land = asm.state({0: (L_RC, moves, nxt)}, "rd")
    return {L_RC: (L_T, "z", land), rooted(L_RC): (rooted(L_T), "z", land)}


def op_root_up(asm: Asm, nxt: str, moves=()) -> Cases:
    land = asm.state({L_T: (L_RC, moves, nxt), rooted(L_T): (rooted(L_RC), moves, nxt)}, "ru")
    return {L_RC: (0, "u", land)}


def op_clear(asm: Asm, nxt: str, moves=()) -> Cases:
    """Erase the thread from the cursor up; ``moves`` run at the layer root."""
    st = asm.label("cc")
    asm.on(st, (1, 2, 3, 4), 0, "u", st)
    asm.on(st, (6, 7, 8, 9), 0, moves, nxt)
    return {(L_C, L_RC): (0, "u", st), (rooted(L_C), rooted(L_RC)): (0, moves, nxt)}


def op_unwind(asm: Asm, nxt: str, moves=()) -> Cases:
    """Cursor returns to its region root."""
    st = asm.label("uw")
    asm.on(st, L_T, 0, "u", st)
    asm.on(st, L_R, L_RC, moves, nxt)
    asm.on(st, rooted(L_R), rooted(L_RC), moves, nxt)
    return {L_C: (0, "u", st), AT_REGION_ROOT: (None, moves, nxt)}


def op_rebase(asm: Asm, nxt: str) -> Cases:
    """Make the cursor cell the region root; ends at the layer root."""
    to_root = asm.label("rb")
    asm.on(to_root, (L_T,), None, "u", to_root)
    asm.on(to_root, rooted(L_T), None, "s", nxt)
    find_r = asm.label("rb")
    asm.on(find_r, L_T, None, "u", find_r)
    asm.on(find_r, L_R, L_T, "u", to_root)
    asm.on(find_r, rooted(L_R), rooted(L_T), "s", nxt)
    return {L_C: (L_RC, "u", find_r), AT_REGION_ROOT: (None, "s", climb(asm, {(6, 7, 8, 9): (None, "s", nxt)}))}


def set_root_cursor(asm: Asm, cur: Cursor, nxt: str, moves=()) -> str:
    """At the blank layer root: cursor and region root on the component root."""
    asm.use(cur.layer, cur.data)
    return asm.state({0: (rooted(L_RC), moves, nxt)}, "sr")


def clone(asm: Asm, src: Cursor, dst: Cursor, nxt: str, moves=()) -> Cases:
    """Copy the thread of ``src`` into the blank layer of ``dst``, with the
    region root of ``dst`` at the cursor of ``src``.

    Applies at the cursor of ``src``; ``moves`` run at the layer root of
    ``dst`` after its root mark is written.
    """
    asm.use(src.layer, dst.layer)
    there, back = jmoves(src.layer, dst.layer), jmoves(dst.layer, src.layer)
    walk = asm.label("kw")
    cases = {}
    for m in (L_C, L_RC):
        b = asm.state({m: (None, "u", walk)}, "kb")
        cases[m] = (None, there, asm.state({0: (L_RC, back, b)}, "kc"))
    for m in (rooted(L_C), rooted(L_RC)):
        cases[m] = (None, there, asm.state({0: (rooted(L_RC), moves, nxt)}, "kr"))
    for m in (L_T, L_R):
        b = asm.state({m: (None, "u", walk)}, "kb")
        asm.on(walk, m, None, there, asm.state({0: (L_T, back, b)}, "kt"))
    for m in (rooted(L_T), rooted(L_R)):
        asm.on(walk, m, None, there, asm.state({0: (rooted(L_T), moves, nxt)}, "kr"))
    return cases


# ================================================================ regions


def region_compare(asm: Asm, a: Cursor, b: Cursor, eq: str, ne: str, roots: bool = True) -> str:
    """Literal equality of the subtrees at the region roots of ``a`` and ``b``.

    Both cursors sit on their region roots; the head starts and ends on the
    cursor of ``a``. With ``roots=False`` the two root marks are not compared.
    """
    asm.use(a.layer, a.data, b.layer, b.data)
    other = {a: b, b: a}
    rd_down = {a: asm.label("pd"), b: asm.label("pd")}
    rd_next = {a: asm.label("px"), b: asm.label("px")}
    chk = {}

    def end_at_a(side: Cursor, target: str, moves=()) -> str:
        """Entered at the cursor of ``side`` (a region root)."""
        if side == a:
            return asm.state(keep(target, moves, AT_REGION_ROOT), "pe")
        return commute(asm, b, a, keep(target, (), AT_REGION_ROOT))

    def mismatch(y: Cursor) -> str:
        x = other[y]
        unwound_x = op_unwind(asm, ne) if x == a else op_unwind(asm, end_at_a(b, ne))
        unwind_y = asm.state(op_unwind(asm, commute(asm, y, x, unwound_x)), "pm")
        return unwind_y

    def after_node(x: Cursor) -> str:
        return asm.state(op_down(asm, rd_down[x], x.to_data), "pa")

    def after_blank(x: Cursor) -> str:
        y = other[x]
        done = end_at_a(y, eq)
        finish = commute(asm, x, y, op_up(asm, "__bad", done))
        return asm.state(op_up_next(asm, rd_next[x], finish, x.to_data), "pb")

    cache: dict = {}

    def once(key, build):
        if key not in cache:
            cache[key] = build()
        return cache[key]

    def check(y: Cursor, v: int) -> str:
        key = (y, v)
        if key not in chk:
            st = asm.label("pc")
            chk[key] = st
            follow = once(("node", y), lambda: after_node(y)) if v else \
                once(("blank", y), lambda: after_blank(y))
            asm.on(st, v, None, y.from_data, follow)
            asm.on(st, tuple(m for m in ALL if m != v), None, y.from_data,
                   once(("ne", y), lambda: mismatch(y)))
        return chk[key]

    for x in (a, b):
        y = other[x]
        for v in ALL:
            down_y = commute(asm, x, y, op_down(asm, check(y, v), y.to_data))
            asm.on(rd_down[x], v, None, x.from_data, down_y)
            next_y = commute(asm, x, y, op_up_next(asm, check(y, v), "__bad", y.to_data))
            asm.on(rd_next[x], v, None, x.from_data, next_y)

    if not roots:
        # pretend both roots matched as existing nodes, explorer a
        return asm.state(op_down(asm, rd_down[a], a.to_data), "p0")
    start, root_a = asm.label("p0"), asm.label("pr")
    asm.on(start, AT_REGION_ROOT, None, a.to_data, root_a)
    for v in ALL:
        rb = asm.label("pq")
        same = once(("node", b), lambda: after_node(b)) if v else end_at_a(b, eq)
        asm.on(rb, v, None, b.from_data, same)
        asm.on(rb, tuple(m for m in ALL if m != v), None, b.from_data,
               once(("root-ne",), lambda: end_at_a(b, ne)))
        asm.on(root_a, v, None, a.from_data, commute(asm, a, b, keep(rb, b.to_data, AT_REGION_ROOT)))
    return start


def region_copy(asm: Asm, s: Cursor, t: Cursor, done: str, root_write=None, write=None,
                skip=()) -> str:
    """Copy the subtree at the region root of ``s`` to that of ``t``.

    The target region root cell gets ``root_write`` (a mark, a function of the
    source root mark, or None to copy it; ``False`` leaves it untouched) and
    must have nothing below it. ``write`` maps the other marks likewise.
    Source nodes marked in ``skip`` are treated as absent. Both cursors sit on
    their region roots; the head starts and ends on the cursor of ``s``.
    """
    asm.use(s.layer, s.data, t.layer, t.data)

    def mapped(spec, v):
        if spec is None:
            return v
        return spec(v) if callable(spec) else spec

    rd_down, rd_next = asm.label("yd"), asm.label("yn")
    present = tuple(m for m in NONZERO if m not in skip)
    absent = (0,) + tuple(skip)
    back_down = asm.state(op_down(asm, rd_down, s.to_data), "yb")
    resume = commute(asm, t, s, op_down(asm, rd_down, s.to_data))
    writers = {}

    def writer(v):
        if v not in writers:
            writers[v] = asm.state({0: (mapped(write, v), t.from_data, resume)}, "yw")
        return writers[v]

    # t climbs one level; the source already moved on and gets read next
    up_then_read = commute(asm, t, s, keep(rd_next, s.to_data, (L_C, rooted(L_C))))
    t_up = commute(asm, s, t, op_up(asm, up_then_read, "__bad"))
    end_s = commute(asm, t, s, keep(done, (), AT_REGION_ROOT))
    t_up_end = commute(asm, s, t, op_up(asm, "__bad", end_s))
    for v in present:
        asm.on(rd_down, v, None, s.from_data, commute(asm, s, t, op_down(asm, writer(v), t.to_data)))
        asm.on(rd_next, v, None, s.from_data, commute(asm, s, t, op_next(asm, writer(v), t.to_data)))
    asm.on(rd_down, absent, None, s.from_data, asm.state(op_up_next(asm, rd_next, done, s.to_data), "yu"))
    asm.on(rd_next, absent, None, s.from_data, asm.state(op_up_next(asm, t_up, t_up_end), "yv"))

    start, root_s = asm.label("y0"), asm.label("yr")
    asm.on(start, AT_REGION_ROOT, None, s.to_data, root_s)
    for v in NONZERO:
        if root_write is False:
            after_root = back_down
            asm.on(root_s, v, None, s.from_data, after_root)
            continue
        wr = asm.state({ALL: (mapped(root_write, v), t.from_data,
                              commute(asm, t, s, op_down(asm, rd_down, s.to_data)))}, "yr")
        asm.on(root_s, v, None, s.from_data, commute(asm, s, t, keep(wr, t.to_data, AT_REGION_ROOT)))
    return start


def region_erase(asm: Asm, cur: Cursor, done: str) -> str:
    """Erase everything strictly below the region root (post-order).

    Starts and ends on the cursor, which sits on the region root.
    """
    asm.use(cur.layer, cur.data)
    rd = asm.label("ed")
    erase = asm.label("ee")
    down = asm.state(op_down(asm, rd, cur.to_data), "ea")
    asm.on(rd, NONZERO, None, cur.from_data, down)
    asm.on(rd, 0, None, cur.from_data, asm.state(op_up(asm, erase, done, cur.to_data), "eu"))
    asm.on(erase, NONZERO, 0, cur.from_data, asm.state(op_next(asm, rd, cur.to_data), "en"))
    return down


def find_blank_child(asm: Asm, cur: Cursor, nxt: str) -> str:
    """Move region root and cursor from a node to its first blank child slot.

    Starts on the cursor; ends on the cursor with the head in the layer.
    """
    rd = asm.label("fb")
    step = asm.state(op_next(asm, rd, cur.to_data), "fn")
    asm.on(rd, NONZERO, None, cur.from_data, step)
    asm.on(rd, 0, None, cur.from_data, nxt)
    return asm.state(op_root_down(asm, rd, cur.to_data), "f0")


def find_mark(asm: Asm, cur: Cursor, targets, found: str, missing: str) -> str:
    """Pre-order search of the data component for a cell marked in
    ``targets``; the cursor starts as the region root on the component root.

    On success the found cell becomes the region root and the head is on the
    layer root; otherwise the head is on the cursor (the component root).
    """
    targets = tuple(targets)
    rd = asm.label("fm")
    rebase = asm.state(op_rebase(asm, found), "fr")
    down = asm.state(op_down(asm, rd, cur.to_data), "fd")
    others = tuple(m for m in NONZERO if m not in targets)
    asm.on(rd, targets, None, cur.from_data, rebase)
    asm.on(rd, others, None, cur.from_data, down)
    asm.on(rd, 0, None, cur.from_data, asm.state(op_up_next(asm, rd, missing, cur.to_data), "fu"))
    start = asm.label("f0")
    asm.on(start, AT_REGION_ROOT, None, cur.to_data, asm.state({
        targets: (None, cur.from_data, climb(asm, {(6, 7, 8, 9): (None, "s", found)})),
        others: (None, cur.from_data, down),
        0: (None, cur.from_data, missing)}, "fz"))
    return start
