"""Set Turing machine tables, the step relation, and bounded runs.

The reference ``step`` works on explicit ``Configuration`` values and is used
as an oracle in tests. ``run`` uses a compiled table and a tape stored as a
trie of paths, where every path node keeps the marks of all components at
that path; jumps between components are then O(1).
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Sequence, TextIO

from .hfset import HFSet, seeded_chooser
from .ordinal import Address, format_path, least_cofinal, ord_succ, pointwise_limit, weak_liminf, UNDEFINED
from .tapecode import (
    MARK_TEXT,
    NUM_MARKS,
    Mark,
    clean,
    decode_marking,
    encode_args,
    is_well_formed,
    parse_mark,
)

HALT = "H"


class Move(Enum):
    STAY = "s"
    ZERO = "z"
    UP = "u"
    NEXT = "+"
    UP_NEXT = "u+"
    JUMP_PLUS = "j+"
    JUMP_MINUS = "j-"

    def __str__(self):
        return self.value


_MOVE_CODE = {mv: i for i, mv in enumerate(Move)}
_MOVE_LIST = list(Move)


@dataclass(frozen=True)
class Rule:
    state: str
    read: Mark
    write: Mark
    move: Move
    next: str

    @property
    def key(self) -> str:
        return f"{self.state}/{MARK_TEXT[self.read]}"


@dataclass
class MachineTable:
    """Deterministic rules keyed by (state, mark); ``H`` has no rules."""

    start: str
    rules: dict = field(default_factory=dict)  # (state, Mark) -> (Mark, Move, state)
    name: str = ""
    width: int = 1  # components the machine may touch, counted from its base

    def add(self, state: str, read: Mark, write: Mark, move: Move, nxt: str) -> None:
        if state == HALT:
            raise ValueError("the halt state H cannot have rules")
        key = (state, Mark(read))
        if key in self.rules:
            raise ValueError(f"duplicate rule for state {state!r} mark {MARK_TEXT[Mark(read)]}")
        self.rules[key] = (Mark(write), Move(move), nxt)

    def lookup(self, state: str, mark: Mark):
        return self.rules.get((state, Mark(mark)))

    def states(self) -> list:
        seen = {self.start: None}
        for (s, _), (_, _, n) in self.rules.items():
            seen.setdefault(s, None)
            seen.setdefault(n, None)
        return list(seen)

    def rule_list(self) -> list:
        return [Rule(s, m, w, mv, n) for (s, m), (w, mv, n) in self.rules.items()]

    def __len__(self):
        return len(self.rules)

    def compiled(self) -> "CompiledTable":
        ct = getattr(self, "_compiled", None)
        if ct is None or ct.version != len(self.rules):
            ct = CompiledTable(self)
            self._compiled = ct
        return ct


# ---------------------------------------------------------------- .stm format

_RULE_RE = re.compile(r"^(\S+)\s+(\S+)\s*=>\s*(\S+)\s+(\S+)\s+(\S+)$")


class TableSyntaxError(ValueError):
    def __init__(self, lineno: int, msg: str):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


def parse_table(text: str, name: str = "") -> MachineTable:
    """Parse ``start <state>`` then ``state mark => mark' move state'`` lines."""
    table = None
    pending = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("start"):
            parts = line.split()
            if len(parts) != 2 or table is not None:
                raise TableSyntaxError(lineno, "expected a single 'start <state>' header")
            if parts[1] == HALT:
                raise TableSyntaxError(lineno, "the start state cannot be H")
            table = MachineTable(parts[1], name=name)
            continue
        m = _RULE_RE.match(line)
        if not m:
            raise TableSyntaxError(lineno, f"cannot parse rule {line!r}")
        st, rd, wr, mv, nx = m.groups()
        try:
            rd_m, wr_m = parse_mark(rd), parse_mark(wr)
            move = Move(mv)
        except ValueError as exc:
            raise TableSyntaxError(lineno, str(exc)) from None
        pending.append((lineno, st, rd_m, wr_m, move, nx))
    if table is None:
        if pending:
            raise TableSyntaxError(pending[0][0], "rules before the 'start' header")
        table = MachineTable("l0", name=name)
    for lineno, st, rd_m, wr_m, move, nx in pending:
        try:
            table.add(st, rd_m, wr_m, move, nx)
        except ValueError as exc:
            raise TableSyntaxError(lineno, str(exc)) from None
    return table


def format_table(table: MachineTable) -> str:
    lines = [f"start {table.start}"]
    order = {s: i for i, s in enumerate(table.states())}
    for (s, m), (w, mv, n) in sorted(table.rules.items(), key=lambda kv: (order[kv[0][0]], kv[0][1])):
        lines.append(f"{s} {MARK_TEXT[m]} => {MARK_TEXT[w]} {mv.value} {n}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- semantics


class CrashReason(Enum):
    NO_RULE = "NoRule"
    ROOT_VIOLATION = "RootViolation"
    J_MINUS_AT_ZERO = "JMinusAtZero"
    BAD_HALT = "BadHalt"


class MoveError(Exception):
    def __init__(self, reason: CrashReason, msg: str = ""):
        super().__init__(msg or reason.value)
        self.reason = reason


class StepError(Exception):
    def __init__(self, reason: CrashReason, msg: str = ""):
        super().__init__(msg or reason.value)
        self.reason = reason


@dataclass(frozen=True)
class Configuration:
    time: int
    head: Address
    tape: Mapping
    state: str


@dataclass(frozen=True)
class Halted:
    final: dict
    steps: int


@dataclass(frozen=True)
class Crashed:
    reason: CrashReason
    at: Configuration
    detail: str = ""


@dataclass(frozen=True)
class FuelExhausted:
    last: Configuration


def apply_move(addr: Address, move: Move) -> Address:
    comp, path = addr[0], tuple(addr[1])
    move = Move(move)
    if move is Move.STAY:
        return Address(comp, path)
    if move is Move.ZERO:
        return Address(comp, path + (0,))
    if move is Move.JUMP_PLUS:
        return Address(comp + 1, path)
    if move is Move.JUMP_MINUS:
        if comp == 0:
            raise MoveError(CrashReason.J_MINUS_AT_ZERO)
        return Address(comp - 1, path)
    if not path:
        raise MoveError(CrashReason.ROOT_VIOLATION, f"move {move.value} at a root")
    if move is Move.UP:
        return Address(comp, path[:-1])
    if move is Move.NEXT:
        return Address(comp, path[:-1] + (ord_succ(path[-1]),))
    if len(path) < 2:
        raise MoveError(CrashReason.ROOT_VIOLATION, "u+ needs a grandparent")
    return Address(comp, path[:-2] + (ord_succ(path[-2]),))


def initial_configuration(table: MachineTable, marking: Mapping) -> Configuration:
    return Configuration(0, Address(0, ()), clean(marking), table.start)


def step(config: Configuration, table: MachineTable) -> Configuration:
    """One transition; raises StepError for a missing rule or bad move."""
    if config.state == HALT:
        raise ValueError("halted configurations do not step")
    mark = Mark(config.tape.get(config.head, Mark.BLANK))
    rule = table.lookup(config.state, mark)
    if rule is None:
        raise StepError(CrashReason.NO_RULE, f"no rule for ({config.state}, {MARK_TEXT[mark]})")
    write, move, nxt = rule
    try:
        head = apply_move(config.head, move)
    except MoveError as exc:
        raise StepError(exc.reason, str(exc)) from None
    tape = dict(config.tape)
    if write:
        tape[config.head] = write
    else:
        tape.pop(config.head, None)
    return Configuration(config.time + 1, head, tape, nxt)


def _halt_outcome(config: Configuration):
    if config.head != Address(0, ()):
        return Crashed(CrashReason.BAD_HALT, config, "halted away from the 0-root")
    if not is_well_formed(config.tape):
        return Crashed(CrashReason.BAD_HALT, config, "halted on a marking that is not well formed")
    return Halted(dict(config.tape), config.time)


def run_reference(table: MachineTable, marking: Mapping, fuel: int):
    """Run by repeated ``step``; slow, used to cross-check ``run``."""
    config = initial_configuration(table, marking)
    while config.time < fuel:
        try:
            config = step(config, table)
        except StepError as exc:
            return Crashed(exc.reason, config, str(exc))
        if config.state == HALT:
            return _halt_outcome(config)
    return FuelExhausted(config)


# ---------------------------------------------------------------- fast runner

_HALT_BASE = -NUM_MARKS


class CompiledTable:
    def __init__(self, table: MachineTable):
        self.version = len(table.rules)
        self.names = table.states()
        if HALT in self.names:
            self.names.remove(HALT)
        self.index = {s: i for i, s in enumerate(self.names)}
        self.rules = [None] * (len(self.names) * NUM_MARKS)
        for (s, m), (w, mv, n) in table.rules.items():
            nbase = _HALT_BASE if n == HALT else self.index[n] * NUM_MARKS
            self.rules[self.index[s] * NUM_MARKS + int(m)] = (int(w), _MOVE_CODE[mv], nbase)
        self.start = self.index[table.start] * NUM_MARKS

    def state_name(self, base: int) -> str:
        return HALT if base == _HALT_BASE else self.names[base // NUM_MARKS]


class Tape:
    """Trie of paths; node = [marks by component, parent, index, children]."""

    def __init__(self, marking: Mapping = ()):
        self.root = [{}, None, None, {}]
        for addr, m in dict(marking).items():
            if m:
                self.node(addr[1], create=True)[0][addr[0]] = int(m)

    def node(self, path, create=False):
        nd = self.root
        for i in path:
            ch = nd[3].get(i)
            if ch is None:
                if not create:
                    return None
                ch = [{}, nd, i, {}]
                nd[3][i] = ch
            nd = ch
        return nd

    @staticmethod
    def path_of(nd) -> tuple:
        out = []
        while nd[1] is not None:
            out.append(nd[2])
            nd = nd[1]
        return tuple(reversed(out))

    def marking(self) -> dict:
        out = {}
        stack = [(self.root, ())]
        while stack:
            nd, path = stack.pop()
            for comp, m in nd[0].items():
                if m:
                    out[Address(comp, path)] = Mark(m)
            for i, ch in nd[3].items():
                stack.append((ch, path + (i,)))
        return out


def _snapshot(tape: Tape, nd, comp, base, ct, steps) -> Configuration:
    return Configuration(steps, Address(comp, Tape.path_of(nd)), tape.marking(), ct.state_name(base))


def run(table: MachineTable, marking: Mapping, fuel: int, trace: TextIO | None = None):
    """Run from the 0-root in the start state for at most ``fuel`` steps."""
    if fuel < 1:
        raise ValueError("fuel must be at least 1")
    ct = table.compiled()
    tape = Tape(marking)
    if trace is not None:
        return _run_traced(ct, tape, fuel, trace)
    rules = ct.rules
    nd = tape.root
    comp = 0
    base = ct.start
    steps = 0
    crash = None
    while steps < fuel:
        marks = nd[0]
        m = marks.get(comp, 0)
        r = rules[base + m]
        if r is None:
            crash = (CrashReason.NO_RULE, f"no rule for ({ct.state_name(base)}, {MARK_TEXT[Mark(m)]})")
            break
        w, mv, nb = r
        if mv == 1:  # z
            if w != m:
                marks[comp] = w
            ch = nd[3].get(0)
            if ch is None:
                ch = [{}, nd, 0, {}]
                nd[3][0] = ch
            nd = ch
        elif mv == 0:  # s
            if w != m:
                marks[comp] = w
        elif mv == 5:  # j+
            if w != m:
                marks[comp] = w
            comp += 1
        elif mv == 6:  # j-
            if comp == 0:
                crash = (CrashReason.J_MINUS_AT_ZERO, "j- at component 0")
                break
            if w != m:
                marks[comp] = w
            comp -= 1
        elif mv == 2:  # u
            p = nd[1]
            if p is None:
                crash = (CrashReason.ROOT_VIOLATION, "u at a root")
                break
            if w != m:
                marks[comp] = w
            nd = p
        else:  # + or u+
            p = nd[1]
            if p is None:
                crash = (CrashReason.ROOT_VIOLATION, f"{_MOVE_LIST[mv].value} at a root")
                break
            if mv == 4:
                if p[1] is None:
                    crash = (CrashReason.ROOT_VIOLATION, "u+ needs a grandparent")
                    break
                i = p[2]
                p = p[1]
            else:
                i = nd[2]
            if w != m:
                marks[comp] = w
            i = i + 1 if type(i) is int else ord_succ(i)
            sib = p[3].get(i)
            if sib is None:
                sib = [{}, p, i, {}]
                p[3][i] = sib
            nd = sib
        base = nb
        steps += 1
        if nb < 0:
            break
    if crash is not None:
        return Crashed(crash[0], _snapshot(tape, nd, comp, base, ct, steps), crash[1])
    if base == _HALT_BASE:
        return _finish(tape, nd, comp, base, ct, steps)
    return FuelExhausted(_snapshot(tape, nd, comp, base, ct, steps))


def _finish(tape, nd, comp, base, ct, steps):
    final = tape.marking()
    if nd is not tape.root or comp != 0:
        return Crashed(CrashReason.BAD_HALT, _snapshot(tape, nd, comp, base, ct, steps),
                       "halted away from the 0-root")
    if not is_well_formed(final):
        return Crashed(CrashReason.BAD_HALT, Configuration(steps, Address(0, ()), final, HALT),
                       "halted on a marking that is not well formed")
    return Halted(final, steps)


def format_trace_line(time, comp, path, state, key, written, move) -> str:
    return f"{time} {comp} {format_path(path)} {state} {key} {MARK_TEXT[Mark(written)]} {move}"


def _run_traced(ct: CompiledTable, tape: Tape, fuel: int, out: TextIO):
    """Same semantics as ``run``; writes one line per step.

    A line holds the time and head before the step, the state entered, the
    (state/mark) rule key, the mark written and the move.
    """
    nd, comp, base, steps = tape.root, 0, ct.start, 0
    while steps < fuel:
        m = nd[0].get(comp, 0)
        r = ct.rules[base + m]
        name = ct.state_name(base)
        if r is None:
            return Crashed(CrashReason.NO_RULE, _snapshot(tape, nd, comp, base, ct, steps),
                           f"no rule for ({name}, {MARK_TEXT[Mark(m)]})")
        w, mv, nb = r
        path = Tape.path_of(nd)
        try:
            new = apply_move(Address(comp, path), _MOVE_LIST[mv])
        except MoveError as exc:
            return Crashed(exc.reason, _snapshot(tape, nd, comp, base, ct, steps), str(exc))
        out.write(format_trace_line(steps, comp, path, ct.state_name(nb), f"{name}/{MARK_TEXT[Mark(m)]}",
                                    w, _MOVE_LIST[mv].value) + "\n")
        nd[0][comp] = w
        comp = new[0]
        nd = tape.node(new[1], create=True)
        base = nb
        steps += 1
        if nb < 0:
            return _finish(tape, nd, comp, base, ct, steps)
    return FuelExhausted(_snapshot(tape, nd, comp, base, ct, steps))


# ---------------------------------------------------------------- limits


def limit_config(positions, states, cells: Mapping, time=None):
    """Configuration at a limit stage, or UNDEFINED if a cell has no limit."""
    lengths = {positions.length, states.length} | {s.length for s in cells.values()}
    if len(lengths) != 1:
        raise ValueError("all sequences must share the same limit length")
    tape = {}
    for addr, seq in cells.items():
        v = pointwise_limit(seq)
        if v is UNDEFINED:
            return UNDEFINED
        if v:
            tape[Address(addr[0], tuple(addr[1]))] = Mark(v)
    return Configuration(time if time is not None else positions.length,
                         weak_liminf(positions), tape, least_cofinal(states))


# ---------------------------------------------------------------- F_M


class InvarianceError(Exception):
    """Decoded outputs differ between encodings of the same arguments."""


class RunFailed(Exception):
    def __init__(self, outcome, seed: int):
        super().__init__(f"run under seed {seed} did not halt properly: {describe_outcome(outcome)}")
        self.outcome = outcome
        self.seed = seed


def describe_outcome(outcome) -> str:
    if isinstance(outcome, Halted):
        return f"halted after {outcome.steps} steps"
    if isinstance(outcome, Crashed):
        at = outcome.at
        return (f"crashed ({outcome.reason.value}) at time {at.time}, head "
                f"{at.head[0]}:{format_path(at.head[1])}, state {at.state}"
                + (f": {outcome.detail}" if outcome.detail else ""))
    return f"fuel exhausted at time {outcome.last.time} in state {outcome.last.state}"


def decode_output(final: Mapping):
    values = decode_marking(final)
    return values[0] if len(values) == 1 else values


def fm_eval(table: MachineTable, args: Sequence[HFSet], num_codes: int = 3, fuel: int = 10**6,
            seeds: Iterable[int] | None = None):
    """The value computed on ``args``, checked across several encodings."""
    if num_codes < 1:
        raise ValueError("num_codes must be at least 1")
    seeds = list(seeds) if seeds is not None else list(range(num_codes))
    results = []
    for seed in seeds:
        outcome = run(table, encode_args(args, seeded_chooser(seed)), fuel)
        if not isinstance(outcome, Halted):
            raise RunFailed(outcome, seed)
        results.append((seed, decode_output(outcome.final)))
    first = results[0][1]
    for seed, value in results[1:]:
        if value != first:
            raise InvarianceError(f"seed {results[0][0]} gives {first}, seed {seed} gives {value}")
    return first
