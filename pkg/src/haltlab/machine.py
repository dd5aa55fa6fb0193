"""Deterministic Turing machines on a two-way infinite, sparse tape.

Machine files are line-oriented text::

    # one-rule machine: write a stroke, halt
    name: write_one
    blank: _
    start: q0
    halt: h
    q0 _ -> 1 S h

Headers are ``name:``, ``blank:``, ``start:``, ``halt:`` (zero or more
state names) and an optional ``symbols:`` listing alphabet symbols that
appear in no transition.  Every other non-comment line is a transition
``state symbol -> write move next`` with move one of L, R, S.  Symbols are
single printable characters; states are bare words.  At most one transition
per (state, symbol) pair; a missing pair means the machine jams, which is
treated as halting.

Numeric I/O uses a unary convention: the natural k is written as k+1
stroke symbols ``1``, consecutive arguments separated by one blank cell,
the whole input starting at cell 0 with the head on cell 0.  A halted tape
whose non-blank cells form one contiguous block of strokes decodes to
block length minus one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

LEFT = "L"
RIGHT = "R"
STAY = "S"
MOVES = (LEFT, RIGHT, STAY)

STROKE = "1"

# Interior blank marker used in canonical tape strings.  Reserved: machine
# alphabets may not contain it, so canonical strings stay unambiguous.
GAP = "␣"


class MachineError(Exception):
    """Base for everything raised by this package's machine layer."""


class MachineFormatError(MachineError):
    """Malformed machine file.  Carries the offending 1-based line number."""

    def __init__(self, line_no: int | None, message: str):
        self.line_no = line_no
        where = f"line {line_no}: " if line_no is not None else ""
        super().__init__(where + message)


class InvalidInputError(MachineError):
    """Input string uses a symbol outside the machine's alphabet."""


class UnknownStateError(MachineError):
    """Configuration references a state the machine does not declare."""


class MalformedOutputError(MachineError):
    """Halted tape does not follow the unary output convention."""


@dataclass(frozen=True)
class MachineSpec:
    """Immutable machine description.

    transitions maps (state, symbol) -> (write, move, next).  Determinism
    is structural: a dict key admits one rule.  Halting states carry no
    transitions.
    """

    name: str
    blank: str
    symbols: frozenset[str]
    states: frozenset[str]
    start: str
    halting: frozenset[str]
    transitions: Mapping[tuple[str, str], tuple[str, str, str]]

    def __post_init__(self):
        for sym in self.symbols:
            if len(sym) != 1 or sym.isspace() or sym == GAP or not sym.isprintable():
                raise MachineError(f"bad alphabet symbol {sym!r}")
        if self.blank not in self.symbols:
            raise MachineError("blank symbol must belong to the alphabet")
        if self.start not in self.states:
            raise MachineError(f"start state {self.start!r} not declared")
        if not self.halting <= self.states:
            raise MachineError("halting states must be a subset of the states")
        for (state, sym), (write, move, nxt) in self.transitions.items():
            if state not in self.states or nxt not in self.states:
                raise MachineError(f"transition references unknown state: {state} or {nxt}")
            if sym not in self.symbols or write not in self.symbols:
                raise MachineError(f"transition references unknown symbol: {sym!r} or {write!r}")
            if move not in MOVES:
                raise MachineError(f"bad move {move!r}")
            if state in self.halting:
                raise MachineError(f"halting state {state!r} may not carry transitions")

    @classmethod
    def build(
        cls,
        name: str,
        blank: str,
        start: str,
        halting: Iterable[str],
        transitions: Mapping[tuple[str, str], tuple[str, str, str]],
        extra_symbols: Iterable[str] = (),
    ) -> "MachineSpec":
        """Derive the state and symbol sets from the pieces that mention them."""
        halting = frozenset(halting)
        states = {start} | halting
        symbols = {blank} | set(extra_symbols)
        for (state, sym), (write, _move, nxt) in transitions.items():
            states |= {state, nxt}
            symbols |= {sym, write}
        return cls(name, blank, frozenset(symbols), frozenset(states), start,
                   halting, dict(transitions))


@dataclass(frozen=True)
class Configuration:
    """Instantaneous description: control state, sparse tape, head position.

    The tape maps cell index to a non-blank symbol; blank cells are absent.
    """

    state: str
    tape: Mapping[int, str]
    head: int
    step: int = 0


@dataclass(frozen=True)
class Halted:
    steps: int
    final: Configuration


@dataclass(frozen=True)
class SelfTerminated:
    cycle_entry_step: int
    period: int


@dataclass(frozen=True)
class BudgetExhausted:
    steps: int
    final: Configuration


RunOutcome = Halted | SelfTerminated | BudgetExhausted


@dataclass(frozen=True)
class AlreadyHalted:
    """step() result when the configuration's state is halting."""


@dataclass(frozen=True)
class Stuck:
    """step() result when no transition matches; treated as halting."""


def canonicalize(c: Configuration) -> tuple[str, str, int]:
    """Translation-invariant key: (state, trimmed tape, head offset).

    The tape component runs from the leftmost to the rightmost non-blank
    cell with interior blanks shown as GAP; the head offset is relative to
    the leftmost non-blank cell.  An all-blank tape canonicalizes to
    (state, "", 0) wherever the head sits.
    """
    if not c.tape:
        return (c.state, "", 0)
    lo = min(c.tape)
    hi = max(c.tape)
    cells = "".join(c.tape.get(i, GAP) for i in range(lo, hi + 1))
    return (c.state, cells, c.head - lo)


def step(spec: MachineSpec, c: Configuration):
    """One transition.  Returns the next Configuration, or AlreadyHalted /
    Stuck when no step is possible."""
    if c.state not in spec.states:
        raise UnknownStateError(c.state)
    if c.state in spec.halting:
        return AlreadyHalted()
    sym = c.tape.get(c.head, spec.blank)
    rule = spec.transitions.get((c.state, sym))
    if rule is None:
        return Stuck()
    write, move, nxt = rule
    tape = dict(c.tape)
    if write == spec.blank:
        tape.pop(c.head, None)
    else:
        tape[c.head] = write
    head = c.head + (move == RIGHT) - (move == LEFT)
    return Configuration(nxt, tape, head, c.step + 1)


def initial_configuration(spec: MachineSpec, input: str = "") -> Configuration:
    for ch in input:
        if ch not in spec.symbols:
            raise InvalidInputError(f"symbol {ch!r} not in alphabet of {spec.name}")
    tape = {i: ch for i, ch in enumerate(input) if ch != spec.blank}
    return Configuration(spec.start, tape, 0, 0)


def run(spec: MachineSpec, input: str = "", budget: int = 10**5) -> RunOutcome:
    """Iterate transitions until halt or stuck (Halted) or until budget
    steps elapse (BudgetExhausted).  Never loop-checks; see guard.guarded_run
    for the totalized variant."""
    if budget < 0:
        raise ValueError("budget must be non-negative")
    start_cfg = initial_configuration(spec, input)
    tape = dict(start_cfg.tape)
    state = spec.start
    head = 0
    steps = 0
    blank = spec.blank
    halting = spec.halting
    trans = spec.transitions
    while True:
        if state in halting:
            return Halted(steps, Configuration(state, tape, head, steps))
        rule = trans.get((state, tape.get(head, blank)))
        if rule is None:
            return Halted(steps, Configuration(state, tape, head, steps))
        if steps >= budget:
            return BudgetExhausted(steps, Configuration(state, tape, head, steps))
        write, move, state = rule
        if write == blank:
            tape.pop(head, None)
        else:
            tape[head] = write
        head += (move == RIGHT) - (move == LEFT)
        steps += 1


def encode_unary_input(values: Iterable[int], blank: str = "_") -> str:
    """Naturals to tape text: k becomes k+1 strokes, arguments separated by
    one blank cell."""
    parts = []
    for k in values:
        if k < 0:
            raise ValueError("unary encoding covers naturals only")
        parts.append(STROKE * (k + 1))
    return blank.join(parts)


def decode_unary_output(tape: Mapping[int, str]) -> int:
    """Read one natural off a halted tape.

    The non-blank cells must form a single contiguous block of strokes;
    the value is the block length minus one.
    """
    if not tape:
        raise MalformedOutputError("empty tape holds no unary value")
    lo = min(tape)
    hi = max(tape)
    if hi - lo + 1 != len(tape):
        raise MalformedOutputError("non-blank cells are not contiguous")
    if any(sym != STROKE for sym in tape.values()):
        raise MalformedOutputError("tape holds non-stroke symbols")
    return hi - lo


def _header(line: str) -> tuple[str, str] | None:
    head, sep, rest = line.partition(":")
    if sep and " " not in head.strip() and head.strip():
        return head.strip(), rest.strip()
    return None


def parse_machine(text: str, name_hint: str = "machine") -> MachineSpec:
    """Parse the machine file format.  Errors carry 1-based line numbers."""
    name = name_hint
    blank: str | None = None
    start: str | None = None
    halting: list[str] = []
    extra: list[str] = []
    transitions: dict[tuple[str, str], tuple[str, str, str]] = {}
    rule_lines: dict[tuple[str, str], int] = {}
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        header = _header(line)
        if header is not None:
            key, value = header
            if key == "name":
                name = value
            elif key == "blank":
                if len(value) != 1:
                    raise MachineFormatError(no, f"blank must be one character, got {value!r}")
                blank = value
            elif key == "start":
                start = value
            elif key == "halt":
                halting.extend(value.split())
            elif key == "symbols":
                extra.extend(value.split())
            else:
                raise MachineFormatError(no, f"unknown header {key!r}")
            continue
        fields = line.split()
        if len(fields) != 6 or fields[2] != "->":
            raise MachineFormatError(no, f"expected 'state symbol -> write move next', got {line!r}")
        state, sym, _, write, move, nxt = fields
        for s in (sym, write):
            if len(s) != 1:
                raise MachineFormatError(no, f"symbols are single characters, got {s!r}")
        if move not in MOVES:
            raise MachineFormatError(no, f"move must be L, R or S, got {move!r}")
        key = (state, sym)
        if key in transitions:
            raise MachineFormatError(
                no, f"duplicate transition for ({state}, {sym}); first at line {rule_lines[key]}")
        transitions[key] = (write, move, nxt)
        rule_lines[key] = no
    if blank is None:
        raise MachineFormatError(None, "missing 'blank:' header")
    if start is None:
        raise MachineFormatError(None, "missing 'start:' header")
    try:
        return MachineSpec.build(name, blank, start, halting, transitions, extra)
    except MachineError as exc:
        raise MachineFormatError(None, str(exc)) from exc


def load_machine(path) -> MachineSpec:
    from pathlib import Path

    p = Path(path)
    return parse_machine(p.read_text(), name_hint=p.stem)


def format_machine(spec: MachineSpec) -> str:
    """Inverse of parse_machine, up to header order and comments."""
    lines = [f"name: {spec.name}", f"blank: {spec.blank}", f"start: {spec.start}"]
    lines.append("halt: " + " ".join(sorted(spec.halting)) if spec.halting else "halt:")
    used = {spec.blank}
    for (state, sym), (write, _m, _n) in spec.transitions.items():
        used |= {sym, write}
    spare = sorted(spec.symbols - used)
    if spare:
        lines.append("symbols: " + " ".join(spare))
    for (state, sym), (write, move, nxt) in sorted(spec.transitions.items()):
        lines.append(f"{state} {sym} -> {write} {move} {nxt}")
    return "\n".join(lines) + "\n"
