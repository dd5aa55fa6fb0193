"""Measured properties, their logs, and next-value estimates.

A property table maps Goedel numbers of property names to value rules,
either a closed form over (k, t) or a machine run on the unary-encoded
pair.  Measuring a key outside the table, or one whose machine
self-terminates, yields the sentinel UndefinedHolds: the relation
"property k is undefined for this particle" holds, so relations stay
functions.  Budget exhaustion is surfaced separately as Unresolved and is
never folded into either definite answer.

Measurement logs serialize as a header line ``# particle=<id>
property=<k>`` followed by tab-separated ``t<TAB>m`` records in strictly
increasing t.  Prediction treats the recorded values positionally: the
candidate next value of a log of length n is beta(b, c, n) for each (b, c)
pair consistent with positions 0..n-1, weighted by how many consistent
pairs produce it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Mapping, Sequence

from .godel import Alphabet, beta_enumerate_consistent, beta_value, decode_string, encode_string
from .guard import guarded_run
from .machine import (
    BudgetExhausted,
    Halted,
    MachineSpec,
    SelfTerminated,
    decode_unary_output,
    encode_unary_input,
    load_machine,
)

HOLDS = "holds"
FAILS = "fails"
UNRESOLVED = "unresolved"

DETERMINISTIC = "deterministic"
RANDOM = "random"
INSUFFICIENT = "insufficient"


class UniverseError(Exception):
    """Base for measurement-layer failures."""


class TimestampCollisionError(UniverseError):
    """Two logs claim different values for the same instant."""


class MixedSubjectError(UniverseError):
    """Logs describe different particles or properties."""


class LogFormatError(UniverseError):
    """Malformed log file; carries the offending 1-based line number."""

    def __init__(self, line_no: int | None, message: str):
        self.line_no = line_no
        where = f"line {line_no}: " if line_no is not None else ""
        super().__init__(where + message)


@dataclass(frozen=True)
class ClosedForm:
    """Value rule computed directly from (k, t)."""

    fn: Callable[[int, int], int]
    label: str = "closed-form"


@dataclass(frozen=True)
class MachineRule:
    """Value rule computed by running a machine on unary (k, t)."""

    spec: MachineSpec


ValueRule = ClosedForm | MachineRule


@dataclass(frozen=True)
class Value:
    m: int


@dataclass(frozen=True)
class UndefinedHolds:
    """The measured relation is 'undefined', which itself holds."""


@dataclass(frozen=True)
class Unresolved:
    budget: int


MeasurementResult = Value | UndefinedHolds | Unresolved


class PropertyTable:
    """Property rules keyed by Goedel numbers over a registered language."""

    def __init__(self, alphabet: Alphabet, entries: Mapping[int, ValueRule] | None = None):
        self.alphabet = alphabet
        self.entries: dict[int, ValueRule] = {}
        for k, rule in (entries or {}).items():
            self.add_code(k, rule)

    def add_code(self, k: int, rule: ValueRule) -> None:
        name = decode_string(k, self.alphabet)
        if name is None:
            raise UniverseError(f"key {k} does not decode to a property name")
        if k in self.entries:
            raise UniverseError(f"property {name!r} (code {k}) already registered")
        self.entries[k] = rule

    def add(self, name: str, rule: ValueRule) -> int:
        """Register a rule under the code of its name; returns the code."""
        k = encode_string(name, self.alphabet)
        if k in self.entries:
            raise UniverseError(f"property {name!r} (code {k}) already registered")
        self.entries[k] = rule
        return k

    def code_of(self, name: str) -> int:
        return encode_string(name, self.alphabet)

    def name_of(self, k: int) -> str | None:
        return decode_string(k, self.alphabet)


def measure(table: PropertyTable, k: int, t: int, budget: int = 10**4) -> MeasurementResult:
    """Measure property k at instant t.

    Keys outside the table and machine self-termination both mean the
    property has no value here, and that absence is a definite answer.
    Only budget exhaustion is indefinite.
    """
    rule = table.entries.get(k)
    if rule is None:
        return UndefinedHolds()
    if isinstance(rule, ClosedForm):
        m = rule.fn(k, t)
        if not isinstance(m, int) or m < 0:
            raise UniverseError(f"closed form produced {m!r}, want a natural")
        return Value(m)
    out = guarded_run(rule.spec, encode_unary_input((k, t), rule.spec.blank), budget)
    if isinstance(out, Halted):
        return Value(decode_unary_output(out.final.tape))
    if isinstance(out, SelfTerminated):
        return UndefinedHolds()
    return Unresolved(budget)


def state_relation(table: PropertyTable, k: int, m: int, t: int, budget: int = 10**4) -> str:
    """Does 'property k has value m at t' hold?

    UndefinedHolds counts as holding for any m: the relation collapses to
    'k is undefined here', which is true regardless of the claimed value.
    """
    out = measure(table, k, t, budget)
    if isinstance(out, Unresolved):
        return UNRESOLVED
    if isinstance(out, UndefinedHolds):
        return HOLDS
    return HOLDS if out.m == m else FAILS


@dataclass(frozen=True)
class MeasurementLog:
    particle: str
    property_code: int
    records: tuple[tuple[int, int], ...]
    provenance: str = "measured"

    def __post_init__(self):
        last = None
        for t, m in self.records:
            if t < 0 or m < 0:
                raise UniverseError(f"record ({t}, {m}) is not a pair of naturals")
            if last is not None and t <= last:
                raise UniverseError(f"timestamps must increase strictly, got {t} after {last}")
            last = t

    def values(self) -> list[int]:
        return [m for _t, m in self.records]


def record_log(table: PropertyTable, particle: str, k: int, instants: Sequence[int],
               budget: int = 10**4) -> MeasurementLog:
    """Measure k at each instant and keep the definite values."""
    records = []
    for t in instants:
        out = measure(table, k, t, budget)
        if isinstance(out, Value):
            records.append((t, out.m))
    return MeasurementLog(particle, k, tuple(records))


def classify_property(log: MeasurementLog, window: int = 4) -> str:
    """Constant over the last `window` records means deterministic."""
    if window < 2:
        raise ValueError("window must be at least 2")
    values = log.values()
    if len(values) < window:
        return INSUFFICIENT
    tail = values[-window:]
    return DETERMINISTIC if all(v == tail[0] for v in tail) else RANDOM


def merge_logs(a: MeasurementLog, b: MeasurementLog) -> MeasurementLog:
    """Chronological union of two logs of the same particle and property."""
    if a.particle != b.particle or a.property_code != b.property_code:
        raise MixedSubjectError(
            f"cannot merge ({a.particle}, {a.property_code}) with ({b.particle}, {b.property_code})")
    merged: dict[int, int] = dict(a.records)
    for t, m in b.records:
        if t in merged and merged[t] != m:
            raise TimestampCollisionError(f"t={t} holds both {merged[t]} and {m}")
        merged[t] = m
    records = tuple(sorted(merged.items()))
    return MeasurementLog(a.particle, a.property_code, records, provenance="merged")


def consistent_pairs(log: MeasurementLog, bound: int) -> list[tuple[int, int]]:
    """The (b, c) pairs within the box that reproduce the log's values
    positionally (record order, not timestamps)."""
    return beta_enumerate_consistent(log.values(), bound)


def predict_next(log: MeasurementLog, bound: int) -> dict[int, Fraction]:
    """Estimate the next value's distribution from consistent pairs.

    Each pair consistent with positions 0..n-1 votes for beta(b, c, n);
    the estimate for m is its share of the votes, an exact rational.
    Empty consistent set gives an empty map.
    """
    counts = next_value_counts(log, bound)
    total = sum(counts.values())
    return {m: Fraction(cnt, total) for m, cnt in counts.items()}


def next_value_counts(log: MeasurementLog, bound: int) -> dict[int, int]:
    """How many consistent pairs vote for each candidate next value."""
    pairs = beta_enumerate_consistent(log.values(), bound)
    n = len(log.records)
    counts: dict[int, int] = {}
    for b, c in pairs:
        m = beta_value(b, c, n)
        counts[m] = counts.get(m, 0) + 1
    return dict(sorted(counts.items()))


def format_log(log: MeasurementLog) -> str:
    lines = [f"# particle={log.particle} property={log.property_code}"]
    lines.extend(f"{t}\t{m}" for t, m in log.records)
    return "\n".join(lines) + "\n"


def parse_log(text: str) -> MeasurementLog:
    """Parse the log file format; errors carry 1-based line numbers."""
    particle = None
    code = None
    records: list[tuple[int, int]] = []
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            fields = dict(
                part.split("=", 1) for part in line[1:].split() if "=" in part)
            if "particle" in fields and "property" in fields:
                if particle is not None:
                    raise LogFormatError(no, "second header line")
                particle = fields["particle"]
                try:
                    code = int(fields["property"])
                except ValueError:
                    raise LogFormatError(no, f"property must be an integer, got {fields['property']!r}")
            continue
        if particle is None:
            raise LogFormatError(no, "records before '# particle=... property=...' header")
        parts = line.split("\t")
        if len(parts) != 2:
            raise LogFormatError(no, f"expected 't<TAB>m', got {line!r}")
        try:
            t, m = int(parts[0]), int(parts[1])
        except ValueError:
            raise LogFormatError(no, f"non-integer record {line!r}")
        records.append((t, m))
    if particle is None or code is None:
        raise LogFormatError(None, "missing log header")
    try:
        return MeasurementLog(particle, code, tuple(records))
    except UniverseError as exc:
        raise LogFormatError(None, str(exc)) from exc


def load_log(path) -> MeasurementLog:
    return parse_log(Path(path).read_text())


def save_log(log: MeasurementLog, path) -> None:
    Path(path).write_text(format_log(log))


def _closed_form_rule(kind: str, args: list[str], line_no: int) -> ClosedForm:
    try:
        if kind == "const":
            (v,) = args
            value = int(v)
            return ClosedForm(lambda k, t, value=value: value, label=f"const {value}")
        if kind == "cycle":
            (vs,) = args
            values = [int(x) for x in vs.split(",")]
            if not values:
                raise ValueError
            return ClosedForm(lambda k, t, values=tuple(values): values[t % len(values)],
                              label=f"cycle {vs}")
        if kind == "linear":
            a, b = (int(x) for x in args)
            return ClosedForm(lambda k, t, a=a, b=b: a * t + b, label=f"linear {a} {b}")
    except (ValueError, TypeError):
        raise LogFormatError(line_no, f"bad closed form arguments {args!r}")
    raise LogFormatError(line_no, f"unknown closed form {kind!r}")


def load_table(path) -> PropertyTable:
    """Parse a property table file.

    Format::

        alphabet: ab
        property a closed-form const 7
        property b closed-form cycle 1,2
        property ab machine some_machine.tm

    Machine paths resolve relative to the table file.
    """
    p = Path(path)
    alphabet = None
    pending: list[tuple[int, str, ValueRule]] = []
    for no, raw in enumerate(p.read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("alphabet:"):
            if alphabet is not None:
                raise LogFormatError(no, "second alphabet line")
            alphabet = Alphabet(line.split(":", 1)[1].strip())
            continue
        fields = line.split()
        if fields[0] != "property" or len(fields) < 3:
            raise LogFormatError(no, f"expected 'property <name> <rule>...', got {line!r}")
        name, kind = fields[1], fields[2]
        if kind == "machine":
            if len(fields) != 4:
                raise LogFormatError(no, "machine rule takes one file path")
            rule: ValueRule = MachineRule(load_machine(p.parent / fields[3]))
        elif kind == "closed-form":
            if len(fields) < 4:
                raise LogFormatError(no, "closed-form rule needs a kind")
            rule = _closed_form_rule(fields[3], fields[4:], no)
        else:
            raise LogFormatError(no, f"unknown rule kind {kind!r}")
        pending.append((no, name, rule))
    if alphabet is None:
        raise LogFormatError(None, "missing 'alphabet:' line")
    table = PropertyTable(alphabet)
    for no, name, rule in pending:
        for ch in name:
            if ch not in alphabet:
                raise LogFormatError(no, f"property name {name!r} uses symbols outside the alphabet")
        try:
            table.add(name, rule)
        except UniverseError as exc:
            raise LogFormatError(no, str(exc)) from exc
    return table
