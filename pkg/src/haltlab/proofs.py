"""Hilbert-style proof objects over a small arithmetic language.

The calculus below is the single source of truth for every checker in
this package.

Language: terms are 0, variables, s(t), t + r, t * r; formulas are t = r,
~A, A -> B and forall x A.

Axiom schemas::

    A1   A -> (B -> A)
    A2   (A -> (B -> C)) -> ((A -> B) -> (A -> C))
    A3   (~B -> ~A) -> ((~B -> A) -> B)
    A4   (forall x A) -> A[t/x]          t substitutable for x in A
    A5   (forall x (A -> B)) -> (A -> forall x B)    x not free in A
    S1   t = r -> (t = s -> r = s)
    S2   t = r -> s(t) = s(r)
    S3   ~(0 = s(t))
    S4   s(t) = s(r) -> t = r
    S5   t + 0 = t
    S6   t + s(r) = s(t + r)
    S7   t * 0 = 0
    S8   t * s(r) = (t * r) + t
    IND  A[0/x] -> ((forall x (A -> A[s(x)/x])) -> forall x A)

Rules: modus ponens (from A -> B and A, infer B) and generalization (from
A, infer forall x A).

Serialized text is prefix notation: ``o`` for 0, ``s<t>``, ``+<t><r>``,
``*<t><r>``, ``v<name>.`` for variables, ``=<t><r>``, ``~<A>``,
``><A><B>``, ``@<name>.<A>``.  A proof file holds one line per proof
line::

    <index>. <formula> ; <justification>

where a justification is ``axiom <ID> <arg> ...`` with arguments
serialized positionally (variables as bare names), ``mp <i> <j>`` citing
the implication line then the antecedent line, or ``gen <i> <var>``.

Proof search enumerates candidate proof objects by increasing weight
(line count plus the pool positions of every axiom argument, where pools
list the target's own subformulas and subterms first and then all
formulas and terms by size), candidates of equal weight ordered by
serialized length then lexicographically.  Checking one candidate costs
one tick, which is the step unit the dovetail scheduler counts.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .godel import Alphabet, decode_string, encode_string


class ProofError(Exception):
    """Malformed proof or formula text; carries a 1-based line number
    when one applies."""

    def __init__(self, message: str, line_no: int | None = None):
        self.line_no = line_no
        where = f"line {line_no}: " if line_no is not None else ""
        super().__init__(where + message)


# --- terms and formulas ---------------------------------------------------

@dataclass(frozen=True)
class Zero:
    def __repr__(self):
        return "0"


@dataclass(frozen=True)
class Var:
    name: str

    def __repr__(self):
        return self.name


@dataclass(frozen=True)
class Succ:
    arg: "Term"

    def __repr__(self):
        return f"s({self.arg!r})"


@dataclass(frozen=True)
class Plus:
    left: "Term"
    right: "Term"

    def __repr__(self):
        return f"({self.left!r} + {self.right!r})"


@dataclass(frozen=True)
class Times:
    left: "Term"
    right: "Term"

    def __repr__(self):
        return f"({self.left!r} * {self.right!r})"


Term = Zero | Var | Succ | Plus | Times


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term

    def __repr__(self):
        return f"{self.left!r} = {self.right!r}"


@dataclass(frozen=True)
class Not:
    body: "Formula"

    def __repr__(self):
        return f"~({self.body!r})"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"

    def __repr__(self):
        return f"({self.left!r} -> {self.right!r})"


@dataclass(frozen=True)
class ForAll:
    var: str
    body: "Formula"

    def __repr__(self):
        return f"forall {self.var} ({self.body!r})"


Formula = Eq | Not | Implies | ForAll


def free_vars(x) -> frozenset[str]:
    if isinstance(x, Var):
        return frozenset((x.name,))
    if isinstance(x, (Zero,)):
        return frozenset()
    if isinstance(x, Succ):
        return free_vars(x.arg)
    if isinstance(x, (Plus, Times, Eq)):
        return free_vars(x.left) | free_vars(x.right)
    if isinstance(x, Not):
        return free_vars(x.body)
    if isinstance(x, Implies):
        return free_vars(x.left) | free_vars(x.right)
    if isinstance(x, ForAll):
        return free_vars(x.body) - {x.var}
    raise TypeError(f"not a term or formula: {x!r}")


def substitute(f, var: str, t: Term):
    """Replace free occurrences of var by t.  No capture check here; pair
    with substitutable() when the side condition matters."""
    if isinstance(f, Var):
        return t if f.name == var else f
    if isinstance(f, Zero):
        return f
    if isinstance(f, Succ):
        return Succ(substitute(f.arg, var, t))
    if isinstance(f, Plus):
        return Plus(substitute(f.left, var, t), substitute(f.right, var, t))
    if isinstance(f, Times):
        return Times(substitute(f.left, var, t), substitute(f.right, var, t))
    if isinstance(f, Eq):
        return Eq(substitute(f.left, var, t), substitute(f.right, var, t))
    if isinstance(f, Not):
        return Not(substitute(f.body, var, t))
    if isinstance(f, Implies):
        return Implies(substitute(f.left, var, t), substitute(f.right, var, t))
    if isinstance(f, ForAll):
        if f.var == var:
            return f
        return ForAll(f.var, substitute(f.body, var, t))
    raise TypeError(f"not a term or formula: {f!r}")


def substitutable(f: Formula, var: str, t: Term) -> bool:
    """True when t is free for var in f: no free occurrence of var sits
    under a quantifier binding a variable of t."""
    if isinstance(f, Eq):
        return True
    if isinstance(f, Not):
        return substitutable(f.body, var, t)
    if isinstance(f, Implies):
        return substitutable(f.left, var, t) and substitutable(f.right, var, t)
    if isinstance(f, ForAll):
        if f.var == var or var not in free_vars(f.body):
            return True
        if f.var in free_vars(t):
            return False
        return substitutable(f.body, var, t)
    raise TypeError(f"not a formula: {f!r}")


# --- serialization --------------------------------------------------------

def serialize_term(t: Term) -> str:
    if isinstance(t, Zero):
        return "o"
    if isinstance(t, Var):
        return f"v{t.name}."
    if isinstance(t, Succ):
        return "s" + serialize_term(t.arg)
    if isinstance(t, Plus):
        return "+" + serialize_term(t.left) + serialize_term(t.right)
    if isinstance(t, Times):
        return "*" + serialize_term(t.left) + serialize_term(t.right)
    raise TypeError(f"not a term: {t!r}")


def serialize_formula(f: Formula) -> str:
    if isinstance(f, Eq):
        return "=" + serialize_term(f.left) + serialize_term(f.right)
    if isinstance(f, Not):
        return "~" + serialize_formula(f.body)
    if isinstance(f, Implies):
        return ">" + serialize_formula(f.left) + serialize_formula(f.right)
    if isinstance(f, ForAll):
        return f"@{f.var}." + serialize_formula(f.body)
    raise TypeError(f"not a formula: {f!r}")


class _Cursor:
    __slots__ = ("text", "pos")

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def take(self) -> str:
        if self.pos >= len(self.text):
            raise ProofError(f"unexpected end of text at position {self.pos}")
        ch = self.text[self.pos]
        self.pos += 1
        return ch

    def name(self) -> str:
        end = self.text.find(".", self.pos)
        if end < 0:
            raise ProofError(f"unterminated variable name at position {self.pos}")
        name = self.text[self.pos:end]
        if not name or not all(c.islower() or c.isdigit() for c in name):
            raise ProofError(f"bad variable name {name!r} at position {self.pos}")
        self.pos = end + 1
        return name


def _parse_term(cur: _Cursor) -> Term:
    ch = cur.take()
    if ch == "o":
        return Zero()
    if ch == "v":
        return Var(cur.name())
    if ch == "s":
        return Succ(_parse_term(cur))
    if ch == "+":
        return Plus(_parse_term(cur), _parse_term(cur))
    if ch == "*":
        return Times(_parse_term(cur), _parse_term(cur))
    raise ProofError(f"expected a term at position {cur.pos - 1}, got {ch!r}")


def _parse_formula(cur: _Cursor) -> Formula:
    ch = cur.take()
    if ch == "=":
        return Eq(_parse_term(cur), _parse_term(cur))
    if ch == "~":
        return Not(_parse_formula(cur))
    if ch == ">":
        return Implies(_parse_formula(cur), _parse_formula(cur))
    if ch == "@":
        return ForAll(cur.name(), _parse_formula(cur))
    raise ProofError(f"expected a formula at position {cur.pos - 1}, got {ch!r}")


def parse_term(text: str) -> Term:
    cur = _Cursor(text)
    t = _parse_term(cur)
    if cur.pos != len(text):
        raise ProofError(f"trailing characters after term at position {cur.pos}")
    return t


def parse_formula(text: str) -> Formula:
    cur = _Cursor(text)
    f = _parse_formula(cur)
    if cur.pos != len(text):
        raise ProofError(f"trailing characters after formula at position {cur.pos}")
    return f


FORMULA_ALPHABET = Alphabet("os+*v.=~>@" + "abcdefghijklmnpqrtuwxyz" + "0123456789")


def godel_number_formula(f: Formula) -> int:
    return encode_string(serialize_formula(f), FORMULA_ALPHABET)


def godel_number_to_formula(g: int) -> Formula | None:
    s = decode_string(g, FORMULA_ALPHABET)
    if s is None:
        return None
    try:
        return parse_formula(s)
    except ProofError:
        return None


# --- proof objects --------------------------------------------------------

@dataclass(frozen=True)
class Axiom:
    schema: str
    args: tuple


@dataclass(frozen=True)
class ModusPonens:
    implication: int
    antecedent: int


@dataclass(frozen=True)
class Generalization:
    source: int
    var: str


Justification = Axiom | ModusPonens | Generalization


@dataclass(frozen=True)
class ProofLine:
    formula: Formula
    justification: Justification


@dataclass(frozen=True)
class ProofObject:
    lines: tuple[ProofLine, ...]


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    line: int | None = None
    reason: str | None = None


class _SideCondition(Exception):
    pass


def _a4(x: str, a: Formula, t: Term) -> Formula:
    if not substitutable(a, x, t):
        raise _SideCondition(f"term {serialize_term(t)} not substitutable for {x}")
    return Implies(ForAll(x, a), substitute(a, x, t))


def _a5(x: str, a: Formula, b: Formula) -> Formula:
    if x in free_vars(a):
        raise _SideCondition(f"{x} occurs free in the antecedent")
    return Implies(ForAll(x, Implies(a, b)), Implies(a, ForAll(x, b)))


def _ind(x: str, a: Formula) -> Formula:
    base = substitute(a, x, Zero())
    ind_step = ForAll(x, Implies(a, substitute(a, x, Succ(Var(x)))))
    return Implies(base, Implies(ind_step, ForAll(x, a)))


SCHEMAS: dict[str, tuple[tuple[str, ...], object]] = {
    "A1": (("formula", "formula"), lambda a, b: Implies(a, Implies(b, a))),
    "A2": (("formula", "formula", "formula"),
           lambda a, b, c: Implies(Implies(a, Implies(b, c)),
                                   Implies(Implies(a, b), Implies(a, c)))),
    "A3": (("formula", "formula"),
           lambda a, b: Implies(Implies(Not(b), Not(a)),
                                Implies(Implies(Not(b), a), b))),
    "A4": (("var", "formula", "term"), _a4),
    "A5": (("var", "formula", "formula"), _a5),
    "S1": (("term", "term", "term"),
           lambda t, r, s: Implies(Eq(t, r), Implies(Eq(t, s), Eq(r, s)))),
    "S2": (("term", "term"), lambda t, r: Implies(Eq(t, r), Eq(Succ(t), Succ(r)))),
    "S3": (("term",), lambda t: Not(Eq(Zero(), Succ(t)))),
    "S4": (("term", "term"), lambda t, r: Implies(Eq(Succ(t), Succ(r)), Eq(t, r))),
    "S5": (("term",), lambda t: Eq(Plus(t, Zero()), t)),
    "S6": (("term", "term"), lambda t, r: Eq(Plus(t, Succ(r)), Succ(Plus(t, r)))),
    "S7": (("term",), lambda t: Eq(Times(t, Zero()), Zero())),
    "S8": (("term", "term"),
           lambda t, r: Eq(Times(t, Succ(r)), Plus(Times(t, r), t))),
    "IND": (("var", "formula"), _ind),
}

_KIND_TYPES = {"formula": (Eq, Not, Implies, ForAll), "term": (Zero, Var, Succ, Plus, Times),
               "var": str}


def build_axiom(schema: str, *args) -> Formula:
    """Instantiate a schema; raises on unknown id, arity, kind or side
    condition.  Handy for writing proofs by hand."""
    if schema not in SCHEMAS:
        raise ProofError(f"unknown axiom schema {schema!r}")
    kinds, builder = SCHEMAS[schema]
    if len(args) != len(kinds):
        raise ProofError(f"schema {schema} takes {len(kinds)} arguments, got {len(args)}")
    for arg, kind in zip(args, kinds):
        if not isinstance(arg, _KIND_TYPES[kind]):
            raise ProofError(f"schema {schema} wants a {kind}, got {arg!r}")
    try:
        return builder(*args)
    except _SideCondition as exc:
        raise ProofError(f"side condition of {schema} fails: {exc}") from exc


def check_proof(proof: ProofObject, target: Formula) -> CheckResult:
    """One linear pass: every line justified, last line equal to target."""
    if not proof.lines:
        return CheckResult(False, None, "empty proof")
    for idx, line in enumerate(proof.lines):
        j = line.justification
        if isinstance(j, Axiom):
            if j.schema not in SCHEMAS:
                return CheckResult(False, idx, f"unknown axiom schema {j.schema!r}")
            kinds, builder = SCHEMAS[j.schema]
            if len(j.args) != len(kinds):
                return CheckResult(
                    False, idx, f"schema {j.schema} takes {len(kinds)} arguments, got {len(j.args)}")
            for arg, kind in zip(j.args, kinds):
                if not isinstance(arg, _KIND_TYPES[kind]):
                    return CheckResult(False, idx, f"schema {j.schema} wants a {kind}, got {arg!r}")
            try:
                expected = builder(*j.args)
            except _SideCondition as exc:
                return CheckResult(False, idx, f"side condition of {j.schema} fails: {exc}")
            if expected != line.formula:
                return CheckResult(False, idx, f"formula is not the claimed {j.schema} instance")
        elif isinstance(j, ModusPonens):
            if not (0 <= j.implication < idx) or not (0 <= j.antecedent < idx):
                return CheckResult(False, idx, "modus ponens must cite earlier lines")
            imp = proof.lines[j.implication].formula
            ant = proof.lines[j.antecedent].formula
            if not isinstance(imp, Implies) or imp.left != ant or imp.right != line.formula:
                return CheckResult(
                    False, idx,
                    f"line {j.implication} is not an implication of line {j.antecedent} to this line")
        elif isinstance(j, Generalization):
            if not (0 <= j.source < idx):
                return CheckResult(False, idx, "generalization must cite an earlier line")
            if line.formula != ForAll(j.var, proof.lines[j.source].formula):
                return CheckResult(
                    False, idx, f"formula is not line {j.source} generalized over {j.var}")
        else:
            return CheckResult(False, idx, f"unknown justification {j!r}")
    if proof.lines[-1].formula != target:
        return CheckResult(False, len(proof.lines) - 1, "conclusion differs from the target")
    return CheckResult(True)


# --- independent re-checker ----------------------------------------------

_ANY = object()


def _merge(a, b):
    if a is _ANY:
        return b
    if b is _ANY or a == b:
        return a
    return None


def _infer_subst(a, rhs, var: str):
    """Find t with substitute(a, var, t) == rhs by walking both shapes.
    Returns the term, _ANY when var is not free in a, or None on failure."""
    if isinstance(a, Var):
        if a.name == var:
            return rhs if isinstance(rhs, (Zero, Var, Succ, Plus, Times)) else None
        return _ANY if a == rhs else None
    if isinstance(a, Zero):
        return _ANY if a == rhs else None
    if isinstance(a, Succ):
        return _infer_subst(a.arg, rhs.arg, var) if isinstance(rhs, Succ) else None
    if isinstance(a, (Plus, Times, Eq, Implies)):
        if type(a) is not type(rhs):
            return None
        left = _infer_subst(a.left, rhs.left, var)
        if left is None:
            return None
        right = _infer_subst(a.right, rhs.right, var)
        if right is None:
            return None
        return _merge(left, right)
    if isinstance(a, Not):
        return _infer_subst(a.body, rhs.body, var) if isinstance(rhs, Not) else None
    if isinstance(a, ForAll):
        if not isinstance(rhs, ForAll) or a.var != rhs.var:
            return None
        if a.var == var:
            return _ANY if a == rhs else None
        return _infer_subst(a.body, rhs.body, var)
    return None


def _matches_some_schema(f: Formula) -> bool:
    """Pattern-match f against every schema, inferring the instantiation
    instead of trusting one.  The deliberate second route."""
    if isinstance(f, Not) and isinstance(f.body, Eq):
        eq = f.body
        if eq.left == Zero() and isinstance(eq.right, Succ):
            return True  # S3
    if isinstance(f, Eq):
        l, r = f.left, f.right
        if isinstance(l, Plus) and isinstance(l.right, Zero) and l.left == r:
            return True  # S5
        if (isinstance(l, Plus) and isinstance(l.right, Succ) and isinstance(r, Succ)
                and isinstance(r.arg, Plus) and r.arg.left == l.left
                and r.arg.right == l.right.arg):
            return True  # S6
        if isinstance(l, Times) and isinstance(l.right, Zero) and isinstance(r, Zero):
            return True  # S7
        if (isinstance(l, Times) and isinstance(l.right, Succ) and isinstance(r, Plus)
                and isinstance(r.left, Times) and r.left.left == l.left
                and r.left.right == l.right.arg and r.right == l.left):
            return True  # S8
    if not isinstance(f, Implies):
        return False
    a, b = f.left, f.right
    # A1: A -> (B -> A)
    if isinstance(b, Implies) and b.right == a:
        return True
    # A2
    if (isinstance(a, Implies) and isinstance(a.right, Implies)
            and isinstance(b, Implies) and isinstance(b.left, Implies)
            and isinstance(b.right, Implies)
            and b.left.left == a.left and b.right.left == a.left
            and b.left.right == a.right.left and b.right.right == a.right.right):
        return True
    # A3
    if (isinstance(a, Implies) and isinstance(a.left, Not) and isinstance(a.right, Not)
            and isinstance(b, Implies) and isinstance(b.left, Implies)
            and b.left.left == a.left and b.left.right == a.right.body
            and b.right == a.left.body):
        return True
    # S1: t=r -> (t=s -> r=s)
    if (isinstance(a, Eq) and isinstance(b, Implies) and isinstance(b.left, Eq)
            and isinstance(b.right, Eq) and b.left.left == a.left
            and b.right.left == a.right and b.right.right == b.left.right):
        return True
    # S2
    if (isinstance(a, Eq) and isinstance(b, Eq) and isinstance(b.left, Succ)
            and isinstance(b.right, Succ) and b.left.arg == a.left
            and b.right.arg == a.right):
        return True
    # S4
    if (isinstance(a, Eq) and isinstance(a.left, Succ) and isinstance(a.right, Succ)
            and isinstance(b, Eq) and a.left.arg == b.left and a.right.arg == b.right):
        return True
    # A4: (forall x A) -> A[t/x]
    if isinstance(a, ForAll):
        t = _infer_subst(a.body, b, a.var)
        if t is _ANY and a.body == b:
            return True
        if t is not None and t is not _ANY and substitutable(a.body, a.var, t) \
                and substitute(a.body, a.var, t) == b:
            return True
    # A5
    if (isinstance(a, ForAll) and isinstance(a.body, Implies) and isinstance(b, Implies)
            and isinstance(b.right, ForAll) and b.right.var == a.var
            and b.left == a.body.left and b.right.body == a.body.right
            and a.var not in free_vars(b.left)):
        return True
    # IND: conclusion forall x A fixes everything else
    if (isinstance(b, Implies) and isinstance(b.left, ForAll)
            and isinstance(b.right, ForAll) and b.left.var == b.right.var
            and isinstance(b.left.body, Implies)):
        x = b.right.var
        body = b.right.body
        if (b.left.body.left == body
                and b.left.body.right == substitute(body, x, Succ(Var(x)))
                and a == substitute(body, x, Zero())):
            return True
    return False


def recheck_proof(proof: ProofObject, target: Formula) -> bool:
    """Walk the lines in reverse, re-deriving validity by pattern matching
    rather than by instantiating claimed arguments.  Kept separate from
    check_proof on purpose: the two must agree on every verdict."""
    if not proof.lines or proof.lines[-1].formula != target:
        return False
    for idx in range(len(proof.lines) - 1, -1, -1):
        line = proof.lines[idx]
        j = line.justification
        if isinstance(j, Axiom):
            if not _matches_some_schema(line.formula):
                return False
            # the claimed instantiation must also reproduce the line
            try:
                if build_axiom(j.schema, *j.args) != line.formula:
                    return False
            except (ProofError, _SideCondition):
                return False
        elif isinstance(j, ModusPonens):
            if j.implication >= idx or j.antecedent >= idx or j.implication < 0 or j.antecedent < 0:
                return False
            imp = proof.lines[j.implication].formula
            if imp != Implies(proof.lines[j.antecedent].formula, line.formula):
                return False
        elif isinstance(j, Generalization):
            if not (0 <= j.source < idx):
                return False
            f = line.formula
            if not isinstance(f, ForAll) or f.var != j.var or f.body != proof.lines[j.source].formula:
                return False
        else:
            return False
    return True


# --- text format ----------------------------------------------------------

def _format_just(j: Justification) -> str:
    if isinstance(j, Axiom):
        parts = []
        for arg in j.args:
            if isinstance(arg, str):
                parts.append(arg)
            elif isinstance(arg, (Zero, Var, Succ, Plus, Times)):
                parts.append(serialize_term(arg))
            else:
                parts.append(serialize_formula(arg))
        return " ".join(["axiom", j.schema, *parts])
    if isinstance(j, ModusPonens):
        return f"mp {j.implication} {j.antecedent}"
    return f"gen {j.source} {j.var}"


def format_proof(proof: ProofObject) -> str:
    lines = []
    for idx, line in enumerate(proof.lines):
        lines.append(f"{idx}. {serialize_formula(line.formula)} ; {_format_just(line.justification)}")
    return "\n".join(lines) + "\n"


def _parse_just(text: str, no: int) -> Justification:
    fields = text.split()
    if not fields:
        raise ProofError("missing justification", no)
    if fields[0] == "axiom":
        if len(fields) < 2:
            raise ProofError("axiom justification needs a schema id", no)
        schema = fields[1]
        if schema not in SCHEMAS:
            raise ProofError(f"unknown axiom schema {schema!r}", no)
        kinds, _ = SCHEMAS[schema]
        raw = fields[2:]
        if len(raw) != len(kinds):
            raise ProofError(f"schema {schema} takes {len(kinds)} arguments, got {len(raw)}", no)
        args = []
        try:
            for kind, r in zip(kinds, raw):
                if kind == "var":
                    args.append(r)
                elif kind == "term":
                    args.append(parse_term(r))
                else:
                    args.append(parse_formula(r))
        except ProofError as exc:
            raise ProofError(f"bad axiom argument {r!r}: {exc}", no) from exc
        return Axiom(schema, tuple(args))
    if fields[0] == "mp":
        if len(fields) != 3:
            raise ProofError("mp takes two line numbers", no)
        try:
            return ModusPonens(int(fields[1]), int(fields[2]))
        except ValueError:
            raise ProofError(f"bad mp line numbers {fields[1:]!r}", no)
    if fields[0] == "gen":
        if len(fields) != 3:
            raise ProofError("gen takes a line number and a variable", no)
        try:
            return Generalization(int(fields[1]), fields[2])
        except ValueError:
            raise ProofError(f"bad gen line number {fields[1]!r}", no)
    raise ProofError(f"unknown justification {fields[0]!r}", no)


def parse_proof(text: str) -> ProofObject:
    """Parse the proof text format; errors carry 1-based file line numbers."""
    lines: list[ProofLine] = []
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, dot, rest = line.partition(".")
        if not dot or not head.strip().isdigit():
            raise ProofError(f"expected '<index>. ...', got {line!r}", no)
        if int(head) != len(lines):
            raise ProofError(f"expected index {len(lines)}, got {head.strip()}", no)
        body, sep, just = rest.partition(";")
        if not sep:
            raise ProofError("missing ';' before justification", no)
        try:
            formula = parse_formula(body.strip())
        except ProofError as exc:
            raise ProofError(f"bad formula: {exc}", no) from exc
        lines.append(ProofLine(formula, _parse_just(just.strip(), no)))
    return ProofObject(tuple(lines))


# --- enumeration ----------------------------------------------------------

def _subterms(x) -> list[Term]:
    out: list[Term] = []

    def walk(y):
        if isinstance(y, (Zero, Var)):
            out.append(y)
        elif isinstance(y, Succ):
            walk(y.arg)
            out.append(y)
        elif isinstance(y, (Plus, Times)):
            walk(y.left)
            walk(y.right)
            out.append(y)
        elif isinstance(y, Eq):
            walk(y.left)
            walk(y.right)
        elif isinstance(y, Not):
            walk(y.body)
        elif isinstance(y, Implies):
            walk(y.left)
            walk(y.right)
        elif isinstance(y, ForAll):
            walk(y.body)

    walk(x)
    seen = set()
    uniq = []
    for t in out:
        if t not in seen:
            seen.add(t)
            uniq.append(t)
    return uniq


def _subformulas(f: Formula) -> list[Formula]:
    out: list[Formula] = []

    def walk(y):
        if isinstance(y, Eq):
            out.append(y)
        elif isinstance(y, Not):
            walk(y.body)
            out.append(y)
        elif isinstance(y, Implies):
            walk(y.left)
            walk(y.right)
            out.append(y)
        elif isinstance(y, ForAll):
            walk(y.body)
            out.append(y)

    walk(f)
    seen = set()
    uniq = []
    for g in out:
        if g not in seen:
            seen.add(g)
            uniq.append(g)
    return uniq


class _Pool:
    """Deterministic infinite pool: seeds first, then generated items by
    (size, serialization), duplicates skipped."""

    def __init__(self, seeds, generator):
        self._items = list(seeds)
        self._seen = set(self._items)
        self._gen = generator

    def get(self, position: int):
        """1-based."""
        while len(self._items) < position:
            item = next(self._gen)
            if item not in self._seen:
                self._seen.add(item)
                self._items.append(item)
        return self._items[position - 1]


_POOL_VARS = ("x", "y", "z")


def _gen_terms() -> Iterator[Term]:
    by_size: list[list[Term]] = [[]]
    size = 1
    while True:
        batch: list[Term] = []
        if size == 1:
            batch.append(Zero())
            batch.extend(Var(v) for v in _POOL_VARS)
        for t in by_size[size - 1] if size - 1 >= 1 else []:
            batch.append(Succ(t))
        for ls in range(1, size - 1):
            rs = size - 1 - ls
            for l in by_size[ls]:
                for r in by_size[rs]:
                    batch.append(Plus(l, r))
                    batch.append(Times(l, r))
        batch.sort(key=serialize_term)
        by_size.append(batch)
        yield from batch
        size += 1


def _gen_formulas() -> Iterator[Formula]:
    terms_by_size: list[list[Term]] = [[], [Zero(), *(Var(v) for v in _POOL_VARS)]]
    forms_by_size: list[list[Formula]] = [[]]

    def terms(n: int) -> list[Term]:
        while len(terms_by_size) <= n:
            size = len(terms_by_size)
            batch = [Succ(t) for t in terms_by_size[size - 1]]
            for ls in range(1, size - 1):
                for l in terms_by_size[ls]:
                    for r in terms_by_size[size - 1 - ls]:
                        batch.append(Plus(l, r))
                        batch.append(Times(l, r))
            batch.sort(key=serialize_term)
            terms_by_size.append(batch)
        return terms_by_size[n]

    size = 1
    while True:
        batch: list[Formula] = []
        for ls in range(1, size - 1):
            for l in terms(ls):
                for r in terms(size - 1 - ls):
                    batch.append(Eq(l, r))
        if size >= 2:
            batch.extend(Not(f) for f in forms_by_size[size - 1])
            for v in _POOL_VARS:
                batch.extend(ForAll(v, f) for f in forms_by_size[size - 1])
        for ls in range(1, size - 1):
            for l in forms_by_size[ls]:
                for r in forms_by_size[size - 1 - ls]:
                    batch.append(Implies(l, r))
        batch.sort(key=serialize_formula)
        forms_by_size.append(batch)
        yield from batch
        size += 1


class ProofSearchCursor:
    """Resumable enumeration of candidate proofs of one target.

    tick() checks exactly one candidate and returns the ProofObject when
    it proves the target, else None.  The cursor can be suspended between
    ticks, which is how the dovetail scheduler interleaves proof search
    with machine steps.
    """

    def __init__(self, target: Formula):
        self.target = target
        self.found: ProofObject | None = None
        self.candidates_checked = 0
        seeds_f = _subformulas(target)
        seeds_t = _subterms(target)
        self._formulas = _Pool(seeds_f, _gen_formulas())
        self._terms = _Pool(seeds_t, _gen_terms())
        vars_in = sorted(free_vars(target) | set(_bound_vars(target)))
        self._vars = list(dict.fromkeys([*vars_in, *_POOL_VARS]))
        self._stream = self._candidates()

    # weight of a line: 1 + sum of argument pool positions (axioms),
    # 1 + (i+1) + (j+1) for mp, 1 + (i+1) + var position for gen.
    def _line_choices(self, weight: int, prefix: list[ProofLine]) -> list[ProofLine]:
        out: list[ProofLine] = []
        budget = weight - 1
        if budget < 1:
            return out
        for schema in sorted(SCHEMAS):
            kinds, builder = SCHEMAS[schema]
            for combo in _compositions(budget, len(kinds)):
                args = []
                ok = True
                for kind, pos in zip(kinds, combo):
                    if kind == "formula":
                        args.append(self._formulas.get(pos))
                    elif kind == "term":
                        args.append(self._terms.get(pos))
                    else:
                        if pos > len(self._vars):
                            ok = False
                            break
                        args.append(self._vars[pos - 1])
                if not ok:
                    continue
                try:
                    formula = builder(*args)
                except _SideCondition:
                    continue
                out.append(ProofLine(formula, Axiom(schema, tuple(args))))
        n = len(prefix)
        for i in range(n):
            for j in range(n):
                if (i + 1) + (j + 1) == budget:
                    imp = prefix[i].formula
                    if isinstance(imp, Implies) and imp.left == prefix[j].formula:
                        out.append(ProofLine(imp.right, ModusPonens(i, j)))
        for i in range(n):
            vpos = budget - (i + 1)
            if 1 <= vpos <= len(self._vars):
                var = self._vars[vpos - 1]
                out.append(ProofLine(ForAll(var, prefix[i].formula), Generalization(i, var)))
        return out

    def _proofs_of_weight(self, total: int) -> list[ProofObject]:
        results: list[ProofObject] = []
        prefix: list[ProofLine] = []

        def extend(remaining: int):
            if remaining == 0:
                if prefix:
                    results.append(ProofObject(tuple(prefix)))
                return
            for lw in range(2, remaining + 1):
                for line in self._line_choices(lw, prefix):
                    prefix.append(line)
                    extend(remaining - lw)
                    prefix.pop()

        extend(total)
        results.sort(key=lambda p: (len(format_proof(p)), format_proof(p)))
        return results

    def _candidates(self) -> Iterator[ProofObject]:
        weight = 2
        while True:
            yield from self._proofs_of_weight(weight)
            weight += 1

    def tick(self) -> ProofObject | None:
        if self.found is not None:
            return self.found
        candidate = next(self._stream)
        self.candidates_checked += 1
        if check_proof(candidate, self.target).ok:
            self.found = candidate
            return candidate
        return None


def _bound_vars(f) -> list[str]:
    if isinstance(f, ForAll):
        return [f.var, *_bound_vars(f.body)]
    if isinstance(f, Not):
        return _bound_vars(f.body)
    if isinstance(f, Implies):
        return [*_bound_vars(f.left), *_bound_vars(f.right)]
    return []


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All tuples of `parts` positive ints summing to total, lexicographic."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first, *rest)


def enumerate_proofs(budget: int, target: Formula) -> ProofObject | None:
    """Check up to `budget` candidates in enumeration order; the first
    valid proof of target, or None when the budget runs out."""
    cursor = ProofSearchCursor(target)
    for _ in range(budget):
        found = cursor.tick()
        if found is not None:
            return found
    return None
