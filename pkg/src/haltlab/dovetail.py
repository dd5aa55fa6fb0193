"""Fair interleaving of semi-decision procedures, and the totalizer on top.

race() advances its entrants round-robin, one step per turn, and ends the
moment one of them halts or self-terminates.  Budget exhaustion never
wins: an entrant that reaches its step cap just retires and the others
keep going.  totalize_mu() races three searchers for the least y with
g(args, y) = 0: T1 halts on the first zero, T2 halts on the first
non-zero, T3 ticks a certifier for the universal statement.  Only three
signals resolve the race in the totalizer's favor: T1 halting (Defined),
T2 self-terminating or T3 certifying (DefaultTotal, value 0).  A plain T2
halt is deliberately not a signal; it merely reports that some value is
non-zero, which decides nothing about the search, so T2 retires and the
race continues.

Closed-form searchers are virtual machines: one scheduler step is one
evaluation of g.  Machine-backed g is also supported; there one scheduler
step is one tape step of the machine evaluating the current candidate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .guard import GuardedRunner
from .machine import (
    Halted,
    MachineSpec,
    SelfTerminated,
    decode_unary_output,
    encode_unary_input,
)

RUNNING = "running"
HALTED = "halted"
SELF_TERMINATED = "self-terminated"
EXHAUSTED = "exhausted"


class DovetailError(Exception):
    pass


class EmptyRaceError(DovetailError):
    pass


class PartialFunctionError(DovetailError):
    """A machine-backed g failed to halt on some argument; g must be total."""


@dataclass(frozen=True)
class RacerSnapshot:
    index: int
    name: str
    status: str
    steps: int


@dataclass(frozen=True)
class RaceOutcome:
    winner: int
    resolution: str                  # HALTED or SELF_TERMINATED
    winner_local_steps: int
    global_steps: int
    losers: tuple[RacerSnapshot, ...]
    winner_result: object = None


@dataclass(frozen=True)
class AllExhausted:
    global_steps: int
    snapshots: tuple[RacerSnapshot, ...]


class MachineRacer:
    """One machine stepped under the repeat guard (or without it)."""

    def __init__(self, spec: MachineSpec, input: str = "", *,
                 guard: bool = True, max_steps: int | None = None):
        self.name = spec.name
        self.status = RUNNING
        self.result = None
        self.max_steps = max_steps
        self._runner = GuardedRunner(spec, input, guard=guard)

    @property
    def steps(self) -> int:
        return self._runner.steps

    def tick(self) -> str:
        if self.status != RUNNING:
            return self.status
        out = self._runner.resolve()
        if isinstance(out, Halted):
            self.status = HALTED
            self.result = out
        elif isinstance(out, SelfTerminated):
            self.status = SELF_TERMINATED
            self.result = out
        elif self.max_steps is not None and self._runner.steps >= self.max_steps:
            self.status = EXHAUSTED
        else:
            self._runner.advance()
        return self.status


@dataclass(frozen=True)
class FoundWitness:
    k: int
    value: int


class FunctionSearchRacer:
    """Search y = 0, 1, 2, ... for g(y) = 0 (want_zero) or g(y) != 0.

    A virtual machine whose every step evaluates g once.  Candidates never
    recur, so it cannot self-terminate; it halts on a hit or retires at
    max_steps evaluations.
    """

    def __init__(self, fn: Callable[[int], int], *, want_zero: bool,
                 max_steps: int | None = None, name: str = "search"):
        self.fn = fn
        self.want_zero = want_zero
        self.max_steps = max_steps
        self.name = name
        self.status = RUNNING
        self.result = None
        self.steps = 0
        self._next = 0

    def tick(self) -> str:
        if self.status != RUNNING:
            return self.status
        if self.max_steps is not None and self.steps >= self.max_steps:
            self.status = EXHAUSTED
            return self.status
        y = self._next
        value = self.fn(y)
        self.steps += 1
        self._next += 1
        if (value == 0) == self.want_zero:
            self.status = HALTED
            self.result = FoundWitness(y, value)
        return self.status


class MachineEvalSearcher:
    """FunctionSearchRacer over a machine-computed g: each scheduler step
    advances the machine evaluating the current candidate by one tape step.
    The machine must halt on every argument (g is total); divergence is a
    caller error and raises PartialFunctionError."""

    def __init__(self, spec: MachineSpec, args: tuple[int, ...], *,
                 want_zero: bool, max_candidates: int | None = None,
                 eval_budget: int = 10**6, name: str | None = None):
        self.spec = spec
        self.args = args
        self.want_zero = want_zero
        self.max_candidates = max_candidates
        self.eval_budget = eval_budget
        self.name = name or f"search:{spec.name}"
        self.status = RUNNING
        self.result = None
        self.steps = 0
        self._candidate = 0
        self._runner = self._fresh_runner()

    def _fresh_runner(self) -> GuardedRunner:
        tape = encode_unary_input((*self.args, self._candidate), self.spec.blank)
        return GuardedRunner(self.spec, tape)

    def tick(self) -> str:
        if self.status != RUNNING:
            return self.status
        if self.max_candidates is not None and self._candidate >= self.max_candidates:
            self.status = EXHAUSTED
            return self.status
        self.steps += 1
        out = self._runner.resolve()
        if out is None:
            if self._runner.steps >= self.eval_budget:
                raise PartialFunctionError(
                    f"{self.spec.name} exceeded {self.eval_budget} steps on candidate {self._candidate}")
            self._runner.advance()
            return self.status
        if isinstance(out, SelfTerminated):
            raise PartialFunctionError(
                f"{self.spec.name} loops on candidate {self._candidate}; g is not total")
        value = decode_unary_output(out.final.tape)
        if (value == 0) == self.want_zero:
            self.status = HALTED
            self.result = FoundWitness(self._candidate, value)
        else:
            self._candidate += 1
            self._runner = self._fresh_runner()
        return self.status


class NonSignalingHalt:
    """Wrapper that turns the inner racer's halt into retirement.

    Used for T2 in the totalizer: its halt announces a non-zero value,
    which resolves nothing, so the race must keep going.  Self-termination
    still passes through as a real signal.
    """

    def __init__(self, inner):
        self.inner = inner
        self.name = inner.name

    @property
    def steps(self) -> int:
        return self.inner.steps

    @property
    def result(self):
        return self.inner.result

    @property
    def status(self) -> str:
        st = self.inner.status
        return EXHAUSTED if st == HALTED else st

    def tick(self) -> str:
        self.inner.tick()
        return self.status


class CertifierRacer:
    """Adapter giving a certifier (anything with a tick() that returns a
    truthy certificate when done) the racer interface."""

    def __init__(self, certifier, name: str = "certifier"):
        self.certifier = certifier
        self.name = name
        self.status = RUNNING
        self.result = None
        self.steps = 0

    def tick(self) -> str:
        if self.status != RUNNING:
            return self.status
        self.steps += 1
        certificate = self.certifier.tick()
        if certificate:
            self.status = HALTED
            self.result = certificate
        return self.status


class ExhaustiveInstanceCertifier:
    """Toy certifier for 'g(args, y) = 0 for all y': verifies instances
    y = 0 .. cap-1 one per tick and certifies once all pass.  A failing
    instance refutes the statement; the certifier then ticks forever
    without certifying, like a proof search for an unprovable formula."""

    def __init__(self, pred: Callable[[int], bool], cap: int = 10):
        if cap < 1:
            raise ValueError("cap must be positive")
        self.pred = pred
        self.cap = cap
        self.checked = 0
        self.refuted = False

    def tick(self):
        if self.refuted or self.checked >= self.cap:
            return True if not self.refuted and self.checked >= self.cap else None
        y = self.checked
        if not self.pred(y):
            self.refuted = True
            return None
        self.checked += 1
        if self.checked >= self.cap:
            return ("all-instances-verified", self.cap)
        return None


def _snapshot(racers) -> tuple[RacerSnapshot, ...]:
    return tuple(RacerSnapshot(i, r.name, r.status, r.steps) for i, r in enumerate(racers))


def _as_racer(entry):
    if isinstance(entry, tuple) and len(entry) == 2 and isinstance(entry[0], MachineSpec):
        return MachineRacer(entry[0], entry[1])
    return entry


def race(entries: Sequence, global_budget: int, *, trace=None, on_round=None):
    """Round-robin the entrants one step per turn until the first halt or
    self-termination.

    Entries are racer objects or (MachineSpec, input) pairs, which run
    guarded.  Retired entrants (exhausted step caps) are skipped; when
    everyone has retired, or the global step budget runs out, the result
    is AllExhausted.  The winner is the first entrant in
    schedule order to leave the running state with a real signal.

    Fairness: after any prefix of the schedule the step counts of entrants
    still running differ by at most one.

    trace receives one line per entrant per completed round,
    ``round<TAB>machine<TAB>status``; on_round(round_no, racers) runs at
    the same boundary.
    """
    racers = [_as_racer(e) for e in entries]
    if not racers:
        raise EmptyRaceError("a race needs at least one machine")
    if global_budget < 0:
        raise ValueError("global budget must be non-negative")
    global_steps = 0
    round_no = 0
    while True:
        if all(r.status != RUNNING for r in racers):
            return AllExhausted(global_steps, _snapshot(racers))
        for idx, racer in enumerate(racers):
            if racer.status != RUNNING:
                continue
            if global_steps >= global_budget:
                return AllExhausted(global_steps, _snapshot(racers))
            global_steps += 1
            status = racer.tick()
            if status in (HALTED, SELF_TERMINATED):
                losers = tuple(s for s in _snapshot(racers) if s.index != idx)
                return RaceOutcome(idx, status, racer.steps, global_steps, losers,
                                   racer.result)
        if trace is not None:
            for idx, racer in enumerate(racers):
                trace.write(f"{round_no}\t{idx}\t{racer.status}\n")
        if on_round is not None:
            on_round(round_no, racers)
        round_no += 1


# --- the totalizer ---------------------------------------------------------

@dataclass(frozen=True)
class MuProblem:
    """Find the least y with g(args, y) = 0.

    g is a callable of arity len(args) + 1, or a machine computing it on
    unary input; either way g must be total.
    """

    g: object
    arity: int
    args: tuple[int, ...]
    search_budget: int | None = None

    def __post_init__(self):
        if len(self.args) != self.arity:
            raise DovetailError(f"expected {self.arity} arguments, got {len(self.args)}")
        if any(a < 0 for a in self.args):
            raise DovetailError("arguments must be naturals")

    def g_callable(self) -> Callable[[int], int]:
        if isinstance(self.g, MachineSpec):
            raise DovetailError("machine-backed g is evaluated by MachineEvalSearcher")
        g = self.g
        args = self.args
        return lambda y: g(*args, y)


@dataclass(frozen=True)
class Defined:
    y: int
    via: str = "T1"


@dataclass(frozen=True)
class DefaultTotal:
    value: int
    via: str


@dataclass(frozen=True)
class Unresolved:
    global_steps: int


TotalizedValue = Defined | DefaultTotal | Unresolved


def build_T1(p: MuProblem):
    """Halts at the first y with g(args, y) = 0."""
    if isinstance(p.g, MachineSpec):
        return MachineEvalSearcher(p.g, p.args, want_zero=True,
                                   max_candidates=p.search_budget, name="T1")
    return FunctionSearchRacer(p.g_callable(), want_zero=True,
                               max_steps=p.search_budget, name="T1")


def build_T2(p: MuProblem):
    """Halts at the first y with g(args, y) != 0."""
    if isinstance(p.g, MachineSpec):
        return MachineEvalSearcher(p.g, p.args, want_zero=False,
                                   max_candidates=p.search_budget, name="T2")
    return FunctionSearchRacer(p.g_callable(), want_zero=False,
                               max_steps=p.search_budget, name="T2")


def build_T3(p: MuProblem, certifier):
    """Ticks the certifier for 'g(args, y) = 0 for all y'; halts when it
    produces a certificate."""
    return CertifierRacer(certifier, name="T3")


def default_certifier(p: MuProblem, cap: int = 10) -> ExhaustiveInstanceCertifier:
    if isinstance(p.g, MachineSpec):
        raise DovetailError("the instance certifier needs a callable g")
    g = p.g_callable()
    return ExhaustiveInstanceCertifier(lambda y: g(y) == 0, cap=cap)


def interpret_mu_race(outcome: RaceOutcome | AllExhausted) -> TotalizedValue:
    """The documented mapping from a [T1, T2, T3] race to a total value.

    T1 halting carries the least witness.  T2 self-terminating proves some
    prefix search loops forever; T3 halting certifies the universal
    statement; both mean no witness will appear, so the function falls
    back to the default value 0 with its provenance recorded.  Everything
    else stays unresolved.
    """
    if isinstance(outcome, AllExhausted):
        return Unresolved(outcome.global_steps)
    if outcome.winner == 0 and outcome.resolution == HALTED:
        return Defined(outcome.winner_result.k, via="T1")
    if outcome.winner == 1 and outcome.resolution == SELF_TERMINATED:
        return DefaultTotal(0, via="T2-self-terminate")
    if outcome.winner == 2 and outcome.resolution == HALTED:
        return DefaultTotal(0, via="T3-certificate")
    raise DovetailError(
        f"race resolved outside the documented mapping: winner {outcome.winner} {outcome.resolution}")


def totalize_mu(p: MuProblem, certifier=None, global_budget: int = 10**5, *,
                trace=None) -> TotalizedValue:
    """Total extension of the least-zero search, by racing T1, T2, T3."""
    if certifier is None:
        certifier = default_certifier(p)
    racers = [build_T1(p), NonSignalingHalt(build_T2(p)), build_T3(p, certifier)]
    return interpret_mu_race(race(racers, global_budget, trace=trace))


BUILTIN_G: dict[str, tuple[int, Callable[..., int]]] = {
    "abs-diff-square": (1, lambda x, y: abs(x - y * y)),
    "const-zero": (0, lambda y: 0),
    "const-one": (0, lambda y: 1),
    "linear-plus-one": (1, lambda x, y: x + y + 1),
}


def builtin_problem(g_id: str, args: tuple[int, ...],
                    search_budget: int | None = None) -> MuProblem:
    if g_id not in BUILTIN_G:
        raise DovetailError(f"unknown builtin g {g_id!r}; have {', '.join(sorted(BUILTIN_G))}")
    arity, fn = BUILTIN_G[g_id]
    return MuProblem(fn, arity, args, search_budget)
