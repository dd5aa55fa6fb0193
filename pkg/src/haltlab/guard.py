"""Guarded execution: remember every instantaneous description, stop on a repeat.

A deterministic machine that revisits a configuration (up to translation
along the tape) can never halt, so instead of spinning the runner reports
SelfTerminated with the step at which the cycle was entered and its period.
Detection is sound but incomplete: divergence that keeps growing the tape
never repeats and falls through to BudgetExhausted.

The history is keyed by a compact fingerprint of the canonical form
(state, head offset, extent width, two 61-bit polynomial hashes of the
cell contents).  Fingerprints update in O(1) per step, which keeps guarded
runs linear even when the tape gets wide.  Before any SelfTerminated
verdict the candidate repeat is confirmed exactly by replaying the run to
the earlier step and comparing canonical forms, so a hash collision can
never produce a false verdict; it could only make the guard miss a repeat,
the same harmless direction as a capacity cap.
"""

from __future__ import annotations

from .machine import (
    GAP,
    LEFT,
    RIGHT,
    BudgetExhausted,
    Configuration,
    Halted,
    MachineSpec,
    RunOutcome,
    SelfTerminated,
    initial_configuration,
)

_M1 = (1 << 61) - 1
_M2 = (1 << 61) - 1
_B1 = 131
_B2 = 137

_POW1: dict[int, int] = {}
_POW2: dict[int, int] = {}


def _pow1(p: int) -> int:
    v = _POW1.get(p)
    if v is None:
        v = _POW1[p] = pow(_B1, p, _M1)
    return v


def _pow2(p: int) -> int:
    v = _POW2.get(p)
    if v is None:
        v = _POW2[p] = pow(_B2, p, _M2)
    return v


class HistoryIndex:
    """First-occurrence step of every configuration key seen in one run.

    capacity=None means unbounded (up to the run budget).  With a cap the
    index stops recording once full; repeats of already-recorded
    configurations are still detected, halting runs still halt, and loops
    that only revisit unrecorded configurations end as BudgetExhausted.
    The cap weakens detection, never soundness.
    """

    __slots__ = ("seen", "capacity")

    def __init__(self, capacity: int | None = None):
        self.seen: dict = {}
        self.capacity = capacity

    def probe(self, key, step: int):
        """Return the first-occurrence step on a hit, None after recording,
        or the string 'full' when capacity stops the record."""
        prior = self.seen.get(key)
        if prior is not None:
            return prior
        if self.capacity is not None and len(self.seen) >= self.capacity:
            return "full"
        self.seen[key] = step
        return None


class GuardedRunner:
    """Resumable stepper with the repeat guard folded in.

    Callers alternate resolve() and advance(): resolve() inspects the
    current configuration and returns Halted or SelfTerminated when the run
    is over (None otherwise), advance() executes one transition.  The
    dovetail scheduler drives one runner per lane; guarded_run drives a
    single runner to completion.
    """

    def __init__(self, spec: MachineSpec, input: str = "", *,
                 guard: bool = True, capacity: int | None = None, trace=None):
        cfg = initial_configuration(spec, input)
        self.spec = spec
        self.input = input
        self.guard = guard
        self.trace = trace
        self.steps = 0
        self.overflowed = False
        self._history = HistoryIndex(capacity)
        self._tape = dict(cfg.tape)
        self._state = spec.start
        self._head = 0
        self._rule = None
        self._outcome = None
        self._code = {s: i for i, s in enumerate(sorted(spec.symbols), start=1)}
        self._left: int | None = None
        self._right: int | None = None
        self._h1 = 0
        self._h2 = 0
        for p, sym in self._tape.items():
            c = self._code[sym]
            self._h1 = (self._h1 + c * _pow1(p)) % _M1
            self._h2 = (self._h2 + c * _pow2(p)) % _M2
        if self._tape:
            self._left = min(self._tape)
            self._right = max(self._tape)

    def config(self) -> Configuration:
        return Configuration(self._state, dict(self._tape), self._head, self.steps)

    def _canonical(self) -> tuple[str, str, int]:
        if self._left is None:
            return (self._state, "", 0)
        tape = self._tape
        cells = "".join(tape.get(i, GAP) for i in range(self._left, self._right + 1))
        return (self._state, cells, self._head - self._left)

    def _fingerprint(self):
        if self._left is None:
            return (self._state, 0, 0, 0, 0)
        left = self._left
        return (
            self._state,
            self._head - left,
            self._right - left + 1,
            self._h1 * _pow1(-left) % _M1,
            self._h2 * _pow2(-left) % _M2,
        )

    def _confirm(self, earlier_step: int) -> bool:
        """Replay the run to earlier_step and compare canonical forms exactly."""
        cfg = initial_configuration(self.spec, self.input)
        tape = dict(cfg.tape)
        state = self.spec.start
        head = 0
        blank = self.spec.blank
        trans = self.spec.transitions
        for _ in range(earlier_step):
            write, move, state = trans[(state, tape.get(head, blank))]
            if write == blank:
                tape.pop(head, None)
            else:
                tape[head] = write
            head += (move == RIGHT) - (move == LEFT)
        if not tape:
            then = (state, "", 0)
        else:
            lo, hi = min(tape), max(tape)
            then = (state, "".join(tape.get(i, GAP) for i in range(lo, hi + 1)), head - lo)
        return then == self._canonical()

    def resolve(self):
        """Halted / SelfTerminated when the current configuration ends the
        run, else None.  Also emits the trace line for this configuration."""
        if self._outcome is not None:
            return self._outcome
        if self.trace is not None:
            state, cells, off = self._canonical()
            self.trace.write(f"{self.steps}\t{state}\t{cells}\t{off}\n")
        if self._state in self.spec.halting:
            self._outcome = Halted(self.steps, self.config())
            return self._outcome
        rule = self.spec.transitions.get(
            (self._state, self._tape.get(self._head, self.spec.blank)))
        if rule is None:
            self._outcome = Halted(self.steps, self.config())
            return self._outcome
        self._rule = rule
        if self.guard:
            hit = self._history.probe(self._fingerprint(), self.steps)
            if hit == "full":
                self.overflowed = True
            elif hit is not None and self._confirm(hit):
                self._outcome = SelfTerminated(hit, self.steps - hit)
                return self._outcome
        return None

    def advance(self) -> None:
        """Execute the transition resolve() just looked up."""
        write, move, nxt = self._rule
        p = self._head
        blank = self.spec.blank
        old = self._tape.get(p, blank)
        if write != old:
            code = self._code
            if old == blank:
                self._tape[p] = write
                c = code[write]
                self._h1 = (self._h1 + c * _pow1(p)) % _M1
                self._h2 = (self._h2 + c * _pow2(p)) % _M2
                if self._left is None:
                    self._left = self._right = p
                elif p < self._left:
                    self._left = p
                elif p > self._right:
                    self._right = p
            elif write == blank:
                del self._tape[p]
                c = code[old]
                self._h1 = (self._h1 - c * _pow1(p)) % _M1
                self._h2 = (self._h2 - c * _pow2(p)) % _M2
                if not self._tape:
                    self._left = self._right = None
                elif p == self._left:
                    while self._left not in self._tape:
                        self._left += 1
                elif p == self._right:
                    while self._right not in self._tape:
                        self._right -= 1
            else:
                self._tape[p] = write
                d = code[write] - code[old]
                self._h1 = (self._h1 + d * _pow1(p)) % _M1
                self._h2 = (self._h2 + d * _pow2(p)) % _M2
        self._head += (move == RIGHT) - (move == LEFT)
        self._state = nxt
        self.steps += 1


def guarded_run(spec: MachineSpec, input: str = "", budget: int = 10**5, *,
                capacity: int | None = None, trace=None) -> RunOutcome:
    """run() plus the repeat guard: checks the current canonical key before
    each step and self-terminates on a confirmed repeat.

    A repeat found exactly when the budget elapses still counts, so
    cycle_entry_step + period <= budget always holds.  Guarded and
    unguarded runs agree bit-for-bit on every halting machine.
    """
    if budget < 0:
        raise ValueError("budget must be non-negative")
    runner = GuardedRunner(spec, input, capacity=capacity, trace=trace)
    while True:
        out = runner.resolve()
        if out is not None:
            return out
        if runner.steps >= budget:
            return BudgetExhausted(runner.steps, runner.config())
        runner.advance()
