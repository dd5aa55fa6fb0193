"""Seeded random machine corpora for soundness and agreement sweeps.

Machines drawn here are small on purpose: at most three working states
plus one halt state and at most three tape symbols.  The transition table
is filled at random with a sprinkling of missing rules (jams count as
halts) and jumps to the halt state, which yields a healthy mix of quick
halters, short cycles, translated drifts and tape growers.
"""

from __future__ import annotations

import random

from .machine import MOVES, MachineSpec


def random_machine(rng: random.Random, index: int = 0, *,
                   max_work_states: int = 3, max_symbols: int = 3,
                   p_missing: float = 0.08, p_halt: float = 0.12) -> MachineSpec:
    n_states = rng.randint(1, max_work_states)
    n_symbols = rng.randint(1, max_symbols)
    states = [f"q{i}" for i in range(n_states)]
    symbols = ["_", "a", "b"][:n_symbols]
    transitions = {}
    for state in states:
        for sym in symbols:
            if rng.random() < p_missing:
                continue
            write = rng.choice(symbols)
            move = rng.choice(MOVES)
            nxt = "h" if rng.random() < p_halt else rng.choice(states)
            transitions[(state, sym)] = (write, move, nxt)
    return MachineSpec.build(f"rand{index}", "_", "q0", ["h"], transitions,
                             extra_symbols=symbols)


def machine_corpus(seed: int, count: int, **kwargs) -> list[MachineSpec]:
    """Deterministic: the same seed and count always give the same list."""
    rng = random.Random(seed)
    return [random_machine(rng, i, **kwargs) for i in range(count)]
