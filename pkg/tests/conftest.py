"""Shared fixtures: the sample machines plus a few purpose-built loops."""

from pathlib import Path

import pytest

from haltlab.machine import MachineSpec, load_machine

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


def build(name, transitions, *, start="q0", halting=("h",), blank="_", extra=()):
    return MachineSpec.build(name, blank, start, halting, transitions, extra)


@pytest.fixture(scope="session")
def samples() -> Path:
    return SAMPLES


@pytest.fixture(scope="session")
def write_one() -> MachineSpec:
    return load_machine(SAMPLES / "write_one.tm")


@pytest.fixture(scope="session")
def right_forever() -> MachineSpec:
    return load_machine(SAMPLES / "right_forever.tm")


@pytest.fixture(scope="session")
def ones_forever() -> MachineSpec:
    return load_machine(SAMPLES / "ones_forever.tm")


@pytest.fixture(scope="session")
def adder() -> MachineSpec:
    return load_machine(SAMPLES / "adder.tm")


@pytest.fixture(scope="session")
def always_seven() -> MachineSpec:
    return load_machine(SAMPLES / "always_seven.tm")


@pytest.fixture(scope="session")
def always_zero() -> MachineSpec:
    return load_machine(SAMPLES / "always_zero.tm")


@pytest.fixture(scope="session")
def flip_flop() -> MachineSpec:
    # writes a stroke, erases it again: period-2 cycle entered at step 0
    return build("flip-flop", {
        ("q0", "_"): ("1", "S", "q1"),
        ("q1", "1"): ("_", "S", "q0"),
    })


@pytest.fixture(scope="session")
def sweeper() -> MachineSpec:
    # paves the tape rightward regardless of input; grows forever
    return build("sweeper", {
        ("q0", "1"): ("1", "R", "q0"),
        ("q0", "_"): ("1", "R", "q0"),
    })


@pytest.fixture(scope="session")
def loop_on_stroke() -> MachineSpec:
    # spins in place whenever the head starts on a stroke
    return build("loop-on-stroke", {
        ("q0", "1"): ("1", "S", "q0"),
        ("q0", "_"): ("1", "S", "h"),
    })
