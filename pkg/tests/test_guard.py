"""Loop guard: sound self-termination verdicts, exact agreement with the
unguarded runner, and graceful degradation on overflow."""

import io

from haltlab.corpus import machine_corpus
from haltlab.guard import GuardedRunner, HistoryIndex, guarded_run
from haltlab.machine import (
    BudgetExhausted,
    Halted,
    SelfTerminated,
    canonicalize,
    initial_configuration,
    run,
    step,
)


def replay_canonical(spec, input, target_step):
    """Independent oracle: drive the pure stepper to a given step."""
    cfg = initial_configuration(spec, input)
    for _ in range(target_step):
        cfg = step(spec, cfg)
    return canonicalize(cfg)


class TestDetection:
    def test_right_forever_is_a_period_one_translate(self, right_forever):
        out = guarded_run(right_forever, budget=100)
        assert out == SelfTerminated(cycle_entry_step=0, period=1)

    def test_flip_flop_has_period_two(self, flip_flop):
        out = guarded_run(flip_flop, budget=100)
        assert out == SelfTerminated(cycle_entry_step=0, period=2)

    def test_detection_allowed_at_the_budget_boundary(self, right_forever, flip_flop):
        assert guarded_run(right_forever, budget=1) == SelfTerminated(0, 1)
        assert guarded_run(flip_flop, budget=2) == SelfTerminated(0, 2)
        out = guarded_run(flip_flop, budget=1)
        assert isinstance(out, BudgetExhausted) and out.steps == 1

    def test_budget_zero_never_detects(self, right_forever):
        out = guarded_run(right_forever, budget=0)
        assert isinstance(out, BudgetExhausted) and out.steps == 0

    def test_late_entry_cycle(self):
        # walks three cells right over strokes, then spins in place
        from conftest import build
        spec = build("runway", {
            ("q0", "1"): ("1", "R", "q0"),
            ("q0", "_"): ("_", "S", "q0"),
        })
        out = guarded_run(spec, input="111", budget=100)
        assert out == SelfTerminated(cycle_entry_step=3, period=1)

    def test_verdict_confirmed_by_replay(self, flip_flop, right_forever):
        for spec in (flip_flop, right_forever):
            out = guarded_run(spec, budget=50)
            assert isinstance(out, SelfTerminated)
            early = replay_canonical(spec, "", out.cycle_entry_step)
            late = replay_canonical(spec, "", out.cycle_entry_step + out.period)
            assert early == late

    def test_growing_tape_exhausts_instead(self, ones_forever):
        out = guarded_run(ones_forever, budget=500)
        assert isinstance(out, BudgetExhausted) and out.steps == 500


class TestAgreement:
    def test_halting_runs_match_exactly(self, write_one, adder):
        from haltlab.machine import encode_unary_input
        pairs = [(write_one, ""), (adder, encode_unary_input((4, 2)))]
        for spec, inp in pairs:
            a = run(spec, inp, budget=10**4)
            b = guarded_run(spec, inp, budget=10**4)
            assert isinstance(a, Halted)
            assert a == b

    def test_random_corpus_agreement(self):
        for spec in machine_corpus(seed=2024, count=120):
            plain = run(spec, budget=600)
            guarded = guarded_run(spec, budget=600)
            if isinstance(plain, Halted):
                assert guarded == plain
            else:
                assert not isinstance(guarded, Halted)

    def test_random_corpus_soundness(self):
        # every self-termination verdict names a real repeat
        hits = 0
        for spec in machine_corpus(seed=5, count=120):
            out = guarded_run(spec, budget=2000)
            if not isinstance(out, SelfTerminated):
                continue
            hits += 1
            early = replay_canonical(spec, "", out.cycle_entry_step)
            late = replay_canonical(spec, "", out.cycle_entry_step + out.period)
            assert early == late
        assert hits > 10  # the corpus parameters make loops common


class TestMechanism:
    def test_history_index_probe(self):
        h = HistoryIndex(capacity=2)
        assert h.probe(("k1",), 0) is None
        assert h.probe(("k2",), 1) is None
        assert h.probe(("k1",), 5) == 0
        assert h.probe(("k3",), 2) == "full"

    def test_capacity_overflow_degrades_to_exhaustion(self, ones_forever):
        # the cap stops recording, not running
        out = guarded_run(ones_forever, budget=2000, capacity=8)
        assert isinstance(out, BudgetExhausted)
        assert out.steps == 2000

    def test_overflowed_history_still_detects_recorded_repeats(self, flip_flop):
        # capacity 1 records only step 0; the step-2 repeat of it still hits
        out = guarded_run(flip_flop, budget=100, capacity=1)
        assert out == SelfTerminated(0, 2)

    def test_overflow_never_blocks_halting(self, adder):
        from haltlab.machine import encode_unary_input
        inp = encode_unary_input((6, 5))
        out = guarded_run(adder, inp, budget=10**4, capacity=2)
        assert isinstance(out, Halted)
        assert out == run(adder, inp)

    def test_trace_stream(self, write_one):
        sink = io.StringIO()
        out = guarded_run(write_one, trace=sink)
        assert isinstance(out, Halted)
        assert sink.getvalue() == "0\tq0\t\t0\n1\th\t1\t0\n"

    def test_runner_is_resumable(self, flip_flop):
        r = GuardedRunner(flip_flop)
        assert r.resolve() is None
        r.advance()
        assert r.resolve() is None
        r.advance()
        assert r.resolve() == SelfTerminated(0, 2)

    def test_unguarded_runner_reports_nothing(self, right_forever):
        r = GuardedRunner(right_forever, guard=False)
        for _ in range(50):
            assert r.resolve() is None
            r.advance()
        assert r.steps == 50
