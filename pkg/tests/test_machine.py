"""Machine core: specs, stepping, unary I/O, the file format."""

import random

import pytest

from haltlab.machine import (
    GAP,
    MachineError,
    BudgetExhausted,
    Configuration,
    Halted,
    InvalidInputError,
    MachineFormatError,
    MachineSpec,
    MalformedOutputError,
    canonicalize,
    decode_unary_output,
    encode_unary_input,
    format_machine,
    initial_configuration,
    parse_machine,
    run,
)
from conftest import build


class TestSpecValidation:
    def test_build_derives_states_and_symbols(self, flip_flop):
        assert flip_flop.states == frozenset({"q0", "q1", "h"})
        assert flip_flop.symbols == frozenset({"_", "1"})

    def test_blank_must_be_single_char(self):
        with pytest.raises(MachineError):
            build("m", {}, blank="__")

    def test_gap_glyph_is_reserved(self):
        with pytest.raises(MachineError):
            build("m", {("q0", GAP): (GAP, "S", "h")}, blank=GAP)

    def test_direct_constructor_checks_references(self):
        with pytest.raises(MachineError):
            MachineSpec("m", "_", frozenset("_"), frozenset({"q0"}), "q0",
                        frozenset(), {("q0", "_"): ("_", "S", "nowhere")})

    def test_move_letters(self):
        with pytest.raises(MachineError):
            build("m", {("q0", "_"): ("_", "X", "h")})

    def test_start_must_be_declared(self):
        with pytest.raises(MachineError):
            MachineSpec("m", "_", frozenset("_"), frozenset({"q0"}), "q1",
                        frozenset(), {})

    def test_blank_must_be_a_symbol(self):
        with pytest.raises(MachineError):
            MachineSpec("m", "_", frozenset("a"), frozenset({"q0"}), "q0",
                        frozenset(), {})

    def test_halting_states_cannot_act(self):
        with pytest.raises(MachineError):
            build("m", {("h", "_"): ("_", "S", "h")})


class TestUnaryCodec:
    def test_encode_empty_and_singletons(self):
        assert encode_unary_input(()) == ""
        assert encode_unary_input((0,)) == "1"
        assert encode_unary_input((2,)) == "111"

    def test_encode_pairs_separated_by_one_blank(self):
        assert encode_unary_input((3, 4)) == "1111_11111"
        assert encode_unary_input((0, 0), blank=".") == "1.1"

    def test_encode_rejects_negatives(self):
        with pytest.raises(ValueError):
            encode_unary_input((-1,))

    def test_decode_block(self):
        assert decode_unary_output({0: "1"}) == 0
        assert decode_unary_output({5: "1", 6: "1", 7: "1"}) == 2

    def test_decode_rejects_empty_tape(self):
        with pytest.raises(MalformedOutputError):
            decode_unary_output({})

    def test_decode_rejects_gaps(self):
        with pytest.raises(MalformedOutputError):
            decode_unary_output({0: "1", 2: "1"})

    def test_decode_rejects_foreign_symbols(self):
        with pytest.raises(MalformedOutputError):
            decode_unary_output({0: "1", 1: "a"})

    def test_roundtrip_single_argument(self):
        rng = random.Random(11)
        for _ in range(50):
            k = rng.randrange(200)
            text = encode_unary_input((k,))
            tape = {i: ch for i, ch in enumerate(text)}
            assert decode_unary_output(tape) == k


class TestCanonicalForm:
    def test_translation_invariance(self):
        a = Configuration("q", {5: "a", 7: "a"}, 6)
        b = Configuration("q", {0: "a", 2: "a"}, 1)
        assert canonicalize(a) == canonicalize(b) == ("q", f"a{GAP}a", 1)

    def test_all_blank_tape_forgets_the_head(self):
        assert canonicalize(Configuration("q", {}, 42)) == ("q", "", 0)

    def test_head_offset_can_be_negative(self):
        c = Configuration("q", {3: "a"}, 1)
        assert canonicalize(c) == ("q", "a", -2)


class TestRun:
    def test_write_one_halts(self, write_one):
        out = run(write_one)
        assert isinstance(out, Halted)
        assert out.steps == 1
        assert out.final.tape == {0: "1"}

    def test_stuck_counts_as_halting(self):
        spec = build("bare", {})
        out = run(spec)
        assert isinstance(out, Halted) and out.steps == 0

    def test_starting_in_a_halting_state(self):
        spec = build("done", {}, start="h")
        out = run(spec, budget=0)
        assert isinstance(out, Halted) and out.steps == 0

    def test_budget_zero_blocks_the_first_step(self, write_one):
        out = run(write_one, budget=0)
        assert isinstance(out, BudgetExhausted) and out.steps == 0

    def test_budget_exhaustion_reports_the_frontier(self, ones_forever):
        out = run(ones_forever, budget=7)
        assert isinstance(out, BudgetExhausted)
        assert out.steps == 7
        assert out.final.tape == {i: "1" for i in range(7)}

    def test_input_symbols_are_checked(self, write_one):
        with pytest.raises(InvalidInputError):
            run(write_one, input="x")

    def test_initial_configuration_drops_blanks(self, adder):
        cfg = initial_configuration(adder, "1_1")
        assert cfg.tape == {0: "1", 2: "1"}
        assert cfg.head == 0 and cfg.step == 0

    def test_adder_against_arithmetic(self, adder):
        rng = random.Random(7)
        for _ in range(40):
            k, t = rng.randrange(15), rng.randrange(15)
            out = run(adder, encode_unary_input((k, t)))
            assert isinstance(out, Halted)
            assert decode_unary_output(out.final.tape) == k + t


class TestMachineFiles:
    def test_format_parse_roundtrip(self, adder, flip_flop):
        for spec in (adder, flip_flop):
            assert parse_machine(format_machine(spec)) == spec

    def test_duplicate_transition_cites_both_lines(self):
        text = "blank: _\nstart: q0\nhalt: h\nq0 _ -> 1 S h\nq0 _ -> _ R h\n"
        with pytest.raises(MachineFormatError) as err:
            parse_machine(text)
        assert err.value.line_no == 5
        assert "line 4" in str(err.value)

    def test_unknown_header_rejected(self):
        with pytest.raises(MachineFormatError) as err:
            parse_machine("blank: _\nstart: q0\nflavor: mint\n")
        assert err.value.line_no == 3

    def test_malformed_rule_rejected(self):
        with pytest.raises(MachineFormatError) as err:
            parse_machine("blank: _\nstart: q0\nq0 _ => 1 S h\n")
        assert err.value.line_no == 3

    def test_missing_headers_rejected(self):
        with pytest.raises(MachineFormatError):
            parse_machine("start: q0\n")
        with pytest.raises(MachineFormatError):
            parse_machine("blank: _\n")

    def test_comments_and_blank_lines_ignored(self, samples):
        text = (samples / "write_one.tm").read_text()
        spec = parse_machine(text)
        assert spec.name == "write-one"
        assert ("q0", "_") in spec.transitions

    def test_name_hint_used_when_file_has_no_name(self):
        spec = parse_machine("blank: _\nstart: q0\nhalt: h\n", name_hint="fallback")
        assert spec.name == "fallback"
