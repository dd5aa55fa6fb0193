"""CLI surface: output lines, exit codes, file errors, figure rendering."""

import pytest

from haltlab.cli import main
from haltlab.machine import format_machine

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def invoke(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestRun:
    def test_halted(self, capsys, samples):
        code, out, _ = invoke(capsys, "run", str(samples / "write_one.tm"))
        assert code == 0 and out == "HALTED steps=1 tape=1 head=0\n"

    def test_self_terminated(self, capsys, samples):
        code, out, _ = invoke(capsys, "run", str(samples / "right_forever.tm"),
                              "--budget", "100")
        assert code == 0 and out == "SELF-TERMINATED cycle_entry=0 period=1\n"

    def test_budget_exhausted_exits_2(self, capsys, samples):
        code, out, _ = invoke(capsys, "run", str(samples / "ones_forever.tm"),
                              "--budget", "50")
        assert code == 2 and out == "BUDGET-EXHAUSTED steps=50\n"

    def test_input_flag(self, capsys, samples):
        code, out, _ = invoke(capsys, "run", str(samples / "adder.tm"),
                              "--input", "1111_11111")
        assert code == 0 and out == "HALTED steps=13 tape=11111111 head=8\n"

    def test_missing_file_is_a_usage_error(self, capsys, samples):
        code, out, err = invoke(capsys, "run", str(samples / "nope.tm"))
        assert code == 1 and out == ""
        assert err.startswith("haltlab: error:")

    def test_bad_machine_file_reports_line(self, capsys, tmp_path):
        bad = tmp_path / "bad.tm"
        bad.write_text("blank: _\nstart: q0\nq0 _ => 1 S h\n")
        code, _, err = invoke(capsys, "run", str(bad))
        assert code == 1 and "line 3" in err

    def test_trace_file(self, capsys, samples, tmp_path):
        trace = tmp_path / "w.trace"
        code, _, _ = invoke(capsys, "run", str(samples / "write_one.tm"),
                            "--trace", str(trace))
        assert code == 0
        assert trace.read_text() == "0\tq0\t\t0\n1\th\t1\t0\n"


class TestRace:
    def test_winner_line(self, capsys, samples):
        code, out, _ = invoke(capsys, "race",
                              str(samples / "right_forever.tm"),
                              str(samples / "write_one.tm"))
        assert code == 0
        assert out == ("WINNER machine=0 resolution=SELF-TERMINATED "
                       "local_steps=1 global_steps=3\n")

    def test_all_exhausted_exits_2(self, capsys, samples):
        code, out, _ = invoke(capsys, "race", str(samples / "ones_forever.tm"),
                              "--budget", "10")
        assert code == 2 and out == "ALL-EXHAUSTED global_steps=10\n"

    def test_plot_written(self, capsys, samples, tmp_path):
        fig = tmp_path / "race.png"
        code, _, _ = invoke(capsys, "race", str(samples / "right_forever.tm"),
                            str(samples / "write_one.tm"), "--plot", str(fig))
        assert code == 0
        assert fig.read_bytes()[:8] == PNG_MAGIC


class TestTotalize:
    def test_defined(self, capsys):
        code, out, _ = invoke(capsys, "totalize", "--g", "abs-diff-square",
                              "--args", "9")
        assert code == 0 and out == "DEFINED y=3 via=T1\n"

    def test_unresolved_exits_2(self, capsys):
        code, out, _ = invoke(capsys, "totalize", "--g", "abs-diff-square",
                              "--args", "3", "--budget", "2000")
        assert code == 2 and out == "UNRESOLVED global_steps=2000\n"

    def test_no_args_builtin(self, capsys):
        code, out, _ = invoke(capsys, "totalize", "--g", "const-zero")
        assert code == 0 and out == "DEFINED y=0 via=T1\n"

    def test_machine_backed_g(self, capsys, samples):
        code, out, _ = invoke(capsys, "totalize", "--g-machine",
                              str(samples / "always_zero.tm"), "--args", "5")
        assert code == 0 and out == "DEFINED y=0 via=T1\n"

    def test_unknown_builtin(self, capsys):
        code, _, err = invoke(capsys, "totalize", "--g", "nope")
        assert code == 1 and "unknown builtin" in err

    def test_g_required(self, capsys):
        code, _, err = invoke(capsys, "totalize", "--args", "9")
        assert code == 1


class TestBeta:
    def test_fit(self, capsys, samples):
        code, out, _ = invoke(capsys, "beta", "fit", str(samples / "short.seq"))
        assert code == 0 and out == "b=3726 c=24 n=3\n"

    def test_eval(self, capsys):
        code, out, _ = invoke(capsys, "beta", "eval", "--b", "0", "--c", "5",
                              "--i", "9")
        assert code == 0 and out == "0\n"
        code, out, _ = invoke(capsys, "beta", "eval", "--b", "8", "--c", "3",
                              "--i", "1")
        assert code == 0 and out == "1\n"

    def test_consistent(self, capsys, samples):
        code, out, _ = invoke(capsys, "beta", "consistent",
                              str(samples / "zero.seq"), "--bound", "2")
        assert code == 0 and out == "# b\tc\n0\t1\n0\t2\n2\t1\n"

    def test_consistent_tsv_drops_header(self, capsys, samples):
        code, out, _ = invoke(capsys, "beta", "consistent",
                              str(samples / "zero.seq"), "--bound", "2",
                              "--format", "tsv")
        assert code == 0 and out == "0\t1\n0\t2\n2\t1\n"

    def test_bad_sequence_file_reports_line(self, capsys, tmp_path):
        seq = tmp_path / "s.seq"
        seq.write_text("1 2\nthree\n")
        code, _, err = invoke(capsys, "beta", "fit", str(seq))
        assert code == 1 and "line 2" in err


class TestMeasure:
    def test_value(self, capsys, samples):
        code, out, _ = invoke(capsys, "measure", str(samples / "demo.table"),
                              "--k", "2", "--t", "5")
        assert code == 0 and out == "VALUE m=7\n"

    def test_undefined_holds(self, capsys, samples):
        code, out, _ = invoke(capsys, "measure", str(samples / "demo.table"),
                              "--k", "9", "--t", "0")
        assert code == 0 and out == "UNDEFINED-HOLDS\n"

    def test_unresolved_exits_2(self, capsys, tmp_path, sweeper):
        (tmp_path / "sweeper.tm").write_text(format_machine(sweeper))
        table = tmp_path / "t.table"
        table.write_text("alphabet: ab\nproperty a machine sweeper.tm\n")
        code, out, _ = invoke(capsys, "measure", str(table), "--k", "2",
                              "--t", "0", "--budget", "200")
        assert code == 2 and out == "UNRESOLVED budget=200\n"


class TestClassify:
    def test_deterministic(self, capsys, samples):
        code, out, _ = invoke(capsys, "classify", str(samples / "log_const.txt"))
        assert code == 0 and out == "DETERMINISTIC\n"

    def test_insufficient(self, capsys, samples):
        code, out, _ = invoke(capsys, "classify", str(samples / "log_even.txt"))
        assert code == 0 and out == "INSUFFICIENT\n"

    def test_window_flag(self, capsys, samples):
        code, out, _ = invoke(capsys, "classify", str(samples / "log_even.txt"),
                              "--window", "2")
        assert code == 0 and out == "DETERMINISTIC\n"


class TestSuperpose:
    def test_merged_log_emitted(self, capsys, samples):
        code, out, _ = invoke(capsys, "superpose", str(samples / "log_even.txt"),
                              str(samples / "log_odd.txt"))
        assert code == 0
        assert out == ("# particle=p7 property=4\n"
                       "0\t1\n1\t2\n2\t1\n3\t2\n4\t1\n")

    def test_compare_sections(self, capsys, samples):
        code, out, _ = invoke(capsys, "superpose", str(samples / "log_even.txt"),
                              str(samples / "log_odd.txt"), "--compare",
                              "--bound", "6")
        assert code == 0
        assert out == ("# particle=p7 property=4\n"
                       "0\t1\n1\t2\n2\t1\n3\t2\n4\t1\n"
                       "# merged n=5 pairs=0\n"
                       "# m\tcount\tprobability\n"
                       "# empty consistent set\n"
                       "# component-a n=3 pairs=6\n"
                       "# m\tcount\tprobability\n"
                       "1\t6\t1\n"
                       "# component-b n=2 pairs=5\n"
                       "# m\tcount\tprobability\n"
                       "2\t5\t1\n")

    def test_mixed_subjects_fail(self, capsys, samples, tmp_path):
        other = tmp_path / "other.txt"
        other.write_text("# particle=zz property=4\n9\t1\n")
        code, _, err = invoke(capsys, "superpose", str(samples / "log_even.txt"),
                              str(other))
        assert code == 1 and "merge" in err

    def test_compare_plot(self, capsys, samples, tmp_path):
        fig = tmp_path / "sup.png"
        code, _, _ = invoke(capsys, "superpose", str(samples / "log_even.txt"),
                            str(samples / "log_odd.txt"), "--compare",
                            "--bound", "6", "--plot", str(fig))
        assert code == 0 and fig.read_bytes()[:8] == PNG_MAGIC


class TestPredict:
    def test_text_format(self, capsys, samples):
        code, out, _ = invoke(capsys, "predict", str(samples / "log_single.txt"),
                              "--bound", "2")
        assert code == 0
        assert out == ("# m\tcount\tprobability\n"
                       "0\t2\t0.666666666667\n"
                       "2\t1\t0.333333333333\n")

    def test_tsv_format(self, capsys, samples):
        code, out, _ = invoke(capsys, "predict", str(samples / "log_single.txt"),
                              "--bound", "2", "--format", "tsv")
        assert code == 0
        assert out == "0\t2\t0.666666666667\n2\t1\t0.333333333333\n"

    def test_plot(self, capsys, samples, tmp_path):
        fig = tmp_path / "pred.png"
        code, _, _ = invoke(capsys, "predict", str(samples / "log_single.txt"),
                            "--bound", "2", "--plot", str(fig))
        assert code == 0 and fig.read_bytes()[:8] == PNG_MAGIC


class TestUsage:
    def test_no_arguments(self, capsys):
        assert invoke(capsys, )[0] == 1

    def test_unknown_subcommand(self, capsys):
        assert invoke(capsys, "frobnicate")[0] == 1

    def test_unknown_flag(self, capsys, samples):
        code, _, _ = invoke(capsys, "run", str(samples / "write_one.tm"),
                            "--no-such-flag")
        assert code == 1
