"""Figure rendering writes a real image file for each report shape."""

from fractions import Fraction

from haltlab.report import (save_comparison_figure, save_prediction_figure,
                            save_race_figure)

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def test_prediction_figure(tmp_path):
    out = tmp_path / "pred.png"
    save_prediction_figure({0: Fraction(2, 3), 2: Fraction(1, 3)}, out)
    assert out.read_bytes()[:8] == PNG_MAGIC


def test_prediction_figure_empty_distribution(tmp_path):
    out = tmp_path / "empty.png"
    save_prediction_figure({}, out)
    assert out.read_bytes()[:8] == PNG_MAGIC


def test_comparison_figure(tmp_path):
    out = tmp_path / "cmp.png"
    sections = [("merged", {1: Fraction(1, 2), 2: Fraction(1, 2)}),
                ("component-a", {1: Fraction(1)})]
    save_comparison_figure(sections, out)
    assert out.read_bytes()[:8] == PNG_MAGIC


def test_race_figure(tmp_path):
    out = tmp_path / "race.png"
    rounds = [[("RUNNING", 1), ("RUNNING", 1)],
              [("RUNNING", 2), ("RETIRED", 1)]]
    save_race_figure(rounds, ["m0", "m1"], out)
    assert out.read_bytes()[:8] == PNG_MAGIC
