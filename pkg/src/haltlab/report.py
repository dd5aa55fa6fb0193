"""Figure rendering for prediction tables and race traces.

Every CLI path that emits a table can also render it: the delimited text
stays on stdout, the figure goes to the path given with --plot.  The Agg
backend keeps this headless-safe.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def save_prediction_figure(dist: Mapping[int, Fraction], path, *,
                           title: str = "next-value estimate") -> None:
    """Bar chart of one next-value distribution."""
    fig, ax = plt.subplots(figsize=(6, 4))
    if dist:
        ms = sorted(dist)
        ax.bar([str(m) for m in ms], [float(dist[m]) for m in ms], color="#4878a8")
    ax.set_xlabel("candidate value")
    ax.set_ylabel("probability")
    ax.set_ylim(0, 1)
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def save_comparison_figure(sections: Sequence[tuple[str, Mapping[int, Fraction]]],
                           path, *, title: str = "superposed estimates") -> None:
    """Grouped bars: one group per candidate value, one bar per log."""
    fig, ax = plt.subplots(figsize=(7, 4))
    values = sorted({m for _label, dist in sections for m in dist})
    width = 0.8 / max(len(sections), 1)
    for i, (label, dist) in enumerate(sections):
        xs = [j + i * width for j in range(len(values))]
        ax.bar(xs, [float(dist.get(m, 0)) for m in values], width=width, label=label)
    ax.set_xticks([j + 0.4 - width / 2 for j in range(len(values))])
    ax.set_xticklabels([str(m) for m in values])
    ax.set_xlabel("candidate value")
    ax.set_ylabel("probability")
    ax.set_ylim(0, 1)
    ax.set_title(title)
    if sections:
        ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def save_race_figure(rounds: Sequence[Sequence[tuple[str, int]]], names: Sequence[str],
                     path, *, title: str = "race progress") -> None:
    """Step counts per entrant over the rounds; retirement flattens a line.

    rounds[r][i] is (status, steps) of entrant i at the end of round r.
    """
    fig, ax = plt.subplots(figsize=(7, 4))
    for i, name in enumerate(names):
        ax.plot(range(len(rounds)), [row[i][1] for row in rounds], label=f"{i}: {name}")
    ax.set_xlabel("round")
    ax.set_ylabel("steps taken")
    ax.set_title(title)
    if len(names):
        ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
