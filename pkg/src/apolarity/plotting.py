"""Figures for sweep tables."""

from __future__ import annotations

from collections import defaultdict
from pathlib import Path
from typing import Iterable, List

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.ticker import MaxNLocator  # noqa: E402

PHASES = ("apolar", "degree4", "degree5")


def plot_sweep(reports: Iterable, path: Path) -> Path:
    """Two panels: HF(S/I^2)_4 - n against n per field, and wall time per phase.

    ``reports`` are ReportDocument objects; entries that errored out are skipped.
    """
    reports: List = [r for r in reports if r.hf_quotient]
    excess = defaultdict(list)
    timing = defaultdict(lambda: defaultdict(list))
    for r in reports:
        if r.hf_square and r.hf_square[4] is not None:
            excess[r.field].append((r.n, r.hf_square[4] - r.n))
        for ph in PHASES:
            if ph in r.timing:
                timing[ph][r.n].append(r.timing[ph])

    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
    markers = "osD^v<>"
    for k, (fld, pts) in enumerate(sorted(excess.items())):
        xs, ys = zip(*pts)
        ax1.scatter(xs, ys, marker=markers[k % len(markers)], label=fld, alpha=0.7)
    ax1.axhline(0, color="k", lw=0.8)
    ax1.set_xlabel("n")
    ax1.set_ylabel(r"$H(S/I^2)_4 - n$")
    ax1.set_title("degree-4 excess (0 = minimal)")
    if excess:
        ax1.legend(fontsize=8)

    for ph in PHASES:
        if not timing[ph]:
            continue
        ns = sorted(timing[ph])
        ax2.plot(ns, [max(timing[ph][n]) for n in ns], marker="o", label=ph)
    ax2.set_yscale("log")
    ax2.set_xlabel("n")
    ax2.set_ylabel("wall time per instance [s]")
    ax2.set_title("phase timings (max over instances)")
    if any(timing[ph] for ph in PHASES):
        ax2.legend(fontsize=8)

    for ax in (ax1, ax2):
        ax.xaxis.set_major_locator(MaxNLocator(integer=True))
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
