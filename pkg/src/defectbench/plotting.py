"""Matplotlib figures for comparison reports, rendered straight to files."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .stattests import RankTable


def plot_critical_difference(ranks: RankTable, cd: float, path, title: str = "") -> None:
    """Classic critical-difference diagram.

    Classifiers sit on a horizontal rank axis (best = 1 on the left);
    thick bars connect groups whose rank gaps stay below the critical
    distance, and a ruler shows the distance itself.
    """
    order = np.argsort(ranks.avg_ranks)
    names = [ranks.classifiers[i] for i in order]
    values = ranks.avg_ranks[order]
    k = ranks.k

    # maximal cliques of mutually non-separated classifiers (sorted ranks:
    # a clique is a run whose extremes differ by less than cd)
    cliques = []
    for i in range(k):
        j = i
        while j + 1 < k and values[j + 1] - values[i] < cd:
            j += 1
        if j > i and not any(c[0] <= i and j <= c[1] for c in cliques):
            cliques.append((i, j))

    rows = int(np.ceil(k / 2))
    fig_height = 1.8 + 0.4 * rows + 0.3 * max(1, len(cliques))
    fig, ax = plt.subplots(figsize=(9, fig_height))
    lo, hi = 1.0, float(k)
    ax.set_xlim(lo - 0.3, hi + 0.3)
    ax.set_ylim(-rows - len(cliques) * 0.7 - 1.0, 2.6)
    ax.axis("off")

    ax.plot([lo, hi], [0, 0], color="black", lw=1.2)
    for t in range(1, k + 1):
        ax.plot([t, t], [0, 0.15], color="black", lw=1.0)
        ax.text(t, 0.3, str(t), ha="center", va="bottom", fontsize=9)

    # cd ruler above the axis
    ax.plot([lo, lo + cd], [1.8, 1.8], color="black", lw=2.0)
    ax.plot([lo, lo], [1.7, 1.9], color="black", lw=2.0)
    ax.plot([lo + cd, lo + cd], [1.7, 1.9], color="black", lw=2.0)
    ax.text(lo + cd / 2, 2.0, f"cd = {cd:.2f}", ha="center", va="bottom", fontsize=9)

    # labels alternate left/right, connected to their rank positions
    for idx, (name, value) in enumerate(zip(names, values)):
        left = idx < rows
        row = idx if left else k - 1 - idx
        y_label = -(row + 1)
        x_label = lo - 0.25 if left else hi + 0.25
        ax.plot([value, value, x_label], [0, y_label, y_label],
                color="black", lw=0.8)
        ax.text(x_label, y_label, f" {name} ({value:.2f}) " if left
                else f" {name} ({value:.2f}) ",
                ha="right" if left else "left", va="center", fontsize=9)

    for c_idx, (i, j) in enumerate(cliques):
        y = -rows - 0.7 * (c_idx + 1)
        ax.plot([values[i] - 0.05, values[j] + 0.05], [y, y], color="black", lw=3.5)

    if title:
        ax.set_title(title, fontsize=11)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)


def plot_posteriors(bayes: list, path, title: str = "") -> None:
    """Stacked horizontal bars of (p_left, p_rope, p_right) per pair."""
    if not bayes:
        return
    labels = [f"{a} vs {b}" for a, b, _ in bayes]
    p_left = np.array([t.p_left for _, _, t in bayes])
    p_rope = np.array([t.p_rope for _, _, t in bayes])
    p_right = np.array([t.p_right for _, _, t in bayes])

    fig, ax = plt.subplots(figsize=(9, 0.8 + 0.35 * len(bayes)))
    y = np.arange(len(bayes))[::-1]
    ax.barh(y, p_left, color="#c44e52", label="classifier 2 wins")
    ax.barh(y, p_rope, left=p_left, color="#cccccc", label="practically equivalent")
    ax.barh(y, p_right, left=p_left + p_rope, color="#4c72b0", label="classifier 1 wins")
    ax.set_yticks(y)
    ax.set_yticklabels(labels, fontsize=8)
    ax.set_xlim(0, 1)
    ax.set_xlabel("posterior probability")
    ax.axvline(0.95, color="black", lw=0.8, ls="--")
    ax.legend(loc="lower right", fontsize=8)
    if title:
        ax.set_title(title, fontsize=11)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
