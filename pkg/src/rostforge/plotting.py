"""Figures for rank tables and Borel generator counts."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

# cell codes for the heatmap
_CODES = {"zero": 0, "finite": 1, "countably_infinite": 2, "cardinal_of_field": 3, "unknown": -1}


def _cell(rank_json):
    tag = next(iter(rank_json))
    if tag == "finite" and rank_json["finite"] == 0:
        return 0, "0"
    label = {"zero": "0", "countably_infinite": "ℵ0", "cardinal_of_field": "|K|", "unknown": "?"}
    return _CODES[tag], (str(rank_json["finite"]) if tag == "finite" else label[tag])


def rank_heatmap(records, title, path):
    """Heatmap of a rank table given as a list of rank records."""
    ns = sorted({r["n"] for r in records})
    is_ = sorted({r["i"] for r in records})
    grid = np.full((len(ns), len(is_)), np.nan)
    fig, ax = plt.subplots(figsize=(0.6 * len(is_) + 2, 0.5 * len(ns) + 1.5))
    for r in records:
        code, label = _cell(r["rank"])
        y, x = ns.index(r["n"]), is_.index(r["i"])
        grid[y, x] = code
        ax.text(x, y, label, ha="center", va="center", fontsize=8)
    cmap = matplotlib.colors.ListedColormap(["#dddddd", "#ffffff", "#9ecae1", "#fdae6b", "#e6550d"])
    ax.imshow(grid, cmap=cmap, vmin=-1.5, vmax=3.5, origin="lower", aspect="auto")
    ax.set_xticks(range(len(is_)), [str(i) for i in is_])
    ax.set_yticks(range(len(ns)), [str(n) for n in ns])
    ax.set_xlabel("weight i")
    ax.set_ylabel("degree n")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def borel_bars(k_ranks, title, path):
    """Bar chart of K-group ranks by degree."""
    degrees = [d["degree"] for d in k_ranks]
    ranks = [d["rank"] for d in k_ranks]
    fig, ax = plt.subplots(figsize=(max(4, 0.4 * len(degrees) + 2), 3))
    ax.bar(degrees, ranks, color="#3182bd")
    ax.set_xticks(degrees)
    ax.set_xlabel("degree n")
    ax.set_ylabel("rank of K_n (x) Q")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path
