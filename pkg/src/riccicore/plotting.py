"""Matplotlib figures written next to the CSV tables."""

from __future__ import annotations

from os import PathLike
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

METRIC_LABELS = {
    "r_d_in": r"$r_d^{\mathrm{in}}$",
    "r_d_out": r"$r_d^{\mathrm{out}}$",
    "r_s": r"$r_s$",
}

_STYLE = {
    "font.size": 10,
    "axes.labelsize": 11,
    "axes.titlesize": 11,
    "legend.fontsize": 9,
    "xtick.direction": "in",
    "ytick.direction": "in",
    "axes.spines.top": False,
    "axes.spines.right": False,
    "lines.linewidth": 1.5,
    "lines.markersize": 5,
    "figure.dpi": 100,
    "savefig.dpi": 150,
    "svg.hashsalt": "riccicore",
}

# No software/date metadata, so repeated runs produce identical files.
_META = {"Software": None}


def _value(v):
    return float("nan") if v is None else v


def _save(fig, path: str | PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, metadata=_META, bbox_inches="tight")
    plt.close(fig)
    return path


def plot_alpha_sweep(rows: Sequence, path: str | PathLike, title: str = "") -> Path:
    """Cohesion on the left axis and stretch on the right, against alpha."""
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots(figsize=(5.0, 3.4))
        alphas = [r.alpha for r in rows]
        ax.plot(alphas, [r.r_d_in for r in rows], "o-", label=METRIC_LABELS["r_d_in"])
        ax.plot(alphas, [r.r_d_out for r in rows], "s-", label=METRIC_LABELS["r_d_out"])
        ax.set_xlabel(r"$\alpha$")
        ax.set_ylabel("degree cohesion")
        right = ax.twinx()
        right.spines["right"].set_visible(True)
        right.plot(alphas, [_value(r.r_s) for r in rows], "^--", color="C2",
                   label=METRIC_LABELS["r_s"])
        right.set_ylabel("distance stretch")
        handles = ax.get_legend_handles_labels()
        extra = right.get_legend_handles_labels()
        ax.legend(handles[0] + extra[0], handles[1] + extra[1], loc="best", frameon=False)
        if title:
            ax.set_title(title)
        return _save(fig, path)


def plot_comparison(rows: Sequence, path: str | PathLike, title: str = "") -> Path:
    """Grouped bars of the three metrics per method."""
    with plt.rc_context(_STYLE):
        fig, axes = plt.subplots(1, 3, figsize=(9.0, 3.0))
        names = [r.method for r in rows]
        for ax, key in zip(axes, ("r_d_in", "r_d_out", "r_s")):
            vals = [_value(getattr(r, key)) for r in rows]
            ax.bar(range(len(names)), vals, color=[f"C{i}" for i in range(len(names))])
            ax.set_xticks(range(len(names)))
            ax.set_xticklabels(names, rotation=45, ha="right")
            ax.set_title(METRIC_LABELS[key])
        if title:
            fig.suptitle(title)
        fig.tight_layout()
        return _save(fig, path)


def plot_robustness(rows: Sequence, path: str | PathLike, title: str = "") -> Path:
    """Each metric against deletion ratio, one line per method."""
    with plt.rc_context(_STYLE):
        fig, axes = plt.subplots(1, 3, figsize=(10.0, 3.2), sharex=True)
        methods = list(dict.fromkeys(r.method for r in rows))
        for ax, key in zip(axes, ("r_d_in", "r_d_out", "r_s")):
            for i, m in enumerate(methods):
                sel = [r for r in rows if r.method == m]
                ax.plot([r.ratio for r in sel], [_value(getattr(r, key)) for r in sel],
                        "o-", color=f"C{i}", label=m)
            ax.set_xlabel("deletion ratio")
            ax.set_title(METRIC_LABELS[key])
        axes[0].legend(frameon=False)
        if title:
            fig.suptitle(title)
        fig.tight_layout()
        return _save(fig, path)
