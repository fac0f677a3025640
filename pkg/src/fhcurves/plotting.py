"""Deterministic SVG line charts."""

from __future__ import annotations

import warnings
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

_RC = {"svg.hashsalt": "fhcurves", "svg.fonttype": "path", "font.size": 9}


def line_chart(path: Path, series, xlabel: str, ylabel: str, title: str,
               logx: bool = False, logy: bool = False) -> Path:
    """series: (label, xs, ys) triples.  Non-positive values are dropped on log axes."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(6.4, 4.2))
        drawn = 0
        for label, xs, ys in series:
            pts = [(x, y) for x, y in zip(xs, ys)
                   if (not logx or x > 0) and (not logy or y > 0)]
            if not pts:
                continue
            ax.plot([p[0] for p in pts], [p[1] for p in pts], marker=".", linewidth=1, label=label)
            drawn += 1
        if drawn:
            if logx:
                ax.set_xscale("log")
            if logy:
                ax.set_yscale("log")
            ax.legend(fontsize=7)
        else:
            warnings.warn(f"{path.name}: no samples to plot; writing a placeholder")
            ax.text(0.5, 0.5, "no samples", ha="center", va="center", transform=ax.transAxes)
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        ax.set_title(title)
        ax.grid(True, which="major", alpha=0.3)
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
    return path
