"""Corpus figures rendered to SVG files.

Two chart families: the corpus-wide canonical-correlation distribution
(networks on the x-axis, sorted by descending value) and one
factor-loading chart per metric, sharing that same x ordering.

Figures must be byte-identical across reruns, so the SVG backend gets a
fixed hash salt and no creation date. Output is SVG 1.1.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .centrality import METRICS
from .pipeline import CorpusReport

_SVG_RC = {
    "svg.hashsalt": "centrafactor",
    "figure.dpi": 100,
    "axes.grid": True,
    "grid.alpha": 0.3,
}
_FACTOR_COLORS = {1: "tab:blue", 2: "tab:red", 3: "tab:green"}


def _save(fig, path: Path) -> None:
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def plot_ccc_distribution(
    report: CorpusReport, path: str | Path, strong_threshold: float = 0.79
) -> Path:
    """Sorted canonical-correlation chart with guide lines at the
    strong-correlation threshold. Returns the written path."""
    path = Path(path)
    values = [item["ccc"] for item in report.sorted_ccc]
    with plt.rc_context(_SVG_RC):
        fig, ax = plt.subplots(figsize=(8, 4.5), constrained_layout=True)
        if values:
            xs = np.arange(1, len(values) + 1)
            ax.plot(xs, values, marker="o", markersize=4, linewidth=1.0,
                    color="tab:blue")
            ax.set_xlim(0.5, len(values) + 0.5)
        ax.axhline(strong_threshold, color="gray", linestyle="--", linewidth=0.8)
        ax.axhline(-strong_threshold, color="gray", linestyle="--", linewidth=0.8)
        ax.set_ylim(-1.05, 1.05)
        ax.set_xlabel("network rank (descending canonical correlation)")
        ax.set_ylabel("canonical correlation")
        ax.set_title("Canonical correlation across the corpus")
        _save(fig, path)
    return path


def plot_factor_loadings(
    report: CorpusReport, out_dir: str | Path, prefix: str = "loadings"
) -> dict[str, Path]:
    """One chart per metric: absolute final loading per factor, per network.

    The x ordering matches the canonical-correlation chart. A network in
    that ordering without a factor model contributes no series points;
    a gray cross at the baseline marks the gap. Returns paths by metric.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    order = [item["name"] for item in report.sorted_ccc]
    models = {
        r.name: r.factor_model for r in report.networks if r.factor_model is not None
    }
    written: dict[str, Path] = {}
    for metric_index, metric in enumerate(METRICS):
        with plt.rc_context(_SVG_RC):
            fig, ax = plt.subplots(figsize=(8, 4.5), constrained_layout=True)
            xs = np.arange(1, len(order) + 1)
            gaps = [x for x, name in zip(xs, order) if name not in models]
            for factor in (1, 2, 3):
                ys = np.full(len(order), np.nan)
                for x, name in zip(xs, order):
                    fm = models.get(name)
                    if fm is not None and factor <= fm.m:
                        ys[x - 1] = abs(fm.loadings[metric_index][factor - 1])
                if np.any(np.isfinite(ys)):
                    ax.plot(xs, ys, linestyle="none", marker="o", markersize=4,
                            color=_FACTOR_COLORS[factor], label=f"factor {factor}")
            if gaps:
                ax.plot(gaps, np.zeros(len(gaps)), linestyle="none", marker="x",
                        markersize=5, color="lightgray", label="no factor model")
            if len(order):
                ax.set_xlim(0.5, len(order) + 0.5)
            ax.set_ylim(-0.05, 1.1)
            ax.set_xlabel("network rank (descending canonical correlation)")
            ax.set_ylabel("absolute final loading")
            ax.set_title(f"Final factor loadings: {metric}")
            if ax.has_data():
                ax.legend(loc="lower right", fontsize=8)
            path = out_dir / f"{prefix}_{metric}.svg"
            _save(fig, path)
            written[metric] = path
    return written


def emit_plots(
    report: CorpusReport, out_dir: str | Path, strong_threshold: float = 0.79
) -> dict[str, Path]:
    """Write the full figure set for a corpus report into ``out_dir``."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = {"ccc": plot_ccc_distribution(
        report, out_dir / "ccc_distribution.svg", strong_threshold
    )}
    written.update(plot_factor_loadings(report, out_dir))
    return written
