"""Figure rendering for the CLI report paths (PNG files, Agg backend)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .bounds import ErrorCurve
from .validation import CVSummary

_CURVE_STYLE = {
    ("length", "arclength"): ("tab:blue", "length / equal spacing"),
    ("distance", "arclength"): ("tab:orange", "distance / equal spacing"),
    ("length", "curvature"): ("tab:green", "length / equal turning"),
    ("distance", "curvature"): ("tab:red", "distance / equal turning"),
}


def save_error_curves(curves: list[ErrorCurve], contour_id: str,
                      threshold: float, path: str | Path) -> None:
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for curve in curves:
        ks = [k for k, _ in curve.values]
        errs = [err for _, err in curve.values]
        color, label = _CURVE_STYLE[(curve.criterion, curve.parameterization)]
        ax.plot(ks, errs, color=color, label=label, linewidth=1.2)
    ax.axhline(threshold, color="gray", linestyle="--", linewidth=0.8,
               label=f"threshold {threshold:g}")
    ax.set_yscale("log")
    ax.set_xlabel("k")
    ax.set_ylabel("relative error")
    ax.set_title(contour_id)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_rmse_histogram(summary: CVSummary, path: str | Path,
                        markers: dict[str, float] | None = None) -> None:
    """Null/replicate RMSE histogram with optional observed-value markers."""
    fig, ax = plt.subplots(figsize=(6, 4))
    edges = summary.histogram.bin_edges
    counts = summary.histogram.counts
    widths = edges[1:] - edges[:-1] if len(edges) > 1 else [1.0]
    ax.bar(edges[:-1] if len(edges) > 1 else edges[:1], counts, width=widths,
           align="edge", color="tab:blue", alpha=0.75)
    for i, (label, value) in enumerate(sorted((markers or {}).items())):
        ax.axvline(value, color=f"C{i + 1}", linestyle="--", linewidth=1.0,
                   label=f"{label}: {value:.2f}")
    if markers:
        ax.legend(fontsize=8)
    ax.set_xlabel("test RMSE")
    ax.set_ylabel("replicates")
    ax.set_title(summary.response)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
