"""Render metric reports and convergence traces to image files.

Used by the CLI report path: figures are written next to the delimited
text output, never shown interactively.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .core import SortTrace
from .metrics import DisorderReport


def save_trace_figure(trace: SortTrace, path: str | Path) -> Path:
    """Plot the potential (negated inversion count) across merge passes."""
    path = Path(path)
    indices = [i for i, _ in trace.passes]
    potentials = [value for _, value in trace.passes]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.step(indices, potentials, where="post", marker="o")
    ax.set_xlabel("merge pass")
    ax.set_ylabel("potential (-inversions)")
    ax.set_title("convergence to sorted order")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def save_report_figure(report: DisorderReport, path: str | Path) -> Path:
    """Bar chart of the metric bundle on a symmetric log scale."""
    path = Path(path)
    labels = ["inversions"]
    values = [float(report.inversions)]
    for curve, value in report.curved.items():
        labels.append(f"curve {curve.label}")
        values.append(value)
    labels.append("tie entropy (bits)")
    values.append(report.residual_tie_entropy_bits)
    labels.append("baseline (bits)")
    values.append(report.permutation_entropy_baseline_bits)

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.barh(range(len(values)), values)
    ax.set_yticks(range(len(values)), labels)
    ax.set_xscale("symlog")
    ax.invert_yaxis()
    ax.set_xlabel("value")
    ax.set_title(f"disorder metrics, n={report.n}")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
