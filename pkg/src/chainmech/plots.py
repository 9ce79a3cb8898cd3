"""Figure rendering for the report and scan outputs.

Whenever the CLI writes delimited output to a file, a companion PNG lands
next to it: the report gets an error-vs-tolerance chart, a bifurcation scan
gets the classic attractor scatter over a Lyapunov trace.  Rendering is
headless (Agg backend).
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .dynamics import REGIME_CHAOTIC, ScanRow
from .report import ReportRow

__all__ = ["save_report_figure", "save_bifurcation_figure", "companion_figure_path"]

_ERROR_FLOOR = 1e-18  # display floor so exact-zero errors survive the log axis


def companion_figure_path(out_path) -> str:
    p = Path(out_path)
    return str(p.with_suffix(".png")) if p.suffix != ".png" else str(p.with_name(p.stem + "_fig.png"))


def save_report_figure(rows: list[ReportRow], path) -> None:
    """Horizontal error bars against per-row tolerance markers, log scale."""
    labels = [r.label for r in rows]
    errors = np.array([max(r.error, _ERROR_FLOOR) for r in rows])
    tols = np.array([max(r.tolerance, _ERROR_FLOOR) for r in rows])
    colors = ["tab:green" if r.passed else "tab:red" for r in rows]

    fig, ax = plt.subplots(figsize=(9, 0.42 * len(rows) + 1.6))
    y = np.arange(len(rows))
    ax.barh(y, errors, color=colors, alpha=0.8, height=0.6)
    ax.scatter(tols, y, marker="|", s=180, color="k", zorder=3, label="tolerance")
    ax.set_xscale("log")
    ax.set_yticks(y)
    ax.set_yticklabels(labels, fontsize=8)
    ax.invert_yaxis()
    ax.set_xlabel("error (relative unless the reference is zero)")
    ax.set_title("reference reproduction: error vs tolerance")
    ax.legend(loc="lower right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_bifurcation_figure(rows: list[ScanRow], path) -> None:
    """Attractor samples per r (top) and the Lyapunov exponent (bottom)."""
    rs = np.array([row.r for row in rows])
    lams = np.array([row.lyapunov for row in rows])

    fig, (ax_orbit, ax_lam) = plt.subplots(
        2, 1, figsize=(8, 7), sharex=True, height_ratios=[2.2, 1]
    )
    for row in rows:
        ax_orbit.plot(
            np.full(len(row.samples), row.r), row.samples, ",k", markersize=0.5, alpha=0.4
        )
    ax_orbit.set_ylabel("attractor samples")
    ax_orbit.set_title("bifurcation scan")

    ax_lam.plot(rs, lams, lw=1.0, color="tab:blue")
    ax_lam.axhline(0.0, color="k", lw=0.6, ls="--")
    chaotic = np.array([row.regime == REGIME_CHAOTIC for row in rows])
    if chaotic.any():
        ax_lam.plot(rs[chaotic], lams[chaotic], ".", color="tab:red", ms=3, label="chaotic")
        ax_lam.legend(fontsize=8)
    ax_lam.set_xlabel("r")
    ax_lam.set_ylabel("Lyapunov exponent (nats/iter)")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
