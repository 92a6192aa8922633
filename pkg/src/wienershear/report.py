"""Figure rendering for the CLI report paths.

Figures are written next to the delimited output when an output directory is
given; the CSV/JSON remain the machine-readable interface.  Matplotlib is
imported lazily with the Agg backend so headless runs never touch a display.
"""

from __future__ import annotations

import os

__all__ = ["growth_figure", "sweep_figure", "residual_figure"]


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def growth_figure(path, Ns, ratios, slope, intercept, title: str) -> str:
    """Log-log ratio-versus-scale plot with the fitted power law."""
    import numpy as np

    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(5.0, 3.4))
    ax.loglog(Ns, ratios, "o", color="tab:blue", label="measured ratio")
    xs = np.linspace(min(Ns), max(Ns), 64)
    ax.loglog(xs, np.exp(intercept) * xs**slope, "-", color="tab:orange",
              label=f"fit slope {slope:.3f}")
    ax.set_xlabel("scale N")
    ax.set_ylabel("norm ratio")
    ax.set_title(title, fontsize=10)
    ax.legend(fontsize=8)
    ax.grid(True, which="both", linestyle=":", alpha=0.5)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return os.fspath(path)


def sweep_figure(path, results) -> str:
    """Per-case consistency strip: threshold margin against measured growth."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.0, 3.6))
    xs_ok, ys_ok, xs_bad, ys_bad = [], [], [], []
    for r in results:
        if not r.ratios:
            continue
        margin = float(r.case.margin)
        growth = r.slope if r.slope is not None else (
            (r.ratios[-1] / r.ratios[0]) - 1.0)
        (xs_ok if r.consistent else xs_bad).append(margin)
        (ys_ok if r.consistent else ys_bad).append(growth)
    ax.scatter(xs_ok, ys_ok, s=12, color="tab:green", label="consistent")
    if xs_bad:
        ax.scatter(xs_bad, ys_bad, s=20, color="tab:red", marker="x",
                   label="inconsistent")
    ax.axvline(0.0, color="k", linewidth=0.8)
    ax.axhline(0.0, color="k", linewidth=0.8)
    ax.set_xlabel("margin s - s*")
    ax.set_ylabel("measured growth (slope or relative increase)")
    ax.set_title("verdict vs witness behavior", fontsize=10)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return os.fspath(path)


def residual_figure(path, points, residuals, title: str) -> str:
    """Scatter of identity residuals over the sampled phase-plane points."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(5.0, 3.8))
    xs = [p[0] for p in points]
    ws = [p[1] for p in points]
    sc = ax.scatter(xs, ws, c=residuals, s=22, cmap="viridis")
    fig.colorbar(sc, ax=ax, label="relative residual")
    ax.set_xlabel("x")
    ax.set_ylabel("omega")
    ax.set_title(title, fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return os.fspath(path)
