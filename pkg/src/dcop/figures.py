"""Report figures: scatter, empirical-copula surface and rank-cell panels.

Rendered to files next to the delimited CLI output when ``--figures`` is
given.  Everything uses the Agg backend, so rendering works headless.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .empirical import TiePolicy
from .postprocess import EnsembleForecast, ensemble_rank_matrix


def _copula_grid(rank_rows: np.ndarray) -> np.ndarray:
    m = rank_rows.shape[0]
    grid = np.zeros((m + 1, m + 1))
    for i in range(1, m + 1):
        for j in range(1, m + 1):
            grid[i, j] = np.sum((rank_rows[:, 0] <= i) & (rank_rows[:, 1] <= j)) / m
    return grid


def save_dependence_figures(
    ref: EnsembleForecast,
    out: EnsembleForecast,
    outdir: str | Path,
    policy: TiePolicy,
    prefix: str = "",
) -> list[Path]:
    """Write scatter.png, copula.png and ranks.png comparing ref and out."""
    if ref.dim < 2 or out.dim < 2:
        raise ValueError("dependence figures need at least two margins")
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    # Figures show the first margin pair; higher-dimensional structure is
    # already summarized in the delimited report.
    a, b = 0, 1
    panels = [("reference", ref), ("output", out)]
    written: list[Path] = []

    fig, axes = plt.subplots(1, 2, figsize=(9, 4.2), sharex=False)
    for ax, (title, ens) in zip(axes, panels):
        ax.scatter(ens.margin(a), ens.margin(b), s=18, color="tab:red", alpha=0.8)
        ax.set_xlabel(ens.margin_ids[a])
        ax.set_ylabel(ens.margin_ids[b])
        ax.set_title(title)
    fig.tight_layout()
    path = outdir / f"{prefix}scatter.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    written.append(path)

    fig, axes = plt.subplots(1, 2, figsize=(9, 4.2))
    for ax, (title, ens) in zip(axes, panels):
        rm = ensemble_rank_matrix(ens, policy)[:, (a, b)]
        grid = _copula_grid(rm)
        m = ens.size
        im = ax.imshow(
            grid.T,
            origin="lower",
            extent=(0, 1, 0, 1),
            cmap="viridis",
            vmin=0.0,
            vmax=1.0,
        )
        ax.contour(
            np.linspace(0, 1, m + 1),
            np.linspace(0, 1, m + 1),
            grid.T,
            levels=np.linspace(0.1, 0.9, 9),
            colors="white",
            linewidths=0.6,
        )
        ax.set_title(f"empirical copula ({title})")
        fig.colorbar(im, ax=ax, shrink=0.85)
    fig.tight_layout()
    path = outdir / f"{prefix}copula.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    written.append(path)

    fig, axes = plt.subplots(1, 2, figsize=(9, 4.2))
    for ax, (title, ens) in zip(axes, panels):
        rm = ensemble_rank_matrix(ens, policy)[:, (a, b)]
        ax.scatter(rm[:, 0], rm[:, 1], marker="s", s=30, color="tab:blue")
        ax.set_xlim(0.5, ens.size + 0.5)
        ax.set_ylim(0.5, ens.size + 0.5)
        ax.set_aspect("equal")
        ax.set_title(f"rank cells ({title})")
        ax.set_xlabel(f"rank {ens.margin_ids[a]}")
        ax.set_ylabel(f"rank {ens.margin_ids[b]}")
    fig.tight_layout()
    path = outdir / f"{prefix}ranks.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    written.append(path)
    return written
