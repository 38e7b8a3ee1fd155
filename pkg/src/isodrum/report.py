"""Figure rendering: domain drawings and spectrum plots.

Everything draws through the Agg backend and writes straight to a file;
nothing here opens a window.  Coordinates arrive as exact fractions from
the unfolding code and are cast to floats only at the plotting boundary.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
from matplotlib.patches import Polygon as MplPolygon

TILE_FACE = "#d9e8f5"
TILE_EDGE = "#6b8cae"
BOUNDARY = "#1a1a2e"


def _tile_patches(ax, domain):
    for placed in domain.placements:
        pts = [(float(x), float(y)) for x, y in placed.vertices(domain.base)]
        ax.add_patch(MplPolygon(
            pts, closed=True, facecolor=TILE_FACE, edgecolor=TILE_EDGE,
            linewidth=0.8, alpha=0.9,
        ))


def _draw_on(ax, domain, title):
    _tile_patches(ax, domain)
    if domain.boundary is not None:
        xs = [float(x) for x, _ in domain.boundary]
        ys = [float(y) for _, y in domain.boundary]
        xs.append(xs[0])
        ys.append(ys[0])
        ax.plot(xs, ys, color=BOUNDARY, linewidth=2.0)
    elif title is not None:
        title = f"{title} (tiles overlap)"
    ax.set_aspect("equal")
    ax.autoscale_view()
    ax.margins(0.08)
    if title:
        ax.set_title(title)
    ax.set_xticks([])
    ax.set_yticks([])
    for side in ax.spines.values():
        side.set_visible(False)


def draw_domain(domain, path, title=None) -> None:
    """Render one unfolded domain: tile outlines plus the boundary.

    Domains that fail to embed are still drawn (their overlapping tiles
    are the interesting part); the boundary line is simply absent.
    """
    fig, ax = plt.subplots(figsize=(5, 5))
    _draw_on(ax, domain, title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def draw_pair(domain_a, domain_b, path, titles=("A", "B")) -> None:
    """Render two domains side by side at the same scale."""
    fig, (ax_a, ax_b) = plt.subplots(1, 2, figsize=(10, 5))
    _draw_on(ax_a, domain_a, titles[0])
    _draw_on(ax_b, domain_b, titles[1])
    xlims = (*ax_a.get_xlim(), *ax_b.get_xlim())
    ylims = (*ax_a.get_ylim(), *ax_b.get_ylim())
    for ax in (ax_a, ax_b):
        ax.set_xlim(min(xlims), max(xlims))
        ax.set_ylim(min(ylims), max(ylims))
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_spectrum(spectrum, path, label=None) -> None:
    """Plot eigenvalues against their index for one spectrum."""
    fig, ax = plt.subplots(figsize=(6, 4))
    idx = range(1, len(spectrum.eigenvalues) + 1)
    ax.plot(idx, spectrum.eigenvalues, "o-", label=label)
    ax.set_xlabel("index")
    ax.set_ylabel("eigenvalue")
    ax.set_xticks(list(idx))
    ax.set_title(f"Dirichlet eigenvalues, h = {spectrum.h}")
    if label:
        ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_comparison(spectrum_a, spectrum_b, comparison, path,
                    labels=("A", "B")) -> None:
    """Two panels: overlaid spectra, and per-index relative differences
    against the comparison tolerance."""
    fig, (top, bottom) = plt.subplots(
        2, 1, figsize=(6, 7), height_ratios=[3, 2], sharex=True,
    )
    idx = list(range(1, len(spectrum_a.eigenvalues) + 1))
    top.plot(idx, spectrum_a.eigenvalues, "o-", label=labels[0])
    top.plot(idx, spectrum_b.eigenvalues, "s--", label=labels[1])
    top.set_ylabel("eigenvalue")
    top.set_title(f"h = {spectrum_a.h}, k = {spectrum_a.k}")
    top.legend()
    top.grid(True, alpha=0.3)

    bottom.bar(idx, comparison.rel_diffs, width=0.6, color=TILE_EDGE)
    bottom.axhline(comparison.rel_tol, color="crimson", linestyle=":",
                   label=f"tolerance {comparison.rel_tol:g}")
    bottom.set_yscale("log")
    bottom.set_xlabel("index")
    bottom.set_ylabel("relative difference")
    bottom.set_xticks(idx)
    bottom.legend()
    bottom.grid(True, alpha=0.3)

    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
