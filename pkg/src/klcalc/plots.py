"""Matplotlib figure rendering for classification reports.

Figures are written to files next to the delimited output of the ``report``
command: a diagram of the two-sided cell order (nodes by a-value, survivors
of the chosen block highlighted) and one annotated heatmap per Cartan
matrix.  Rendering is file-only; the Agg backend is forced before pyplot
loads so no display is ever needed.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .cells import a_value   # noqa: E402
from .coxeter import GroupElement  # noqa: E402
from .parablock import ParabolicBlock, cartan_matrix, cells_below_anchor  # noqa: E402

FIG_DPI = 150


def _covers(above: list[int], ncells: int) -> list[tuple[int, int]]:
    """Covering relations of the cell order (transitive reduction)."""
    edges = []
    for i in range(ncells):
        for j in range(ncells):
            if i == j or not above[i] >> j & 1:
                continue
            if any(
                k != i and k != j and above[i] >> k & 1 and above[k] >> j & 1
                for k in range(ncells)
            ):
                continue
            edges.append((i, j))
    return edges


def cell_order_figure(block: ParabolicBlock):
    """Two-sided cell order of the group, block survivors highlighted."""
    two = block._engine.two_sided_cells()
    group = block.group
    ncells = len(two.cells)
    level = [a_value(GroupElement(group, c[0])) for c in two.cells]
    by_level: dict[int, list[int]] = {}
    for k in range(ncells):
        by_level.setdefault(level[k], []).append(k)
    pos = {}
    for lv, ks in sorted(by_level.items()):
        for idx, k in enumerate(sorted(ks)):
            pos[k] = (idx - (len(ks) - 1) / 2.0, lv)

    below_anchor = {
        k for k in range(ncells)
        if two.leq_cells(k, two.cell_of[block.anchor])
    }

    fig, ax = plt.subplots(figsize=(7, 5))
    for i, j in _covers(two.above, ncells):
        (x0, y0), (x1, y1) = pos[i], pos[j]
        ax.plot([x0, x1], [y0, y1], color="0.6", lw=1, zorder=1)
    for k in range(ncells):
        x, y = pos[k]
        surviving = k in below_anchor
        ax.scatter([x], [y], s=900, zorder=2,
                   color="#1b9e77" if surviving else "#d8d8d8",
                   edgecolors="0.3")
        ax.annotate(str(two.shape(k)), (x, y), ha="center", va="center",
                    fontsize=8, zorder=3)
    ax.set_ylabel("a-value")
    ax.set_xticks([])
    ax.set_title(
        f"two-sided cells of S_{group.rank + 1}; "
        f"shaded cells carry the surviving functors (parabolic {sorted(block.subset)})"
    )
    fig.tight_layout()
    return fig


def cartan_figure(block: ParabolicBlock, cell: tuple[int, ...]):
    """Annotated heatmap of one Cartan matrix."""
    from .tableaux import rs_correspondence

    mat = cartan_matrix(block, cell)
    lam = rs_correspondence(GroupElement(block.group, cell[0]))[0].shape
    n = len(mat)
    fig, ax = plt.subplots(figsize=(0.6 * n + 2.2, 0.6 * n + 2.0))
    im = ax.imshow(mat, cmap="YlGn")
    for i in range(n):
        for j in range(n):
            ax.annotate(str(mat[i][j]), (j, i), ha="center", va="center", fontsize=7)
    ax.set_title(f"Cartan matrix, cell {lam}")
    ax.set_xticks([])
    ax.set_yticks([])
    fig.colorbar(im, ax=ax, shrink=0.8)
    fig.tight_layout()
    return fig


def write_block_figures(block: ParabolicBlock, outdir: str | Path) -> list[Path]:
    """Render the report figures for a block; returns the written paths."""
    from .tableaux import rs_correspondence

    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []

    fig = cell_order_figure(block)
    path = outdir / "cell_order.png"
    fig.savefig(path, dpi=FIG_DPI)
    plt.close(fig)
    written.append(path)

    for cell in cells_below_anchor(block):
        lam = rs_correspondence(GroupElement(block.group, cell[0]))[0].shape
        tag = "-".join(map(str, lam.parts))
        fig = cartan_figure(block, cell)
        path = outdir / f"cartan_{tag}.png"
        fig.savefig(path, dpi=FIG_DPI)
        plt.close(fig)
        written.append(path)
    return written
