"""SVG renderings of edge shape sequences.

Each shape gets its own panel: columns are the first cell coordinate, rows
are levels (highest on top), occupied cells are shaded and labelled with
their multiplicity or, when a coloring is given, with their color.
"""

from __future__ import annotations

import io

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "polychrome"
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.patches import Rectangle  # noqa: E402

from polychrome.colorings import Coloring  # noqa: E402
from polychrome.grid import ShapeSequence, level  # noqa: E402


def render_sequence(seq: ShapeSequence, coloring: Coloring | None = None) -> str:
    """Return the SVG text for ``seq`` (edge sequences only)."""
    if seq.i != 1:
        raise ValueError("only edge shape sequences (i = 1) can be drawn on the plane")
    lv = seq.levels
    lo, hi = lv if lv is not None else (0, 0)
    cols = [c[0] for s in seq.shapes for c, _ in s.cells] or [0]
    c_lo, c_hi = min(cols), max(cols)
    ncol = c_hi - c_lo + 1
    nrow = hi - lo + 1
    k = max(1, len(seq.shapes))
    fig, axes = plt.subplots(1, k, figsize=(0.5 * ncol * k + 1, 0.5 * nrow + 1), squeeze=False)
    for ax, s in zip(axes[0], seq.shapes):
        for c, m in s.cells:
            x, y = c[0] - c_lo, level(c) - lo
            ax.add_patch(Rectangle((x, y), 1, 1, facecolor="0.75", edgecolor="black"))
            label = str(coloring(c)) if coloring is not None else (str(m) if m > 1 else "")
            if label:
                ax.text(x + 0.5, y + 0.5, label, ha="center", va="center", fontsize=9)
        ax.set_xlim(0, ncol)
        ax.set_ylim(0, nrow)
        ax.set_aspect("equal")
        ax.set_xticks([x + 0.5 for x in range(ncol)], [str(x + c_lo) for x in range(ncol)])
        ax.set_yticks([y + 0.5 for y in range(nrow)], [str(y + lo) for y in range(nrow)])
        ax.grid(False)
        ax.set_title(s.label, fontsize=10)
    for ax in axes[0][len(seq.shapes):]:
        ax.set_axis_off()
    axes[0][0].set_ylabel("level")
    fig.suptitle(f"gaps {','.join(map(str, seq.gaps))}  puncture {seq.puncture}", fontsize=10)
    buf = io.StringIO()
    # fixed metadata keeps the output stable between runs
    fig.savefig(buf, format="svg", metadata={"Date": None, "Creator": None})
    plt.close(fig)
    return buf.getvalue()
