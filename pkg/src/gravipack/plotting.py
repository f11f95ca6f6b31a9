"""Matplotlib rendering of density comparisons.

Figures are written as self-contained SVG with an 800 x 500 viewBox.  The
hash salt and date metadata are pinned so the same data always produces
the same file.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib as mpl  # noqa: E402
import matplotlib.pyplot as plt  # noqa: E402

WIDTH_PT, HEIGHT_PT = 800, 500
_STYLE = {
    "svg.hashsalt": "gravipack",
    "svg.fonttype": "path",
    "font.size": 12,
    "axes.labelsize": 14,
    "legend.fontsize": 12,
    "lines.linewidth": 1.8,
}


def plot_density_pair(path, x, curves, *, title="", xlabel="x (m)", ylabel=r"$\rho$ (1/m)",
                      crossings=None):
    """Plot ``curves`` (a sequence of ``(label, y)``) against ``x`` and save to ``path``.

    ``crossings`` optionally marks x positions with dotted vertical lines.
    """
    with mpl.rc_context(_STYLE):
        # figsize in inches at 72 pt/inch gives the 800 x 500 viewBox
        fig, ax = plt.subplots(figsize=(WIDTH_PT / 72.0, HEIGHT_PT / 72.0))
        for label, y in curves:
            ax.plot(x, y, label=label)
        for xc in crossings or ():
            ax.axvline(xc, color="0.5", linestyle=":", linewidth=1.0)
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        if title:
            ax.set_title(title)
        ax.legend(loc="upper right", frameon=False)
        ax.set_xlim(float(x[0]), float(x[-1]))
        ax.set_ylim(bottom=0.0)
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
    return path
