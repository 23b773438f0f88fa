"""Static figure rendering for CLI output. Everything goes through the Agg backend."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.colors import LogNorm  # noqa: E402

STYLE = {
    "font.family": "serif",
    "font.size": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 7,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "xtick.direction": "in",
    "ytick.direction": "in",
    "lines.linewidth": 1.0,
    "figure.dpi": 150,
    "savefig.bbox": "tight",
    "svg.hashsalt": "dimerfluor",
}


def figure_size(scale=1.0, ratio=None):
    width = 3.4 * scale  # single journal column, inches
    ratio = (np.sqrt(5.0) - 1.0) / 2.0 if ratio is None else ratio
    return width, width * ratio


def _save(fig, path):
    # no timestamp in the metadata keeps repeated runs byte-identical
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)


def line_plot(path, x, series, xlabel, ylabel, logx=False, logy=False, title=None,
              vlines=()):
    """``series`` is a list of ``(y, label, style)`` tuples."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=figure_size(1.4))
        for y, label, style in series:
            ax.plot(x, y, style, label=label)
        for xv, label in vlines:
            ax.axvline(xv, color="0.4", ls=":", lw=0.8)
            ax.annotate(label, (xv, 1), xycoords=("data", "axes fraction"), fontsize=7,
                        ha="left", va="top")
        if logx:
            ax.set_xscale("log")
        if logy:
            ax.set_yscale("log")
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        if title:
            ax.set_title(title, fontsize=9)
        if any(lbl for _, lbl, _ in series):
            ax.legend(frameon=False)
        _save(fig, path)


def map_plot(path, x, y, z, xlabel, ylabel, zlabel, logx=False, logy=False, logz=False,
             overlay=None, title=None):
    """Colour map of ``z[len(y), len(x)]``; ``overlay`` is ``(x, y, label)`` or None."""
    z = np.asarray(z, dtype=float)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=figure_size(1.4, 0.75))
        norm = None
        if logz:
            positive = z[z > 0]
            if positive.size:
                norm = LogNorm(vmin=max(positive.min(), positive.max() * 1e-8), vmax=positive.max())
                z = np.where(z > 0, z, np.nan)
        mesh = ax.pcolormesh(x, y, z, shading="nearest", norm=norm, cmap="viridis")
        fig.colorbar(mesh, ax=ax, label=zlabel)
        if overlay is not None:
            ox, oy, label = overlay
            limits = ax.get_xlim(), ax.get_ylim()
            ax.plot(ox, oy, "w--", lw=1.0, label=label)
            ax.set_xlim(*limits[0])
            ax.set_ylim(*limits[1])
            ax.legend(frameon=False, labelcolor="w")
        if logx:
            ax.set_xscale("log")
        if logy:
            ax.set_yscale("log")
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        if title:
            ax.set_title(title, fontsize=9)
        _save(fig, path)


def spectrum_plot(path, series, peaks=(), scale=1.0, title=None):
    """Total spectrum with its four components; ``scale`` divides the frequency axis."""
    w = series.omegas / scale
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=figure_size(1.4))
        ax.plot(w, series.total, "C0-", label="total")
        if np.all(np.isfinite(series.s1)):
            ax.plot(w, series.s1, "C4-", lw=0.7, label="S1")
            ax.plot(w, series.s2, "C1--", lw=0.7, label="S2")
            ax.plot(w, series.s12 + series.s21, "C2:", lw=0.7, label="S12+S21")
        for p in peaks:
            ax.axvline(p.omega / scale, color="0.6", ls="--", lw=0.5)
        ax.set_xlabel(r"$\omega$" + ("" if scale == 1.0 else " / R"))
        ax.set_ylabel(r"$S(\omega)$")
        ax.set_yscale("symlog", linthresh=max(1e-6, float(np.abs(series.total).max()) * 1e-4))
        if title:
            ax.set_title(title, fontsize=9)
        ax.legend(frameon=False)
        _save(fig, path)
