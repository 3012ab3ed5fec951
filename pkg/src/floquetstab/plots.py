"""Static figure rendering for the CLI report paths.

Follows the reference color convention: spectrum in blue, intervals of
maximal multiplicity as magenta lines parallel to the imaginary axis,
bifurcation index as dashed red.  Figures are written as SVG files next to
the delimited output.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np


def save_spectrum(points, path, title="", xlim=None, ylim=None):
    lam = np.array([p.lam for p in points])
    fig, ax = plt.subplots(figsize=(5, 5))
    ax.plot(lam.real, lam.imag, ".", color="tab:blue", markersize=1.2)
    ax.axvline(0.0, color="0.8", lw=0.5, zorder=0)
    ax.axhline(0.0, color="0.8", lw=0.5, zorder=0)
    ax.set_xlabel(r"Re $\lambda$")
    ax.set_ylabel(r"Im $\lambda$")
    if xlim:
        ax.set_xlim(*xlim)
    if ylim:
        ax.set_ylim(*ylim)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def save_classifier_trace(report, path, title=""):
    fig, ax = plt.subplots(figsize=(6, 4))
    ys = report.grid
    key = next(iter(report.samples[0].classifiers), None)
    if key is not None:
        vals = np.array([s.classifiers.get(key, np.nan) for s in report.samples])
        ax.plot(ys, vals, "-", color="tab:blue", lw=1.0, label=key)
        ax.axhline(0.0, color="0.7", lw=0.6)
    for iv in report.intervals:
        mx = max(s.multiplicity or 0 for s in report.samples)
        if iv.multiplicity == mx and mx > 0:
            ax.axvspan(iv.lo_im, iv.hi_im, color="magenta", alpha=0.25)
    ax.set_xlabel(r"Im $\lambda$")
    if title:
        ax.set_title(title)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def save_bifurcation_overlay(report, points, path, title="", swap_axes=False):
    """Spectrum (blue) + maximal-multiplicity intervals (magenta) + the
    bifurcation index graph (dashed red, rescaled) in one panel.

    ``swap_axes`` mirrors the rotated-index presentation: the index is
    plotted against Im(lambda) on the vertical axis.
    """
    fig, ax = plt.subplots(figsize=(5.5, 5.5))
    if points:
        lam = np.array([p.lam for p in points])
        ax.plot(lam.real, lam.imag, ".", color="tab:blue", markersize=1.1,
                label="spectrum")
    mx = max((iv.multiplicity for iv in report.intervals), default=0)
    for iv in report.intervals:
        if iv.multiplicity == mx and mx > 0:
            ax.plot([0.02, 0.02], [iv.lo_im, iv.hi_im], color="magenta", lw=2.5,
                    solid_capstyle="butt")
            ax.plot([-0.02, -0.02], [-iv.hi_im, -iv.lo_im], color="magenta", lw=2.5,
                    solid_capstyle="butt")
    phi = report.phi_values
    scale = np.max(np.abs(phi)) or 1.0
    width = max(np.max(np.abs(np.array([p.lam.real for p in points]))), 0.2) if points else 0.5
    ax.plot(phi / scale * width, report.grid, "--", color="red", lw=1.0,
            label="bifurcation index (scaled)")
    for z in report.phi_zeros:
        ax.plot([0], [z.im], "o", color="red", markersize=4, fillstyle="none")
    ax.axvline(0.0, color="0.85", lw=0.5, zorder=0)
    ax.set_xlabel(r"Re $\lambda$")
    ax.set_ylabel(r"Im $\lambda$")
    if title:
        ax.set_title(title)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def save_wave(xs, vals, path, title=""):
    fig, ax = plt.subplots(figsize=(6, 3.2))
    ax.plot(xs, vals, "-", color="tab:blue")
    ax.set_xlabel("x")
    ax.set_ylabel(r"$\phi$")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
