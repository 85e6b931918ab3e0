"""CSV emission and quick-look figure rendering for the experiment runner.

The CSV is the deterministic contract: a ``#``-prefixed header embeds the
resolved configuration and the package version, every float is printed with
17 significant digits (round-trip exact), and rows appear in grid order, so
identical (config, seed) reproduce identical bytes. Figures are advisory
plots rendered next to the CSV from the same rows.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from . import __version__

__all__ = ["format_value", "write_csv", "render_figure"]


def format_value(value) -> str:
    """Render one CSV cell; floats get 17 significant digits."""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return f"{value:.17g}"
    return str(value)


def write_csv(
    path: str | Path,
    columns: Sequence[str],
    rows: Sequence[Sequence],
    header: Mapping[str, object],
) -> Path:
    """Write rows with a ``#`` metadata header; returns the path."""
    path = Path(path)
    lines = [f"# openchain {__version__}"]
    for key, value in header.items():
        lines.append(f"# {key} = {format_value(value)}")
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(format_value(v) for v in row))
    path.write_text("\n".join(lines) + "\n")
    return path


def _column(rows, columns, name) -> np.ndarray:
    i = list(columns).index(name)
    return np.array([row[i] for row in rows], dtype=float)


def _heatmap(ax, x, y, z, xlabel, ylabel, zlabel):
    xs = np.unique(x)
    ys = np.unique(y)
    grid = np.full((len(ys), len(xs)), np.nan)
    xi = {v: i for i, v in enumerate(xs)}
    yi = {v: i for i, v in enumerate(ys)}
    for xv, yv, zv in zip(x, y, z):
        grid[yi[yv], xi[xv]] = zv
    mesh = ax.pcolormesh(xs, ys, grid, shading="nearest")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.figure.colorbar(mesh, ax=ax, label=zlabel)


def render_figure(
    experiment: str,
    columns: Sequence[str],
    rows: Sequence[Sequence],
    meta: Mapping[str, object],
    path: str | Path,
) -> Path:
    """Render the quick-look figure for an experiment's rows."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    col = lambda name: _column(rows, columns, name)

    if experiment == "ness-scan":
        _heatmap(ax, col("gamma_out"), col("gamma_phi"), col("i_se"),
                 "gamma_out [t]", "gamma_phi [t]", "I_se [t]")
    elif experiment == "disorder-scan":
        _heatmap(ax, col("disorder_w"), col("gamma_phi"), col("i_se_mean"),
                 "W [t]", "gamma_phi [t]", "<I_se> [t]")
    elif experiment in ("widths-scan", "superradiant-gamma"):
        ax.loglog(col("gamma_out"), col("width_max"), "o-", ms=3, label="largest width")
        ax.loglog(col("gamma_out"), col("width_subradiant_mean"), "^-", ms=3,
                  label="subradiant mean")
        if "gamma_st" in meta:
            ax.axvline(float(meta["gamma_st"]), ls="--", c="k", lw=0.8,
                       label=f"transition {float(meta['gamma_st']):.3g}")
        ax.set_xlabel("gamma_out [t]")
        ax.set_ylabel("decay width [t]")
        ax.legend()
    elif experiment == "transfer-time":
        gp = col("gamma_phi")
        for val in np.unique(gp):
            sel = gp == val
            line, = ax.loglog(col("gamma_out")[sel], col("tau_numeric")[sel], "o", ms=3,
                              label=f"gamma_phi={val:g}")
            ax.loglog(col("gamma_out")[sel], col("tau_closed")[sel], "-", lw=0.9,
                      color=line.get_color())
        ax.set_xlabel("gamma_out [t]")
        ax.set_ylabel("tau [1/t]")
        ax.legend(fontsize=8)
    elif experiment == "current-vs-pump":
        ax.loglog(col("gamma_in"), col("i_ness"), "o", ms=3, label="steady state")
        ax.loglog(col("gamma_in"), col("i_closed"), "-", lw=0.9, label="closed form")
        if "tau" in meta:
            ax.axvline(1.0 / float(meta["tau"]), ls="--", c="k", lw=0.8, label="1/tau")
        ax.set_xlabel("gamma_in [t]")
        ax.set_ylabel("I [t]")
        ax.legend()
    elif experiment == "max-current-vs-dephasing":
        ax.loglog(col("gamma_phi"), col("i_se"), "o", ms=3, label="numerics")
        ax.loglog(col("gamma_phi"), col("i_se_closed"), "-", lw=0.9, label="closed form")
        ax.set_xlabel("gamma_phi [t]")
        ax.set_ylabel("I_se [t]")
        ax.legend()
    elif experiment == "conductance-scan":
        ax.semilogx(col("gamma"), col("g"), "o-", ms=3)
        if "gamma_peak" in meta:
            ax.axvline(float(meta["gamma_peak"]), ls="--", c="k", lw=0.8)
        ax.set_xlabel("gamma [t]")
        ax.set_ylabel("g [e^2/h]")
    elif experiment == "spectral-scan":
        sites = col("site").astype(int)
        shown = sorted(set(sites))
        picks = {shown[0], shown[len(shown) // 2], shown[-1]}
        for s in sorted(picks):
            sel = sites == s
            ax.plot(col("omega")[sel], col("a")[sel], lw=1.0, label=f"site {s}")
        ax.set_xlabel("omega [t]")
        ax.set_ylabel("A(omega) [1/t]")
        ax.legend()
    elif experiment == "se-me-compare":
        ax.loglog(col("gamma_in"), col("i_se"), "-", lw=0.9, label="single excitation")
        ax.loglog(col("gamma_in"), col("i_me"), "o", ms=3, label="full manifold")
        if "tau" in meta:
            ax.axvline(1.0 / float(meta["tau"]), ls="--", c="k", lw=0.8, label="1/tau")
        ax.set_xlabel("gamma_in [t]")
        ax.set_ylabel("I [t]")
        ax.legend()
    elif experiment == "loss-scan":
        ax.loglog(col("gamma_loss"), col("i_ness"), "o-", ms=3)
        if "tau0" in meta:
            ax.axvline(1.0 / float(meta["tau0"]), ls="--", c="k", lw=0.8, label="1/tau")
            ax.legend()
        ax.set_xlabel("gamma_loss [t]")
        ax.set_ylabel("I [t]")
    else:
        plt.close(fig)
        raise ValueError(f"no figure defined for experiment {experiment!r}")

    ax.set_title(experiment)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
