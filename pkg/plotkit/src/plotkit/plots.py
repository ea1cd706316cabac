"""Figure builders for attrep runs.

Series extraction and figure assembly are separated from file output so
tests can assert on the plotted values instead of pixels.  Colors are a
stable hash of the (layer, agent) identity, so the same slot keeps its
color across runs.
"""

from __future__ import annotations

import hashlib
from pathlib import Path

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.figure import Figure

from .tables import PlotkitError, SummaryTable, TrajectoryTable

__all__ = [
    "trajectory_series",
    "diagnostics_series",
    "render_trajectories",
    "render_diagnostics",
    "plot_trajectories",
    "plot_diagnostics",
]


def trajectory_series(
    table: TrajectoryTable,
) -> dict[tuple[int, int], tuple[np.ndarray, np.ndarray]]:
    """Per-(layer, agent) time series, keyed 1-based as in the CSV.

    Only scalar opinions can be drawn as trajectories; higher-dimensional
    data is rejected.
    """
    if table.n_dims != 1:
        raise PlotkitError(
            f"trajectories: plotting supports scalar opinions only, data has d={table.n_dims}"
        )
    series: dict[tuple[int, int], tuple[np.ndarray, np.ndarray]] = {}
    for (layer, agent), group in table.frame.groupby(["layer", "agent"], sort=True):
        g = group.sort_values("t")
        series[(int(layer), int(agent))] = (
            g["t"].to_numpy(),
            g["value"].to_numpy(dtype=float),
        )
    return series


def diagnostics_series(summary: SummaryTable) -> dict[str, np.ndarray]:
    frame = summary.frame.sort_values("t")
    return {
        "t": frame["t"].to_numpy(),
        "w": frame["w"].to_numpy(dtype=float),
        "consensus_error": frame["consensus_error"].to_numpy(dtype=float),
    }


def _slot_color(layer: int, agent: int) -> tuple[float, float, float, float]:
    # stable across processes (unlike hash()); 20 distinguishable hues
    digest = hashlib.md5(f"{layer}/{agent}".encode()).digest()
    return plt.get_cmap("tab20")(digest[0] % 20)


def render_trajectories(
    table: TrajectoryTable,
    average: float | None,
    window: tuple[int, int] | None = None,
) -> Figure:
    """One opinion line per (layer, agent) slot, plus a dashed line at the
    conserved average when one is given.  `window` restricts to recorded
    steps in [t0, t1] inclusive."""
    if window is not None:
        table = table.window(*window)
    series = trajectory_series(table)

    fig, ax = plt.subplots(figsize=(9.0, 5.5))
    for (layer, agent), (ts, values) in series.items():
        ax.plot(ts, values, lw=0.8, alpha=0.8, color=_slot_color(layer, agent))
    if average is not None:
        ax.axhline(
            average, ls="--", lw=1.4, color="black", label=f"conserved average {average:.4g}"
        )
        ax.legend(loc="best", fontsize=9)
    ax.set_xlabel("t")
    ax.set_ylabel("opinion")
    ax.set_title(f"opinion trajectories ({len(series)} slots)")
    fig.tight_layout()
    return fig


def render_diagnostics(summary: SummaryTable) -> Figure:
    """Two stacked panels: dispersion W(t) on a log scale, consensus error
    below with its final value annotated."""
    data = diagnostics_series(summary)
    ts, w, err = data["t"], data["w"], data["consensus_error"]

    fig, (ax_w, ax_e) = plt.subplots(2, 1, figsize=(9.0, 7.0), sharex=True)
    ax_w.plot(ts, w, color="tab:blue", lw=1.2)
    ax_w.set_yscale("log")
    ax_w.set_ylabel("dispersion W(t)")

    if (err > 0).all():
        ax_e.set_yscale("log")
    ax_e.plot(ts, err, color="tab:red", lw=1.2)
    ax_e.set_ylabel("consensus error")
    ax_e.set_xlabel("t")
    final_t, final_err = int(ts[-1]), float(err[-1])
    ax_e.annotate(
        f"final {final_err:.3e}",
        xy=(final_t, final_err),
        xytext=(0.98, 0.9),
        textcoords="axes fraction",
        ha="right",
        fontsize=9,
        arrowprops={"arrowstyle": "->", "lw": 0.8},
    )
    fig.tight_layout()
    return fig


def _save(fig: Figure, out: str | Path) -> Path:
    out = Path(out)
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return out


def plot_trajectories(
    table: TrajectoryTable,
    average: float | None,
    out: str | Path,
    window: tuple[int, int] | None = None,
) -> Path:
    """Render the trajectory panel and write it to `out` (.png or .svg)."""
    return _save(render_trajectories(table, average, window), out)


def plot_diagnostics(summary: SummaryTable, out: str | Path) -> Path:
    """Render the diagnostics panels and write them to `out` (.png or .svg)."""
    return _save(render_diagnostics(summary), out)
