"""Figure toolkit for attrep run outputs (trajectories.csv + summary.csv)."""

from .plots import (
    diagnostics_series,
    plot_diagnostics,
    plot_trajectories,
    render_diagnostics,
    render_trajectories,
    trajectory_series,
)
from .tables import (
    PlotkitError,
    SummaryTable,
    TrajectoryTable,
    load_summary,
    load_trajectories,
    sidecar_summary_path,
)

__version__ = "0.1.0"
