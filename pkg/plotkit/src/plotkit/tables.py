"""Typed access to attrep CSV outputs.

Two files per run: trajectories.csv with one row per (t, layer, agent,
dim) opinion value, and a sidecar summary.csv with per-step diagnostics
plus the conserved global average.  Layer/agent/dim labels are 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import pandas as pd

__all__ = [
    "PlotkitError",
    "TrajectoryTable",
    "SummaryTable",
    "load_trajectories",
    "load_summary",
    "sidecar_summary_path",
]

TRAJECTORY_COLUMNS = ("t", "layer", "agent", "dim", "value")
SUMMARY_COLUMNS = ("t", "w", "drop", "bound", "consensus_error", "sum_drift")


class PlotkitError(ValueError):
    """Input data does not match the expected table schema or shape."""


def _read_csv(path: str | Path, what: str) -> pd.DataFrame:
    path = Path(path)
    if not path.exists():
        raise PlotkitError(f"{what}: file not found: {path}")
    try:
        # round_trip: parse floats exactly as repr() wrote them
        frame = pd.read_csv(path, float_precision="round_trip")
    except (pd.errors.ParserError, pd.errors.EmptyDataError, ValueError) as exc:
        raise PlotkitError(f"{what}: could not parse {path}: {exc}") from None
    return frame


def _require_columns(frame: pd.DataFrame, needed: tuple[str, ...], what: str) -> None:
    missing = [c for c in needed if c not in frame.columns]
    if missing:
        raise PlotkitError(f"{what}: missing column(s) {missing}, have {list(frame.columns)}")


@dataclass
class TrajectoryTable:
    frame: pd.DataFrame

    @property
    def n_dims(self) -> int:
        return int(self.frame["dim"].max())

    @property
    def times(self) -> list[int]:
        return sorted(self.frame["t"].unique().tolist())

    def window(self, t0: int, t1: int) -> "TrajectoryTable":
        """Restrict to recorded times in [t0, t1] (inclusive)."""
        if t1 < t0:
            raise PlotkitError(f"window: empty range [{t0}, {t1}]")
        sub = self.frame[(self.frame["t"] >= t0) & (self.frame["t"] <= t1)]
        if sub.empty:
            raise PlotkitError(
                f"window: no recorded steps in [{t0}, {t1}] "
                f"(data covers [{self.frame['t'].min()}, {self.frame['t'].max()}])"
            )
        return TrajectoryTable(sub.reset_index(drop=True))


def load_trajectories(path: str | Path) -> TrajectoryTable:
    frame = _read_csv(path, "trajectories")
    _require_columns(frame, TRAJECTORY_COLUMNS, "trajectories")
    if frame.empty:
        raise PlotkitError(f"trajectories: {path} has no data rows")
    for col in ("t", "layer", "agent", "dim"):
        if not pd.api.types.is_integer_dtype(frame[col]):
            raise PlotkitError(f"trajectories: column {col!r} must be integer")
    if not pd.api.types.is_numeric_dtype(frame["value"]):
        raise PlotkitError("trajectories: column 'value' must be numeric")
    if frame.duplicated(subset=["t", "layer", "agent", "dim"]).any():
        raise PlotkitError("trajectories: duplicate (t, layer, agent, dim) rows")
    return TrajectoryTable(frame)


@dataclass
class SummaryTable:
    frame: pd.DataFrame

    @property
    def average_columns(self) -> list[str]:
        return [c for c in self.frame.columns if c.startswith("global_avg_")]

    def conserved_average(self) -> float:
        """The conserved scalar average; only defined for 1-dimensional runs."""
        cols = self.average_columns
        if len(cols) != 1:
            raise PlotkitError(
                f"summary: expected one global_avg column for a scalar run, found {cols}"
            )
        return float(self.frame[cols[0]].iloc[0])


def load_summary(path: str | Path) -> SummaryTable:
    frame = _read_csv(path, "summary")
    _require_columns(frame, SUMMARY_COLUMNS, "summary")
    if frame.empty:
        raise PlotkitError(f"summary: {path} has no data rows")
    table = SummaryTable(frame)
    if not table.average_columns:
        raise PlotkitError("summary: missing global_avg_* column(s)")
    return table


def sidecar_summary_path(trajectories_path: str | Path) -> Path:
    """Where the summary sits relative to a trajectories file."""
    return Path(trajectories_path).parent / "summary.csv"
