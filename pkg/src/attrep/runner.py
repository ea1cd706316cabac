"""Seeded experiment runs: orchestration, records, preflight, CSV emission.

A run is a pure function of its scenario config; identical configs give
byte-identical output files.  Conservation of the opinion total is
recomputed at every recorded step and a violation aborts the run.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .diagnostics import (
    AttractionEstimate,
    consensus_error,
    drop_bound,
    global_average,
    lyapunov_w,
    net_attraction,
)
from .dynamics import OpinionState, step
from .graphs import LayerGraph, MultilayerTopology, generate_er_with_chain, graph_dump_lines
from .matching import (
    Matching,
    derive_active_set,
    matching_dump_line,
    sample_matching_with_chain_edge,
    sample_uniform_matching,
)
from .scenario import ScenarioConfig
from .streams import RunStreams

__all__ = [
    "ConservationError",
    "RunRecord",
    "RunSummary",
    "PreflightReport",
    "initial_state",
    "preflight",
    "run",
    "emit_trajectories",
]

# relative drift of the conserved opinion total that aborts a run
DRIFT_TOLERANCE = 1e-7

# significance demanded of the chain-class net attraction before a run
# may call itself thm1-valid
PREFLIGHT_SIGMA = 5.0


class ConservationError(RuntimeError):
    """The conserved opinion total drifted beyond tolerance."""


@dataclass
class RunRecord:
    """State snapshot and diagnostics at one recorded time.

    drop and bound describe the step that produced this state (zero at
    t = 0).  drift is relative to the initial conserved total.
    """

    t: int
    x: np.ndarray
    w: float
    drop: float
    bound: float
    err: float
    drift: float


@dataclass(frozen=True)
class RunSummary:
    name: str
    seed: int
    horizon: int
    final_consensus_error: float
    steps_to_tol: int | None
    w_trajectory: tuple[tuple[int, float], ...]
    conserved_sum_drift: float
    thm1_valid: bool | None  # None when the preflight check was not requested


@dataclass(frozen=True)
class PreflightReport:
    """Scenario-level sanity check for attraction-driven consensus claims."""

    chain: AttractionEstimate
    other: AttractionEstimate
    chain_edge_guaranteed: bool
    thm1_valid: bool


def initial_state(config: ScenarioConfig, rng: np.random.Generator) -> OpinionState:
    shape = (config.m, config.n, config.d)
    init = config.init
    if init.kind == "uniform01":
        return OpinionState(rng.random(shape))
    if init.kind == "cauchy":
        return OpinionState(init.loc + init.scale * rng.standard_cauchy(shape))
    assert init.values is not None
    return OpinionState(init.values.copy())


def _significantly_positive(est: AttractionEstimate, sigma: float) -> bool:
    if est.n_samples == 0:
        # closed form: rounding-level values are zero, not evidence of pull
        return est.value > 1e-12
    return est.value > sigma * est.std_error


def preflight(config: ScenarioConfig, n_samples: int = 200_000) -> PreflightReport:
    """Check the conditions a run must meet to be labeled thm1-valid.

    The chain-class net attraction must be positive at PREFLIGHT_SIGMA
    significance and the matcher must guarantee a chain edge each step.
    """
    rng = np.random.default_rng(config.seed)
    chain = net_attraction(config.rates.chain.mu, config.rates.chain.theta, n_samples, rng)
    other = net_attraction(config.rates.other.mu, config.rates.other.theta, n_samples, rng)
    guaranteed = config.matcher == "chain_forced"
    valid = guaranteed and _significantly_positive(chain, PREFLIGHT_SIGMA)
    return PreflightReport(chain, other, guaranteed, valid)


def _static_topology(config: ScenarioConfig) -> MultilayerTopology:
    assert config.graph.layers is not None
    return MultilayerTopology(
        tuple(LayerGraph(config.n, frozenset(edges)) for edges in config.graph.layers)
    )


def _sample_matching(config: ScenarioConfig, t: int, streams: RunStreams) -> Matching:
    if config.matcher == "uniform":
        return sample_uniform_matching(config.n, streams.matching(t))
    if config.matcher == "chain_forced":
        return sample_matching_with_chain_edge(config.n, streams.matching(t))
    return Matching(())  # "none": degenerate matcher for controlled experiments


def run(
    config: ScenarioConfig,
    out_dir: str | Path | None = None,
    dump_graphs: bool = False,
    dump_matchings: bool = False,
    preflight_check: bool | None = None,
) -> RunSummary:
    """Execute a scenario and return its summary.

    When out_dir is given, trajectories.csv and summary.csv are written
    there (plus optional graph/matching dumps).  preflight_check=None
    runs the thm1 preflight exactly when the scenario is named thm1.
    """
    if preflight_check is None:
        preflight_check = config.name == "thm1"
    thm1_valid: bool | None = None
    if preflight_check:
        thm1_valid = preflight(config).thm1_valid

    streams = RunStreams(config.seed)
    state = initial_state(config, streams.init())
    target = global_average(state)
    sums0 = state.x.sum(axis=(0, 1))
    drift_scale = max(1.0, float(np.abs(sums0).max()))

    static_topo = _static_topology(config) if config.graph.kind == "static" else None

    graph_lines: list[str] = []
    matching_lines: list[str] = []

    records = [
        RunRecord(
            t=0,
            x=state.x.copy(),
            w=lyapunov_w(state),
            drop=0.0,
            bound=0.0,
            err=consensus_error(state, target),
            drift=0.0,
        )
    ]

    for t in range(config.horizon):
        if static_topo is not None:
            topo = static_topo
        else:
            topo = MultilayerTopology(
                tuple(
                    generate_er_with_chain(config.n, config.graph.p, streams.graph(t, k))
                    for k in range(config.m)
                )
            )
        u = _sample_matching(config, t, streams)
        if dump_graphs:
            graph_lines.append(f"step {t}")
            graph_lines.extend(graph_dump_lines(topo))
        if dump_matchings:
            matching_lines.append(matching_dump_line(t, derive_active_set(u, topo)))

        prev = state
        state, trace = step(state, topo, u, config.rates, t, streams)

        now = t + 1
        if now % config.record_every == 0 or now == config.horizon:
            sums = state.x.sum(axis=(0, 1))
            drift = float(np.abs(sums - sums0).max()) / drift_scale
            if drift > DRIFT_TOLERANCE:
                raise ConservationError(
                    f"conserved total drifted by {drift:.3e} (relative) at step {now}"
                )
            records.append(
                RunRecord(
                    t=now,
                    x=state.x.copy(),
                    w=trace.w_after,
                    drop=trace.w_before - trace.w_after,
                    bound=drop_bound(trace, prev),
                    err=consensus_error(state, target),
                    drift=drift,
                )
            )

    errs = [(rec.t, rec.err) for rec in records]
    steps_to_tol: int | None = None
    if errs[-1][1] < config.convergence_tol:
        steps_to_tol = errs[-1][0]
        for t_rec, err in reversed(errs):
            if err >= config.convergence_tol:
                break
            steps_to_tol = t_rec

    summary = RunSummary(
        name=config.name,
        seed=config.seed,
        horizon=config.horizon,
        final_consensus_error=records[-1].err,
        steps_to_tol=steps_to_tol,
        w_trajectory=tuple((rec.t, rec.w) for rec in records),
        conserved_sum_drift=records[-1].drift,
        thm1_valid=thm1_valid,
    )

    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        emit_trajectories(records, target, out)
        if dump_graphs:
            (out / "graphs.txt").write_text("\n".join(graph_lines) + "\n")
        if dump_matchings:
            (out / "matchings.txt").write_text("\n".join(matching_lines) + "\n")

    return summary


def emit_trajectories(
    records: list[RunRecord], conserved_avg: np.ndarray, out_dir: str | Path
) -> tuple[Path, Path]:
    """Write trajectories.csv and the sidecar summary.csv for a run.

    trajectories.csv has one row per (t, layer, agent, dim) with 1-based
    layer/agent/dim labels.  summary.csv has one row per recorded step
    with the dispersion, its drop and bound, the consensus error, the
    conserved-total drift, and the (constant) conserved global average.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    traj_path = out / "trajectories.csv"
    summary_path = out / "summary.csv"
    d = records[0].x.shape[2]

    with traj_path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["t", "layer", "agent", "dim", "value"])
        for rec in records:
            m, n, _ = rec.x.shape
            for k in range(m):
                for i in range(n):
                    row_base = (rec.t, k + 1, i + 1)
                    for dim in range(d):
                        writer.writerow(
                            (*row_base, dim + 1, repr(float(rec.x[k, i, dim])))
                        )

    avg_cols = [f"global_avg_{dim + 1}" for dim in range(d)]
    avg_vals = [repr(float(v)) for v in conserved_avg]
    with summary_path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            ["t", "w", "drop", "bound", "consensus_error", "sum_drift", *avg_cols]
        )
        for rec in records:
            writer.writerow(
                (
                    rec.t,
                    repr(rec.w),
                    repr(rec.drop),
                    repr(rec.bound),
                    repr(rec.err),
                    repr(rec.drift),
                    *avg_vals,
                )
            )
    return traj_path, summary_path
