"""Run diagnostics: dispersion, guaranteed drop bounds, attraction functionals.

The central quantity is the dispersion W(t), the sum of squared opinion
norms over every (layer, agent) slot.  Each step's interaction can only
shrink the contribution of the slots it touches by at least a computable
amount; drop_bound evaluates that guarantee for a recorded step so runs
can check it pathwise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import MuLaw, OpinionState, StepTrace, ThetaLaw
from .graphs import LayerGraph, connected_components

__all__ = [
    "DispersionReport",
    "AttractionEstimate",
    "lyapunov_w",
    "drop_bound",
    "dispersion_report",
    "net_attraction",
    "component_epsilon_trivial",
    "consensus_error",
    "global_average",
    "max_pairwise_distance",
]


@dataclass(frozen=True)
class DispersionReport:
    """Dispersion before a step, the measured drop, and its guaranteed floor."""

    w: float
    drop: float
    bound: float


@dataclass(frozen=True)
class AttractionEstimate:
    """Estimate of the net attraction E[mu (2 theta - 1 - mu)].

    Positive values mean the expected pull toward the midpoint beats the
    expected push away.  n_samples = 0 marks an exact closed form.
    """

    value: float
    std_error: float
    n_samples: int


def lyapunov_w(state: OpinionState) -> float:
    """Sum of squared opinion norms over all (layer, agent) slots."""
    return float(np.vdot(state.x, state.x))


def drop_bound(trace: StepTrace, state_before: OpinionState) -> float:
    """Guaranteed lower bound on W(t) - W(t+1) for the traced step.

    Per active pair and per carrying layer the drop is at least
    2 (r - r^2) ||x_kj - x_ki||^2, evaluated on the pre-step state.  The
    bound is exact whenever a pair lives on a single layer, because the
    only slack is the averaging across layers.
    """
    x = state_before.x
    total = 0.0
    for pair in trace.active.pairs:
        i, j = pair.edge
        for k in pair.layers:
            r = trace.draws[(pair.edge, k)].r
            diff = x[k, j, :] - x[k, i, :]
            total += 2.0 * (r - r * r) * float(np.dot(diff, diff))
    return total


def dispersion_report(trace: StepTrace, state_before: OpinionState) -> DispersionReport:
    return DispersionReport(
        w=trace.w_before,
        drop=trace.w_before - trace.w_after,
        bound=drop_bound(trace, state_before),
    )


def net_attraction(
    mu_law: MuLaw,
    theta_law: ThetaLaw,
    n_samples: int,
    rng: np.random.Generator,
) -> AttractionEstimate:
    """Estimate E[mu (2 theta - 1 - mu)] for a (mu, theta) law pair.

    Deterministic laws are evaluated in closed form with zero error;
    anything stochastic is estimated by Monte Carlo with a standard
    error of the mean.
    """
    if mu_law.kind == "point" and theta_law.kind == "point":
        value = mu_law.lo * (2.0 * theta_law.a - 1.0 - mu_law.lo)
        return AttractionEstimate(value, 0.0, 0)
    if n_samples < 2:
        raise ValueError(f"need n_samples >= 2 for Monte Carlo, got {n_samples}")
    mu = mu_law.sample_array(rng, n_samples)
    theta = theta_law.sample_array(rng, mu)
    vals = mu * (2.0 * theta - 1.0 - mu)
    value = float(vals.mean())
    std_error = float(vals.std(ddof=1) / np.sqrt(n_samples))
    return AttractionEstimate(value, std_error, n_samples)


def component_epsilon_trivial(
    g: LayerGraph, state: OpinionState, layer: int, eps: float
) -> bool:
    """Whether, per component of g, all opinions on `layer` are within eps.

    Closeness is measured in opinion space: every pair of agents in the
    same component must satisfy ||x_u - x_v|| <= eps.  Singleton
    components are trivially close; eps = 0 demands exact agreement.
    """
    if eps < 0.0:
        raise ValueError(f"eps must be nonnegative, got {eps}")
    if not 0 <= layer < state.m:
        raise ValueError(f"layer {layer} out of range for m={state.m}")
    if g.n != state.n:
        raise ValueError(f"graph has {g.n} vertices but state has {state.n} agents")
    x = state.x[layer]
    for comp in connected_components(g):
        if len(comp) < 2:
            continue
        xs = x[comp]
        diffs = xs[:, None, :] - xs[None, :, :]
        if float(np.sqrt((diffs**2).sum(axis=2)).max()) > eps:
            return False
    return True


def consensus_error(state: OpinionState, target: np.ndarray) -> float:
    """Largest distance of any (layer, agent) opinion from the target vector."""
    target = np.asarray(target, dtype=np.float64)
    if target.shape != (state.d,):
        raise ValueError(f"target must have shape ({state.d},), got {target.shape}")
    diffs = state.x - target
    return float(np.sqrt((diffs**2).sum(axis=2)).max())


def global_average(state: OpinionState) -> np.ndarray:
    """Average opinion over all slots; conserved exactly by the dynamics."""
    return state.x.mean(axis=(0, 1))


def max_pairwise_distance(state: OpinionState) -> float:
    """Largest distance between any two (layer, agent) opinions."""
    flat = state.x.reshape(-1, state.d)
    if state.d == 1:
        return float(flat.max() - flat.min())
    diffs = flat[:, None, :] - flat[None, :, :]
    return float(np.sqrt((diffs**2).sum(axis=2)).max())
