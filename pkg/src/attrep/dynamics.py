"""Opinion state and the signed-rate pairwise update.

One step: a matching is drawn, each matched pair (i, j) that exists in at
least one layer interacts.  On every layer k carrying the pair, agent i
moves to x_ki + r_k (x_kj - x_ki) and agent j symmetrically, where the
signed rate r_k is +mu with probability theta (attraction) and -mu
otherwise (repulsion).  The moved values are then averaged across the
pair's layers, and every one of those layers adopts the two averages.
Slots outside the interacting pairs are untouched.

The update conserves the total opinion exactly: on each layer the pair
moves by opposite amounts, and the cross-layer averaging redistributes a
fixed pair-local total.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, NamedTuple

import numpy as np

from .graphs import Edge, MultilayerTopology
from .matching import ActivePair, ActiveSet, Matching, derive_active_set
from .streams import RunStreams

__all__ = [
    "ConfigError",
    "MuLaw",
    "ThetaLaw",
    "ClassLaws",
    "RatePolicy",
    "RateDraw",
    "OpinionState",
    "StepTrace",
    "draw_rate",
    "update_pair",
    "step",
]


class ConfigError(ValueError):
    """A scenario or policy field is out of its admissible range."""


# ----------------------------------------------------------------------
# rate laws
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class MuLaw:
    """Distribution of the step size mu; support must lie in (0, 1/2].

    kind "point" is the deterministic value `lo`; kind "uniform" draws
    from [lo, hi).  A uniform law may have lo = 0: exact zeros are
    rejected and redrawn, which leaves the distribution unchanged.
    """

    kind: str
    lo: float
    hi: float = 0.0

    @classmethod
    def point(cls, value: float) -> "MuLaw":
        return cls("point", float(value))

    @classmethod
    def uniform(cls, lo: float, hi: float) -> "MuLaw":
        return cls("uniform", float(lo), float(hi))

    def validate(self, where: str) -> None:
        if self.kind == "point":
            if not 0.0 < self.lo <= 0.5:
                raise ConfigError(f"{where}: mu must lie in (0, 0.5], got {self.lo}")
        elif self.kind == "uniform":
            if not (0.0 <= self.lo < self.hi <= 0.5):
                raise ConfigError(
                    f"{where}: uniform mu needs 0 <= lo < hi <= 0.5, got [{self.lo}, {self.hi})"
                )
        else:
            raise ConfigError(f"{where}: unknown mu law kind {self.kind!r}")

    def sample(self, rng: np.random.Generator) -> float:
        if self.kind == "point":
            return self.lo
        while True:
            v = self.lo + (self.hi - self.lo) * rng.random()
            if v > 0.0:
                return v

    def sample_array(self, rng: np.random.Generator, size: int) -> np.ndarray:
        if self.kind == "point":
            return np.full(size, self.lo)
        out = self.lo + (self.hi - self.lo) * rng.random(size)
        while True:
            zeros = out == 0.0
            if not zeros.any():
                return out
            out[zeros] = self.lo + (self.hi - self.lo) * rng.random(int(zeros.sum()))


@dataclass(frozen=True)
class ThetaLaw:
    """Distribution of the attraction probability theta, support in [0, 1].

    kind "point": the constant `a`.
    kind "uniform": Uniform[a, b).
    kind "mu_anchored": Uniform[(a + mu)/2, 1), coupled to the mu draw;
    `a` above mu's upper end biases every draw toward attraction.
    """

    kind: str
    a: float
    b: float = 0.0

    @classmethod
    def point(cls, value: float) -> "ThetaLaw":
        return cls("point", float(value))

    @classmethod
    def uniform(cls, lo: float, hi: float) -> "ThetaLaw":
        return cls("uniform", float(lo), float(hi))

    @classmethod
    def mu_anchored(cls, base: float) -> "ThetaLaw":
        return cls("mu_anchored", float(base))

    def validate(self, where: str, mu: MuLaw) -> None:
        if self.kind == "point":
            if not 0.0 <= self.a <= 1.0:
                raise ConfigError(f"{where}: theta must lie in [0, 1], got {self.a}")
        elif self.kind == "uniform":
            if not (0.0 <= self.a < self.b <= 1.0):
                raise ConfigError(
                    f"{where}: uniform theta needs 0 <= lo < hi <= 1, got [{self.a}, {self.b})"
                )
        elif self.kind == "mu_anchored":
            mu_hi = mu.lo if mu.kind == "point" else mu.hi
            mu_lo = mu.lo
            if (self.a + mu_lo) / 2.0 < 0.0:
                raise ConfigError(f"{where}: anchored theta can fall below 0 (base {self.a})")
            if (self.a + mu_hi) / 2.0 >= 1.0:
                raise ConfigError(f"{where}: anchored theta has empty range (base {self.a})")
        else:
            raise ConfigError(f"{where}: unknown theta law kind {self.kind!r}")

    def sample(self, rng: np.random.Generator, mu: float) -> float:
        if self.kind == "point":
            return self.a
        if self.kind == "uniform":
            return self.a + (self.b - self.a) * rng.random()
        lo = (self.a + mu) / 2.0
        return lo + (1.0 - lo) * rng.random()

    def sample_array(self, rng: np.random.Generator, mu: np.ndarray) -> np.ndarray:
        if self.kind == "point":
            return np.full(len(mu), self.a)
        if self.kind == "uniform":
            return self.a + (self.b - self.a) * rng.random(len(mu))
        lo = (self.a + mu) / 2.0
        return lo + (1.0 - lo) * rng.random(len(mu))


@dataclass(frozen=True)
class ClassLaws:
    """Joint (mu, theta) law for one edge class."""

    mu: MuLaw
    theta: ThetaLaw

    def validate(self, where: str) -> None:
        self.mu.validate(where)
        self.theta.validate(where, self.mu)


@dataclass(frozen=True)
class RatePolicy:
    """Edge-class resolution for rate laws: chain edges versus the rest."""

    chain: ClassLaws
    other: ClassLaws

    def laws_for(self, edge: Edge) -> ClassLaws:
        return self.chain if edge.is_chain else self.other

    def validate(self) -> None:
        self.chain.validate("rates.chain")
        self.other.validate("rates.other")


class RateDraw(NamedTuple):
    mu: float
    theta: float
    r: float  # +mu or -mu


def draw_rate(
    policy: RatePolicy, layer: int, edge: Edge, t: int, streams: RunStreams
) -> RateDraw:
    """Draw the signed rate for one (pair, layer) interaction at step t.

    Deterministic given (seed, t, layer, edge); the draw does not depend
    on what else happens during the step.
    """
    rng = streams.rates(t, layer, edge.u, edge.v)
    laws = policy.laws_for(edge)
    mu = laws.mu.sample(rng)
    theta = laws.theta.sample(rng, mu)
    # rng.random() < 1.0 always holds, so theta = 1 is pure attraction
    r = mu if rng.random() < theta else -mu
    return RateDraw(mu, theta, r)


# ----------------------------------------------------------------------
# state and update
# ----------------------------------------------------------------------


@dataclass
class OpinionState:
    """Opinion vectors for every (layer, agent) slot; x has shape (m, n, d)."""

    x: np.ndarray

    def __post_init__(self) -> None:
        self.x = np.asarray(self.x, dtype=np.float64)
        if self.x.ndim != 3:
            raise ValueError(f"opinion array must be (m, n, d), got shape {self.x.shape}")

    @property
    def m(self) -> int:
        return self.x.shape[0]

    @property
    def n(self) -> int:
        return self.x.shape[1]

    @property
    def d(self) -> int:
        return self.x.shape[2]

    def copy(self) -> "OpinionState":
        return OpinionState(self.x.copy())


@dataclass
class StepTrace:
    """What one step did: the active pairs, their rate draws, and the dispersion."""

    t: int
    active: ActiveSet
    draws: dict[tuple[Edge, int], RateDraw]  # keyed by (edge, layer)
    w_before: float
    w_after: float


def update_pair(
    state: OpinionState, pair: ActivePair, draws: Mapping[int, RateDraw]
) -> tuple[np.ndarray, np.ndarray]:
    """Averaged post-move vectors (for i and for j) over the pair's layers.

    Reads only the pair's own slots; the caller writes the two returned
    d-vectors into every layer of pair.layers.  The pair-local total
    sum_k (x_ki + x_kj) is preserved exactly up to rounding because the
    per-layer moves are equal and opposite.
    """
    (i, j), layers = pair.edge, pair.layers
    idx = list(layers)
    xi = state.x[idx, i, :]
    xj = state.x[idx, j, :]
    rs = np.array([draws[k].r for k in layers])[:, None]
    diff = xj - xi
    avg_i = (xi + rs * diff).mean(axis=0)
    avg_j = (xj - rs * diff).mean(axis=0)
    return avg_i, avg_j


def step(
    state: OpinionState,
    topo: MultilayerTopology,
    u: Matching,
    policy: RatePolicy,
    t: int,
    streams: RunStreams,
) -> tuple[OpinionState, StepTrace]:
    """Advance the state by one step under matching u and topology topo.

    Active pairs touch disjoint slots, so the result does not depend on
    the order they are processed in.  An empty active set returns an
    unchanged copy of the state.
    """
    active = derive_active_set(u, topo)
    w_before = float(np.vdot(state.x, state.x))
    new_x = state.x.copy()
    all_draws: dict[tuple[Edge, int], RateDraw] = {}
    for pair in active.pairs:
        pair_draws = {
            k: draw_rate(policy, k, pair.edge, t, streams) for k in pair.layers
        }
        for k, d in pair_draws.items():
            all_draws[(pair.edge, k)] = d
        avg_i, avg_j = update_pair(state, pair, pair_draws)
        idx = list(pair.layers)
        new_x[idx, pair.edge.u, :] = avg_i
        new_x[idx, pair.edge.v, :] = avg_j
    new_state = OpinionState(new_x)
    w_after = float(np.vdot(new_x, new_x))
    return new_state, StepTrace(t, active, all_draws, w_before, w_after)
