"""Scenario configuration: schema, validation, builtins, YAML loading.

A scenario file is a YAML document with top-level run parameters and
nested sections for the graph process, the matcher, the per-class rate
laws, and the initial condition.  Vertices in scenario files are
1-based, like every other external text format here.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np
import yaml

from .dynamics import ClassLaws, ConfigError, MuLaw, RatePolicy, ThetaLaw
from .graphs import Edge

__all__ = [
    "ConfigError",
    "GraphSpec",
    "InitSpec",
    "ScenarioConfig",
    "builtin_names",
    "builtin_raw",
    "load_scenario",
    "parse_scenario",
    "default_record_every",
    "with_overrides",
]

_MATCHERS = ("uniform", "chain_forced", "none")


@dataclass(frozen=True)
class GraphSpec:
    """Per-step layer graph process: freshly sampled ER-plus-chain or a fixed topology."""

    kind: str  # "er_chain" | "static"
    p: float = 0.0
    layers: tuple[tuple[Edge, ...], ...] | None = None  # static only, 0-based


@dataclass(frozen=True)
class InitSpec:
    kind: str  # "uniform01" | "cauchy" | "explicit"
    loc: float = 0.0
    scale: float = 1.0
    values: np.ndarray | None = None


@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    n: int
    m: int
    d: int
    horizon: int
    seed: int
    graph: GraphSpec
    matcher: str
    rates: RatePolicy
    init: InitSpec
    record_every: int
    convergence_tol: float
    out: str | None = None


def default_record_every(n: int) -> int:
    """Record every step for small runs, every 10th for larger ones."""
    return 1 if n <= 50 else 10


# ----------------------------------------------------------------------
# parsing
# ----------------------------------------------------------------------


def _require_keys(d: dict, allowed: set[str], required: set[str], where: str) -> None:
    unknown = set(d) - allowed
    if unknown:
        raise ConfigError(f"{where}: unknown key(s) {sorted(unknown)}")
    missing = required - set(d)
    if missing:
        raise ConfigError(f"{where}: missing key(s) {sorted(missing)}")


def _as_int(value: Any, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{where}: expected an integer, got {value!r}")
    return value


def _as_float(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}: expected a number, got {value!r}")
    return float(value)


def _parse_mu(raw: Any, where: str) -> MuLaw:
    if not isinstance(raw, dict):
        raise ConfigError(f"{where}: expected a mapping, got {raw!r}")
    kind = raw.get("kind")
    if kind == "point":
        _require_keys(raw, {"kind", "value"}, {"kind", "value"}, where)
        law = MuLaw.point(_as_float(raw["value"], f"{where}.value"))
    elif kind == "uniform":
        _require_keys(raw, {"kind", "lo", "hi"}, {"kind", "lo", "hi"}, where)
        law = MuLaw.uniform(_as_float(raw["lo"], f"{where}.lo"), _as_float(raw["hi"], f"{where}.hi"))
    else:
        raise ConfigError(f"{where}.kind: expected 'point' or 'uniform', got {kind!r}")
    law.validate(where)
    return law


def _parse_theta(raw: Any, where: str, mu: MuLaw) -> ThetaLaw:
    if not isinstance(raw, dict):
        raise ConfigError(f"{where}: expected a mapping, got {raw!r}")
    kind = raw.get("kind")
    if kind == "point":
        _require_keys(raw, {"kind", "value"}, {"kind", "value"}, where)
        law = ThetaLaw.point(_as_float(raw["value"], f"{where}.value"))
    elif kind == "uniform":
        _require_keys(raw, {"kind", "lo", "hi"}, {"kind", "lo", "hi"}, where)
        law = ThetaLaw.uniform(
            _as_float(raw["lo"], f"{where}.lo"), _as_float(raw["hi"], f"{where}.hi")
        )
    elif kind == "mu_anchored":
        _require_keys(raw, {"kind", "base"}, {"kind", "base"}, where)
        law = ThetaLaw.mu_anchored(_as_float(raw["base"], f"{where}.base"))
    else:
        raise ConfigError(
            f"{where}.kind: expected 'point', 'uniform' or 'mu_anchored', got {kind!r}"
        )
    law.validate(where, mu)
    return law


def _parse_class_laws(raw: Any, where: str) -> ClassLaws:
    if not isinstance(raw, dict):
        raise ConfigError(f"{where}: expected a mapping, got {raw!r}")
    _require_keys(raw, {"mu", "theta"}, {"mu", "theta"}, where)
    mu = _parse_mu(raw["mu"], f"{where}.mu")
    theta = _parse_theta(raw["theta"], f"{where}.theta", mu)
    return ClassLaws(mu, theta)


def _parse_graph(raw: Any, n: int) -> GraphSpec:
    where = "graph"
    if not isinstance(raw, dict):
        raise ConfigError(f"{where}: expected a mapping, got {raw!r}")
    kind = raw.get("kind")
    if kind == "er_chain":
        _require_keys(raw, {"kind", "p"}, {"kind", "p"}, where)
        p = _as_float(raw["p"], f"{where}.p")
        if not 0.0 <= p <= 1.0:
            raise ConfigError(f"{where}.p: must lie in [0, 1], got {p}")
        return GraphSpec("er_chain", p=p)
    if kind == "static":
        _require_keys(raw, {"kind", "layers"}, {"kind", "layers"}, where)
        raw_layers = raw["layers"]
        if not isinstance(raw_layers, list) or not raw_layers:
            raise ConfigError(f"{where}.layers: expected a non-empty list of edge lists")
        layers = []
        for k, edge_list in enumerate(raw_layers):
            loc = f"{where}.layers[{k}]"
            if not isinstance(edge_list, list):
                raise ConfigError(f"{loc}: expected a list of [u, v] pairs")
            edges = []
            for pair in edge_list:
                if not (isinstance(pair, list) and len(pair) == 2):
                    raise ConfigError(f"{loc}: expected [u, v] pairs, got {pair!r}")
                u = _as_int(pair[0], loc)
                v = _as_int(pair[1], loc)
                if not (1 <= u <= n and 1 <= v <= n):
                    raise ConfigError(f"{loc}: vertices must lie in 1..{n}, got {pair}")
                if u == v:
                    raise ConfigError(f"{loc}: self-loop at vertex {u}")
                edges.append(Edge.canonical(u - 1, v - 1))
            layers.append(tuple(sorted(set(edges))))
        return GraphSpec("static", layers=tuple(layers))
    raise ConfigError(f"{where}.kind: expected 'er_chain' or 'static', got {kind!r}")


def _parse_init(raw: Any, n: int, m: int, d: int) -> InitSpec:
    where = "init"
    if not isinstance(raw, dict):
        raise ConfigError(f"{where}: expected a mapping, got {raw!r}")
    kind = raw.get("kind")
    if kind == "uniform01":
        _require_keys(raw, {"kind"}, {"kind"}, where)
        return InitSpec("uniform01")
    if kind == "cauchy":
        _require_keys(raw, {"kind", "loc", "scale"}, {"kind"}, where)
        loc = _as_float(raw.get("loc", 0.0), f"{where}.loc")
        scale = _as_float(raw.get("scale", 1.0), f"{where}.scale")
        if scale <= 0.0:
            raise ConfigError(f"{where}.scale: must be positive, got {scale}")
        return InitSpec("cauchy", loc=loc, scale=scale)
    if kind == "explicit":
        _require_keys(raw, {"kind", "values"}, {"kind", "values"}, where)
        try:
            values = np.asarray(raw["values"], dtype=np.float64)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{where}.values: not a numeric array ({exc})") from None
        if values.shape == (m, n) and d == 1:
            values = values[:, :, None]
        if values.shape != (m, n, d):
            raise ConfigError(
                f"{where}.values: expected shape ({m}, {n}, {d}), got {values.shape}"
            )
        if not np.isfinite(values).all():
            raise ConfigError(f"{where}.values: contains non-finite entries")
        return InitSpec("explicit", values=values)
    raise ConfigError(f"{where}.kind: expected 'uniform01', 'cauchy' or 'explicit', got {kind!r}")


_TOP_KEYS = {
    "name", "n", "m", "d", "horizon", "seed", "graph", "matcher",
    "rates", "init", "record_every", "convergence_tol", "out",
}
_TOP_REQUIRED = {"n", "m", "horizon", "graph", "matcher", "rates", "init"}


def parse_scenario(raw: dict, name: str = "custom") -> ScenarioConfig:
    """Validate a raw scenario mapping and build the typed config."""
    if not isinstance(raw, dict):
        raise ConfigError(f"scenario: expected a mapping at top level, got {type(raw).__name__}")
    _require_keys(raw, _TOP_KEYS, _TOP_REQUIRED, "scenario")

    n = _as_int(raw["n"], "n")
    m = _as_int(raw["m"], "m")
    d = _as_int(raw.get("d", 1), "d")
    horizon = _as_int(raw["horizon"], "horizon")
    seed = _as_int(raw.get("seed", 1), "seed")
    if n < 2:
        raise ConfigError(f"n: need at least 2 agents, got {n}")
    if m < 1:
        raise ConfigError(f"m: need at least 1 layer, got {m}")
    if d < 1:
        raise ConfigError(f"d: opinion dimension must be >= 1, got {d}")
    if horizon < 1:
        raise ConfigError(f"horizon: must be >= 1, got {horizon}")
    if not 0 <= seed < 2**64:
        raise ConfigError(f"seed: must be an unsigned 64-bit integer, got {seed}")

    matcher = raw["matcher"]
    if matcher not in _MATCHERS:
        raise ConfigError(f"matcher: expected one of {_MATCHERS}, got {matcher!r}")

    rates_raw = raw["rates"]
    if not isinstance(rates_raw, dict):
        raise ConfigError(f"rates: expected a mapping, got {rates_raw!r}")
    _require_keys(rates_raw, {"chain", "other"}, {"chain", "other"}, "rates")
    policy = RatePolicy(
        chain=_parse_class_laws(rates_raw["chain"], "rates.chain"),
        other=_parse_class_laws(rates_raw["other"], "rates.other"),
    )

    graph = _parse_graph(raw["graph"], n)
    if graph.kind == "static" and graph.layers is not None and len(graph.layers) != m:
        raise ConfigError(f"graph.layers: expected {m} layers, got {len(graph.layers)}")
    init = _parse_init(raw["init"], n, m, d)

    record_every = _as_int(raw.get("record_every", default_record_every(n)), "record_every")
    if record_every < 1:
        raise ConfigError(f"record_every: must be >= 1, got {record_every}")
    convergence_tol = _as_float(raw.get("convergence_tol", 1e-6), "convergence_tol")
    if convergence_tol <= 0.0:
        raise ConfigError(f"convergence_tol: must be positive, got {convergence_tol}")

    out = raw.get("out")
    if out is not None and not isinstance(out, str):
        raise ConfigError(f"out: expected a path string, got {out!r}")

    return ScenarioConfig(
        name=str(raw.get("name", name)),
        n=n, m=m, d=d,
        horizon=horizon,
        seed=seed,
        graph=graph,
        matcher=matcher,
        rates=policy,
        init=init,
        record_every=record_every,
        convergence_tol=convergence_tol,
        out=out,
    )


# ----------------------------------------------------------------------
# builtins
# ----------------------------------------------------------------------


def _builtin_thm1() -> dict:
    # time-varying multilayer run with a forced chain edge per matching and
    # rate laws biased toward attraction on the chain class
    return {
        "name": "thm1",
        "n": 100, "m": 5, "d": 1,
        "horizon": 1000,
        "seed": 1,
        "graph": {"kind": "er_chain", "p": 0.05},
        "matcher": "chain_forced",
        "rates": {
            "chain": {
                "mu": {"kind": "uniform", "lo": 0.1, "hi": 0.5},
                "theta": {"kind": "mu_anchored", "base": 1.1},
            },
            "other": {
                "mu": {"kind": "uniform", "lo": 0.0, "hi": 0.5},
                "theta": {"kind": "mu_anchored", "base": 1.0},
            },
        },
        "init": {"kind": "uniform01"},
    }


def _builtin_thm2() -> dict:
    # pure attraction (theta = 1 on every edge), uniform matchings,
    # heavy-tailed initial opinions
    return {
        "name": "thm2",
        "n": 100, "m": 5, "d": 1,
        "horizon": 1000,
        "seed": 1,
        "graph": {"kind": "er_chain", "p": 0.05},
        "matcher": "uniform",
        "rates": {
            "chain": {
                "mu": {"kind": "uniform", "lo": 0.1, "hi": 0.5},
                "theta": {"kind": "point", "value": 1.0},
            },
            "other": {
                "mu": {"kind": "uniform", "lo": 0.0, "hi": 0.5},
                "theta": {"kind": "point", "value": 1.0},
            },
        },
        "init": {"kind": "cauchy", "loc": 0.0, "scale": 1.0},
    }


_BUILTINS = {"thm1": _builtin_thm1, "thm2": _builtin_thm2}


def builtin_names() -> tuple[str, ...]:
    return tuple(sorted(_BUILTINS))


def builtin_raw(name: str) -> dict:
    """Raw mapping for a builtin scenario, handy as a base for variants."""
    if name not in _BUILTINS:
        raise ConfigError(f"scenario: no builtin named {name!r}, have {builtin_names()}")
    return _BUILTINS[name]()


def load_scenario(name_or_path: str) -> ScenarioConfig:
    """Load a builtin scenario by name or a YAML scenario by path."""
    if name_or_path in _BUILTINS:
        return parse_scenario(_BUILTINS[name_or_path]())
    path = Path(name_or_path)
    if not path.exists():
        raise ConfigError(
            f"scenario: {name_or_path!r} is neither a builtin {builtin_names()} nor a file"
        )
    with path.open() as fh:
        try:
            raw = yaml.safe_load(fh)
        except yaml.YAMLError as exc:
            raise ConfigError(f"scenario: {path} is not valid YAML ({exc})") from None
    if not isinstance(raw, dict):
        raise ConfigError(f"scenario: {path} must contain a mapping at top level")
    return parse_scenario(raw, name=path.stem)


def with_overrides(config: ScenarioConfig, **fields: Any) -> ScenarioConfig:
    """Functional update used by the CLI; revalidates nothing beyond types."""
    return dataclasses.replace(config, **{k: v for k, v in fields.items() if v is not None})
