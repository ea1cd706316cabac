from __future__ import annotations

import textwrap

import numpy as np
import pytest

from attrep.graphs import Edge
from attrep.scenario import (
    ConfigError,
    builtin_names,
    builtin_raw,
    default_record_every,
    load_scenario,
    parse_scenario,
)


def scenario_text() -> str:
    return textwrap.dedent(
        """
        name: demo
        n: 6
        m: 2
        d: 1
        horizon: 25
        seed: 9
        record_every: 5
        convergence_tol: 1.0e-4
        graph:
          kind: static
          layers:
            - [[1, 2], [2, 3], [5, 6]]
            - [[1, 6]]
        matcher: uniform
        rates:
          chain:
            mu: {kind: point, value: 0.5}
            theta: {kind: point, value: 1.0}
          other:
            mu: {kind: uniform, lo: 0.0, hi: 0.5}
            theta: {kind: uniform, lo: 0.4, hi: 0.9}
        init:
          kind: explicit
          values:
            - [0.0, 0.1, 0.2, 0.3, 0.4, 0.5]
            - [1.0, 0.9, 0.8, 0.7, 0.6, 0.5]
        """
    )


def test_builtins_exist_and_parse():
    assert builtin_names() == ("thm1", "thm2")
    thm1 = load_scenario("thm1")
    assert (thm1.n, thm1.m, thm1.d, thm1.horizon) == (100, 5, 1, 1000)
    assert thm1.matcher == "chain_forced"
    assert thm1.graph.kind == "er_chain" and thm1.graph.p == 0.05
    assert thm1.rates.chain.theta.kind == "mu_anchored"
    assert thm1.init.kind == "uniform01"
    assert thm1.record_every == 10  # n > 50 default

    thm2 = load_scenario("thm2")
    assert thm2.matcher == "uniform"
    assert thm2.rates.chain.theta.kind == "point"
    assert thm2.rates.chain.theta.a == 1.0
    assert thm2.init.kind == "cauchy"


def test_builtin_raw_is_a_fresh_copy():
    raw = builtin_raw("thm1")
    raw["n"] = 3
    assert load_scenario("thm1").n == 100
    with pytest.raises(ConfigError):
        builtin_raw("nope")


def test_yaml_scenario_round_trip(tmp_path):
    path = tmp_path / "demo.yaml"
    path.write_text(scenario_text())
    cfg = load_scenario(str(path))
    assert cfg.name == "demo"
    assert (cfg.n, cfg.m, cfg.horizon, cfg.seed) == (6, 2, 25, 9)
    assert cfg.record_every == 5
    assert cfg.convergence_tol == 1e-4
    # static layers are converted to 0-based canonical edges
    assert cfg.graph.layers is not None
    assert cfg.graph.layers[0] == (Edge(0, 1), Edge(1, 2), Edge(4, 5))
    assert cfg.graph.layers[1] == (Edge(0, 5),)
    assert cfg.init.values is not None
    assert cfg.init.values.shape == (2, 6, 1)
    assert cfg.init.values[1, 0, 0] == 1.0


def test_unknown_scenario_name_is_an_error():
    with pytest.raises(ConfigError):
        load_scenario("does-not-exist")


def invalid(raw_patch: dict, base: str = "thm1") -> None:
    raw = builtin_raw(base)
    raw.update(raw_patch)
    with pytest.raises(ConfigError):
        parse_scenario(raw)


def test_top_level_validation():
    invalid({"n": 1})
    invalid({"m": 0})
    invalid({"d": 0})
    invalid({"horizon": 0})
    invalid({"seed": -1})
    invalid({"seed": 2**64})
    invalid({"record_every": 0})
    invalid({"convergence_tol": 0.0})
    invalid({"matcher": "greedy"})
    invalid({"bogus_key": 1})
    invalid({"n": 2.5})


def test_rate_law_validation():
    raw = builtin_raw("thm1")
    raw["rates"]["other"]["mu"] = {"kind": "uniform", "lo": 0.0, "hi": 0.6}
    with pytest.raises(ConfigError) as exc:
        parse_scenario(raw)
    assert "rates.other.mu" in str(exc.value)

    raw = builtin_raw("thm1")
    raw["rates"]["chain"]["theta"] = {"kind": "point", "value": 1.5}
    with pytest.raises(ConfigError) as exc:
        parse_scenario(raw)
    assert "rates.chain.theta" in str(exc.value)

    raw = builtin_raw("thm1")
    del raw["rates"]["chain"]
    with pytest.raises(ConfigError):
        parse_scenario(raw)


def test_graph_validation():
    invalid({"graph": {"kind": "er_chain", "p": 1.5}})
    invalid({"graph": {"kind": "smallworld", "p": 0.1}})
    invalid({"graph": {"kind": "static", "layers": []}})
    # vertex out of range and self-loop, n = 100 here
    invalid({"graph": {"kind": "static", "layers": [[[1, 101]]] * 5}})
    invalid({"graph": {"kind": "static", "layers": [[[3, 3]]] * 5}})
    # layer count must match m
    invalid({"graph": {"kind": "static", "layers": [[[1, 2]]]}})


def test_init_validation():
    invalid({"init": {"kind": "cauchy", "scale": 0.0}})
    invalid({"init": {"kind": "normal"}})
    invalid({"init": {"kind": "explicit", "values": [[1.0, 2.0]]}})


def test_default_record_every_rule():
    assert default_record_every(50) == 1
    assert default_record_every(51) == 10
    raw = builtin_raw("thm1")
    raw["n"] = 20
    assert parse_scenario(raw).record_every == 1


def test_malformed_yaml_is_a_config_error(tmp_path):
    path = tmp_path / "broken.yaml"
    path.write_text("n: [unclosed\n")
    with pytest.raises(ConfigError):
        load_scenario(str(path))
    path.write_text("- just\n- a list\n")
    with pytest.raises(ConfigError):
        load_scenario(str(path))
