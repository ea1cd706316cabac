from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from attrep.diagnostics import (
    component_epsilon_trivial,
    consensus_error,
    dispersion_report,
    drop_bound,
    global_average,
    lyapunov_w,
    max_pairwise_distance,
    net_attraction,
)
from attrep.dynamics import MuLaw, OpinionState, ThetaLaw, step
from attrep.graphs import Edge, LayerGraph, MultilayerTopology
from attrep.matching import Matching, sample_uniform_matching
from attrep.streams import RunStreams
from oracles import epsilon_trivial_brute
from test_dynamics import policy_point, random_topology


def test_lyapunov_w_is_sum_of_squared_norms():
    x = np.array([[[1.0, 2.0], [0.0, 3.0]]])  # m=1, n=2, d=2
    assert lyapunov_w(OpinionState(x)) == 1 + 4 + 9


def test_drop_bound_single_layer_half_rate_is_exact():
    # one pair on one layer at unit distance with r = 1/2: the averaging
    # slack vanishes, so the measured drop equals the bound, 0.5 exactly
    state = OpinionState(np.array([[[0.0], [1.0]]]))
    topo = MultilayerTopology((LayerGraph(2, frozenset({Edge(0, 1)})),))
    u = Matching.from_pairs([(0, 1)])
    new_state, trace = step(state, topo, u, policy_point(0.5, 1.0), 0, RunStreams(0))
    report = dispersion_report(trace, state)
    assert report.bound == pytest.approx(0.5, abs=1e-15)
    assert report.drop == pytest.approx(report.bound, abs=1e-14)
    assert new_state.x.tolist() == [[[0.5], [0.5]]]


@given(seed=st.integers(0, 20_000))
@settings(max_examples=200, deadline=None)
def test_measured_drop_dominates_bound(seed: int):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 9))
    m = int(rng.integers(1, 4))
    d = int(rng.integers(1, 4))
    state = OpinionState(rng.normal(scale=2.0, size=(m, n, d)))
    topo = random_topology(n, m, float(rng.uniform(0.2, 0.9)), rng)
    u = sample_uniform_matching(n, rng)
    policy = policy_point(float(rng.uniform(0.05, 0.5)), float(rng.uniform(0.0, 1.0)))
    _, trace = step(state, topo, u, policy, 0, RunStreams(seed))
    report = dispersion_report(trace, state)
    assert report.drop >= report.bound - 1e-9 * max(1.0, abs(report.w))


def test_net_attraction_point_masses_are_exact():
    rng = np.random.default_rng(0)
    est = net_attraction(MuLaw.point(0.5), ThetaLaw.point(1.0), 10, rng)
    assert (est.value, est.std_error, est.n_samples) == (0.25, 0.0, 0)
    est = net_attraction(MuLaw.point(0.3), ThetaLaw.point(0.5), 10, rng)
    assert est.value == pytest.approx(-0.09, abs=1e-15)
    # theta = (1 + mu) / 2 balances attraction and repulsion exactly
    est = net_attraction(MuLaw.point(0.4), ThetaLaw.point(0.7), 10, rng)
    assert est.value == pytest.approx(0.0, abs=1e-15)
    assert est.std_error == 0.0


def test_net_attraction_monte_carlo_matches_closed_form():
    # mu ~ U(0.1, 0.5), theta = 1: E[mu (1 - mu)] = E[mu] - E[mu^2]
    rng = np.random.default_rng(1)
    est = net_attraction(MuLaw.uniform(0.1, 0.5), ThetaLaw.point(1.0), 200_000, rng)
    want = 0.3 - (0.3**2 + 0.4**2 / 12)
    assert est.n_samples == 200_000
    assert est.std_error > 0
    assert abs(est.value - want) < 5 * est.std_error


def test_net_attraction_anchored_chain_law_is_positive():
    rng = np.random.default_rng(2)
    est = net_attraction(MuLaw.uniform(0.1, 0.5), ThetaLaw.mu_anchored(1.1), 200_000, rng)
    # closed form: E[mu (1.1 - mu) / 2]
    want = (1.1 * 0.3 - (0.3**2 + 0.4**2 / 12)) / 2
    assert abs(est.value - want) < 5 * est.std_error
    assert est.value > 5 * est.std_error


def test_net_attraction_rejects_tiny_sample_counts():
    with pytest.raises(ValueError):
        net_attraction(MuLaw.uniform(0.1, 0.5), ThetaLaw.point(1.0), 1, np.random.default_rng(0))


def path_graph(n: int) -> LayerGraph:
    return LayerGraph(n, frozenset(Edge(i, i + 1) for i in range(n - 1)))


def test_epsilon_trivial_hand_cases():
    # two components: {0,1} close, {2,3} far apart
    g = LayerGraph(4, frozenset({Edge(0, 1), Edge(2, 3)}))
    x = np.zeros((1, 4, 1))
    x[0, :, 0] = [0.0, 0.05, 1.0, 2.0]
    state = OpinionState(x)
    assert component_epsilon_trivial(g, state, 0, 1.1)
    assert not component_epsilon_trivial(g, state, 0, 0.5)  # {2,3} is 1.0 apart
    # distance exactly at eps counts as close (0.5 is exact in binary)
    g2 = LayerGraph(2, frozenset({Edge(0, 1)}))
    x2 = np.array([[[0.0], [0.5]]])
    assert component_epsilon_trivial(g2, OpinionState(x2), 0, 0.5)
    # isolated vertices are always trivial
    assert component_epsilon_trivial(LayerGraph(4, frozenset()), state, 0, 0.0)


def test_epsilon_trivial_uses_opinion_distance_not_hops():
    # endpoints of a path are not adjacent but must still be within eps
    g = path_graph(3)
    x = np.zeros((1, 3, 1))
    x[0, :, 0] = [0.0, 0.5, 1.0]
    state = OpinionState(x)
    assert not component_epsilon_trivial(g, state, 0, 0.6)
    assert component_epsilon_trivial(g, state, 0, 1.0)


def test_epsilon_trivial_validates_arguments():
    g = path_graph(3)
    state = OpinionState(np.zeros((2, 3, 1)))
    with pytest.raises(ValueError):
        component_epsilon_trivial(g, state, 0, -1.0)
    with pytest.raises(ValueError):
        component_epsilon_trivial(g, state, 2, 0.1)
    with pytest.raises(ValueError):
        component_epsilon_trivial(LayerGraph(4, frozenset()), state, 0, 0.1)


@given(seed=st.integers(0, 20_000))
@settings(max_examples=150, deadline=None)
def test_epsilon_trivial_agrees_with_brute_force(seed: int):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 8))
    d = int(rng.integers(1, 3))
    edges = {
        (u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.4
    }
    g = LayerGraph(n, frozenset(Edge(u, v) for u, v in edges))
    x = rng.normal(size=(1, n, d))
    state = OpinionState(x)
    eps = float(rng.uniform(0.0, 3.0))
    got = component_epsilon_trivial(g, state, 0, eps)
    want = epsilon_trivial_brute(n, edges, x[0], eps)
    assert got == want


def test_consensus_error_is_max_slot_distance():
    x = np.zeros((2, 2, 2))
    x[1, 1] = [3.0, 4.0]
    state = OpinionState(x)
    assert consensus_error(state, np.zeros(2)) == 5.0
    with pytest.raises(ValueError):
        consensus_error(state, np.zeros(3))


def test_global_average_and_max_distance():
    x = np.array([[[0.0], [1.0]], [[2.0], [5.0]]])
    state = OpinionState(x)
    assert global_average(state).tolist() == [2.0]
    assert max_pairwise_distance(state) == 5.0
    # multi-dimensional path uses the euclidean norm
    y = np.zeros((1, 2, 2))
    y[0, 1] = [3.0, 4.0]
    assert max_pairwise_distance(OpinionState(y)) == 5.0
