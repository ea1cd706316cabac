"""Layer graphs and the per-step multilayer topology.

Vertices are 0-based everywhere in the library; external text formats
(dumps, scenario files, CSV) are 1-based and converted at the boundary.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

__all__ = [
    "Edge",
    "LayerGraph",
    "MultilayerTopology",
    "generate_er_with_chain",
    "connected_components",
    "spanning_forest",
    "is_connected",
    "graph_dump_lines",
]


class Edge(NamedTuple):
    """Undirected edge, stored canonically with u < v."""

    u: int
    v: int

    @classmethod
    def canonical(cls, a: int, b: int) -> "Edge":
        if a == b:
            raise ValueError(f"self-loop at vertex {a}")
        return cls(a, b) if a < b else cls(b, a)

    @property
    def is_chain(self) -> bool:
        """True when the edge joins consecutively indexed vertices."""
        return self.v - self.u == 1


@dataclass
class LayerGraph:
    """Simple undirected graph on vertices 0..n-1."""

    n: int
    edges: frozenset[Edge]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"graph needs at least one vertex, got n={self.n}")
        for e in self.edges:
            if not (0 <= e.u < e.v < self.n):
                raise ValueError(f"edge {e} out of range for n={self.n}")

    def adjacency(self) -> list[list[int]]:
        """Neighbor lists in ascending vertex order."""
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        for lst in adj:
            lst.sort()
        return adj


@dataclass
class MultilayerTopology:
    """One LayerGraph per layer, all on the same vertex set."""

    layers: tuple[LayerGraph, ...]

    def __post_init__(self) -> None:
        if not self.layers:
            raise ValueError("topology needs at least one layer")
        sizes = {g.n for g in self.layers}
        if len(sizes) != 1:
            raise ValueError(f"layers disagree on vertex count: {sorted(sizes)}")

    @property
    def n(self) -> int:
        return self.layers[0].n

    @property
    def m(self) -> int:
        return len(self.layers)

    def layers_containing(self, edge: Edge) -> tuple[int, ...]:
        """Indices of the layers whose edge set contains `edge`, ascending."""
        return tuple(k for k, g in enumerate(self.layers) if edge in g.edges)


@lru_cache(maxsize=8)
def _non_chain_pairs(n: int) -> tuple[np.ndarray, np.ndarray]:
    # all pairs u < v with v - u >= 2, i.e. everything except the chain
    return np.triu_indices(n, k=2)


def generate_er_with_chain(n: int, p: float, rng: np.random.Generator) -> LayerGraph:
    """Erdos-Renyi graph with edge probability p, plus the full chain.

    Every edge (i, i+1) is always present; each remaining pair enters
    independently with probability p.  p = 0 gives the bare chain and
    p = 1 the complete graph.
    """
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"edge probability must lie in [0, 1], got {p}")
    edges = {Edge(i, i + 1) for i in range(n - 1)}
    iu, iv = _non_chain_pairs(n)
    if len(iu):
        keep = rng.random(len(iu)) < p
        edges.update(Edge(int(a), int(b)) for a, b in zip(iu[keep], iv[keep]))
    return LayerGraph(n, frozenset(edges))


def connected_components(g: LayerGraph) -> list[list[int]]:
    """Partition of the vertex set into components, each sorted, ordered by minimum."""
    adj = g.adjacency()
    seen = [False] * g.n
    parts: list[list[int]] = []
    for start in range(g.n):
        if seen[start]:
            continue
        comp = [start]
        seen[start] = True
        queue = [start]
        while queue:
            u = queue.pop(0)
            for v in adj[u]:
                if not seen[v]:
                    seen[v] = True
                    comp.append(v)
                    queue.append(v)
        parts.append(sorted(comp))
    return parts


def spanning_forest(g: LayerGraph) -> LayerGraph:
    """Breadth-first spanning forest of g.

    Deterministic: roots are the lowest unvisited vertices, neighbors are
    explored in ascending order, so equal inputs give identical forests.
    """
    adj = g.adjacency()
    seen = [False] * g.n
    edges: set[Edge] = set()
    for start in range(g.n):
        if seen[start]:
            continue
        seen[start] = True
        queue = [start]
        while queue:
            u = queue.pop(0)
            for v in adj[u]:
                if not seen[v]:
                    seen[v] = True
                    edges.add(Edge.canonical(u, v))
                    queue.append(v)
    return LayerGraph(g.n, frozenset(edges))


def is_connected(g: LayerGraph) -> bool:
    return len(connected_components(g)) == 1


def graph_dump_lines(topo: MultilayerTopology) -> list[str]:
    """Human-readable dump, one line per layer, 1-based, edges ascending."""
    lines = []
    for k, g in enumerate(topo.layers):
        body = ",".join(f"{u + 1}-{v + 1}" for u, v in sorted(g.edges))
        lines.append(f"layer {k + 1}: {body}")
    return lines


def _self_test() -> None:
    rng = np.random.default_rng(0)
    g = generate_er_with_chain(6, 0.3, rng)
    assert is_connected(g)
    f = spanning_forest(g)
    assert len(f.edges) == g.n - 1
    assert connected_components(f) == connected_components(g)


if __name__ == "__main__":
    _self_test()
    print("ok")
