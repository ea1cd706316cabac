"""Random matchings of the complete graph and the derived active set.

A matching is a set of vertex-disjoint pairs.  Pairs that exist in at
least one layer of the current topology are "active": they are the only
ones that move opinions during a step.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from .graphs import Edge, MultilayerTopology

__all__ = [
    "Matching",
    "ActivePair",
    "ActiveSet",
    "sample_uniform_matching",
    "sample_matching_with_chain_edge",
    "derive_active_set",
    "is_connected_collection",
    "matching_dump_line",
]


@dataclass(frozen=True)
class Matching:
    """Vertex-disjoint pairs, canonically ordered.  May be empty."""

    pairs: tuple[Edge, ...]

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]]) -> "Matching":
        canon = sorted(Edge.canonical(a, b) for a, b in pairs)
        used: set[int] = set()
        for u, v in canon:
            if u in used or v in used:
                raise ValueError(f"pairs are not vertex-disjoint at ({u}, {v})")
            used.update((u, v))
        return cls(tuple(canon))

    def vertices(self) -> set[int]:
        return {w for e in self.pairs for w in e}


class ActivePair(NamedTuple):
    edge: Edge
    layers: tuple[int, ...]  # ascending, never empty


@dataclass(frozen=True)
class ActiveSet:
    """Matched pairs present in at least one layer, with their layer sets."""

    pairs: tuple[ActivePair, ...]


def sample_uniform_matching(n: int, rng: np.random.Generator) -> Matching:
    """Uniformly supported random matching of the complete graph on n vertices.

    Draw a random permutation, read off consecutive disjoint candidate
    pairs, keep each independently with probability 1/2.  Every matching,
    including the empty one, has positive probability.
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    perm = rng.permutation(n)
    pairs = []
    for k in range(0, n - 1, 2):
        if rng.random() < 0.5:
            pairs.append((int(perm[k]), int(perm[k + 1])))
    return Matching.from_pairs(pairs)


def sample_matching_with_chain_edge(n: int, rng: np.random.Generator) -> Matching:
    """Random matching guaranteed to contain at least one chain edge (i, i+1).

    One chain edge is chosen uniformly and forced in; the remaining
    vertices are matched by the same scheme as sample_uniform_matching.
    """
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    i = int(rng.integers(n - 1))
    pairs = [(i, i + 1)]
    rest = [w for w in range(n) if w != i and w != i + 1]
    perm = rng.permutation(len(rest))
    for k in range(0, len(rest) - 1, 2):
        if rng.random() < 0.5:
            pairs.append((rest[perm[k]], rest[perm[k + 1]]))
    return Matching.from_pairs(pairs)


def derive_active_set(u: Matching, topo: MultilayerTopology) -> ActiveSet:
    """Restrict a matching to the pairs present in at least one layer."""
    active = []
    for edge in u.pairs:
        layers = topo.layers_containing(edge)
        if layers:
            active.append(ActivePair(edge, layers))
    return ActiveSet(tuple(active))


def is_connected_collection(active: ActiveSet, m: int) -> bool:
    """Whether the active pairs jointly touch every layer and overlap into one block.

    Two active pairs overlap when their layer sets intersect.  The
    collection qualifies if the overlap graph on the pairs is connected
    and the union of all layer sets is the full layer range 0..m-1.
    An empty active set never qualifies.
    """
    if m < 1:
        raise ValueError(f"need m >= 1, got {m}")
    if not active.pairs:
        return False
    sets = [set(p.layers) for p in active.pairs]
    union = set().union(*sets)
    if union != set(range(m)):
        return False
    seen = [False] * len(sets)
    seen[0] = True
    queue = [0]
    while queue:
        a = queue.pop()
        for b in range(len(sets)):
            if not seen[b] and sets[a] & sets[b]:
                seen[b] = True
                queue.append(b)
    return all(seen)


def matching_dump_line(t: int, active: ActiveSet) -> str:
    """One-line dump of a step's active pairs, 1-based: t: (u,v)[k,...];..."""
    body = ";".join(
        f"({p.edge.u + 1},{p.edge.v + 1})[{','.join(str(k + 1) for k in p.layers)}]"
        for p in active.pairs
    )
    return f"{t}: {body}"
