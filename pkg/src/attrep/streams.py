"""Counter-keyed random streams for reproducible simulation runs.

Every random draw in a run is made from a Generator whose Philox counter
encodes (purpose, t, layer, edge) and whose key encodes the run seed.  Two
consequences we rely on throughout:

* a draw is a pure function of (seed, purpose, t, layer, edge), so results
  do not depend on the order in which pairs or layers are processed;
* distinct purposes (init, graph, matching, rates) can never collide, even
  at the same (t, layer), because the purpose tag lives in the key.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["RunStreams"]

_MASK64 = (1 << 64) - 1

# purpose tags; values are arbitrary but frozen (changing them reseeds everything)
_TAG_INIT = 0x11
_TAG_GRAPH = 0x22
_TAG_MATCH = 0x33
_TAG_RATES = 0x44


@dataclass(frozen=True)
class RunStreams:
    """Family of independent random streams derived from one 64-bit seed."""

    seed: int

    def __post_init__(self) -> None:
        if not 0 <= self.seed <= _MASK64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed}")

    def _generator(self, tag: int, a: int = 0, b: int = 0, c: int = 0) -> np.random.Generator:
        # word 0 of the counter is left at zero: it is what Philox increments
        # as the stream is consumed, so the keyed words (a, b, c) never change.
        bitgen = np.random.Philox(counter=[0, a, b, c], key=[self.seed, tag])
        return np.random.Generator(bitgen)

    def init(self) -> np.random.Generator:
        """Stream for drawing the initial opinion profile."""
        return self._generator(_TAG_INIT)

    def graph(self, t: int, layer: int) -> np.random.Generator:
        """Stream for generating the graph of `layer` at step `t`."""
        return self._generator(_TAG_GRAPH, t, layer)

    def matching(self, t: int) -> np.random.Generator:
        """Stream for sampling the matching at step `t`."""
        return self._generator(_TAG_MATCH, t)

    def rates(self, t: int, layer: int, u: int, v: int) -> np.random.Generator:
        """Stream for the rate draw of edge (u, v) on `layer` at step `t`."""
        if not 0 <= u < (1 << 32) or not 0 <= v < (1 << 32):
            raise ValueError(f"vertex ids must fit in 32 bits, got ({u}, {v})")
        return self._generator(_TAG_RATES, t, layer, (u << 32) | v)
