"""Reproducible random number streams for parallel Monte Carlo runs.

Every replica of an experiment draws from its own statistically independent
stream identified by (master_seed, stream_index).  Streams are backed by the
counter-based Philox bit generator, keyed through numpy's SeedSequence hash
of the pair, so the mapping is platform stable and requires no coordination
between workers: replica r always sees the same bytes no matter which thread
runs it or in what order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class RngStream:
    """Handle for one reproducible stream of randomness.

    The mixing function is SeedSequence((master_seed, stream_index)), whose
    output keys a Philox-4x64 counter generator.  Identical handles produce
    identical byte streams; distinct stream_index values give streams that
    are independent for all practical purposes.
    """

    master_seed: int
    stream_index: int = 0

    def __post_init__(self):
        if not 0 <= self.master_seed < 2**64:
            raise ValueError("master_seed must fit in an unsigned 64-bit integer")
        if not 0 <= self.stream_index < 2**64:
            raise ValueError("stream_index must fit in an unsigned 64-bit integer")

    def generator(self) -> np.random.Generator:
        """Fresh numpy Generator positioned at the start of this stream."""
        seq = np.random.SeedSequence((self.master_seed, self.stream_index))
        return np.random.Generator(np.random.Philox(seq))

    def substream(self, index: int) -> "RngStream":
        """Stream with the same master seed and a different index."""
        return RngStream(self.master_seed, index)
