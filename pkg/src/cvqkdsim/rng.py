"""Seeded, substream-isolated randomness.

Every stochastic operation in the simulator draws from a RandomStream.
Streams are keyed by (master_seed, substream_id): the same key always
reproduces the same draws, and distinct substream ids give statistically
independent sequences.  One substream per physical noise source per run
keeps noise toggles isolated (switching one source on or off does not
shift the draws of any other source).
"""

from __future__ import annotations

import numpy as np


class RandomStream:
    """Single-owner random source bound to (master_seed, substream_id)."""

    def __init__(self, master_seed: int, substream_id: int = 0):
        self.master_seed = int(master_seed)
        self.substream_id = int(substream_id)
        ss = np.random.SeedSequence(entropy=self.master_seed,
                                    spawn_key=(self.substream_id,))
        self.generator = np.random.Generator(np.random.PCG64(ss))

    def clone(self) -> "RandomStream":
        """Fresh stream with the same key (restarts the sequence)."""
        return RandomStream(self.master_seed, self.substream_id)

    def child(self, offset: int) -> "RandomStream":
        """Derived stream for a sub-task; offset folds into the substream id."""
        return RandomStream(self.master_seed, (self.substream_id << 16) ^ offset)

    def __repr__(self):
        return f"RandomStream(master_seed={self.master_seed}, substream_id={self.substream_id})"


# Substream registry: one id per physical noise source / pipeline stage.
SUBSTREAM = {
    "symbols": 1,
    "pilot": 2,
    "rin": 3,
    "phase": 4,
    "raman": 5,
    "excess": 6,
    "shot": 7,
    "thermal": 8,
    "calibration": 9,
    "postproc": 10,
    "oracle": 11,
}


def stream_for(master_seed: int, source: str) -> RandomStream:
    """Stream for a named noise source under the given master seed."""
    return RandomStream(master_seed, SUBSTREAM[source])
