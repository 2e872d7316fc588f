"""
Alert Swarm - Seeded Random Streams
One root seed split into independent (phase, agent, tick) streams.

A stream depends only on its key, never on how many draws other agents or
phases made, so reordering agents inside a tick cannot change any outcome.
"""

from enum import Enum

import numpy as np


class Phase(Enum):
    """Phases that consume randomness."""
    SPAWN = 0
    RESPOND = 1
    QUERY = 2
    SHARE = 3


class RngStreams:
    """
    Factory for named numpy Generators.

    Example:
        streams = RngStreams(7)
        rng = streams.stream(Phase.RESPOND, agent=3, tick=12)
    """

    def __init__(self, seed: int):
        if not 0 <= seed < 2 ** 64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
        self.seed = int(seed)

    def stream(self, phase: Phase, agent: int = 0, tick: int = 0) -> np.random.Generator:
        sequence = np.random.SeedSequence(self.seed, spawn_key=(phase.value, int(agent), int(tick)))
        return np.random.Generator(np.random.PCG64(sequence))

    def __repr__(self) -> str:
        return f"RngStreams(seed={self.seed})"
