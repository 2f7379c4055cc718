"""Independent random streams derived from one master seed."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

STREAMS = ("init", "environment", "arrivals", "noise", "policy")


def stream(seed: int, name: str) -> np.random.Generator:
    """Counter-based generator for ``name`` under master ``seed``."""

    index = STREAMS.index(name)
    sequence = np.random.SeedSequence(entropy=seed, spawn_key=(index,))
    return np.random.Generator(np.random.Philox(sequence))


@dataclass
class SeedStreams:
    seed: int
    init: np.random.Generator = field(init=False)
    environment: np.random.Generator = field(init=False)
    arrivals: np.random.Generator = field(init=False)
    noise: np.random.Generator = field(init=False)
    policy: np.random.Generator = field(init=False)

    def __post_init__(self) -> None:
        for name in STREAMS:
            setattr(self, name, stream(self.seed, name))
