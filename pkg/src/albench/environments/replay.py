"""Cold-start replay over a logged ratings table."""

from __future__ import annotations

import numpy as np

from ..datasets import EmptyTable, RatingsTable
from .base import Environment, NoNoise


def make_replay_env(
    table: RatingsTable,
    rng: np.random.Generator | None = None,
    arrival: str = "uniform",
) -> Environment:
    """Recommend only among the items each user rated; no noise.

    ``rng`` is accepted for signature parity with the synthetic builders;
    construction itself is deterministic.
    """

    if len(table) == 0:
        raise EmptyTable(f"{table.name}: table has no ratings")
    return Environment(
        Y=table.dense(),
        noise=NoNoise(),
        candidates=table.rated_items(),
        arrival=arrival,
        descriptor={"kind": "replay", "dataset": table.describe()},
    )
