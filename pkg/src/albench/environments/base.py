"""Reward oracles: true ratings, observation noise and user arrivals."""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..linalg import FloatArray

ARRIVALS = ("uniform", "round_robin")


class NoiseModel(ABC):
    name: str

    @abstractmethod
    def sample(self, value: float, rng: np.random.Generator) -> float:
        """Observed rating for true rating ``value``."""

    def describe(self) -> dict[str, Any]:
        return {"name": self.name}


class NoNoise(NoiseModel):
    name = "none"

    def sample(self, value: float, rng: np.random.Generator) -> float:
        return float(value)


@dataclass
class GaussianNoise(NoiseModel):
    sigma: float
    name = "gaussian"

    def sample(self, value: float, rng: np.random.Generator) -> float:
        if self.sigma == 0:
            return float(value)
        return float(value + rng.normal(0.0, self.sigma))

    def describe(self) -> dict[str, Any]:
        return {"name": self.name, "sigma": self.sigma}


@dataclass
class UniformNoise(NoiseModel):
    width: float
    name = "uniform"

    def sample(self, value: float, rng: np.random.Generator) -> float:
        half = self.width / 2.0
        return float(value + rng.uniform(-half, half))

    def describe(self) -> dict[str, Any]:
        return {"name": self.name, "width": self.width}


class BernoulliNoise(NoiseModel):
    """0/1 observation with success probability equal to the true rating."""

    name = "bernoulli"

    def sample(self, value: float, rng: np.random.Generator) -> float:
        return 1.0 if rng.random() < value else 0.0


@dataclass
class Environment:
    """Reward oracle over an ``n x m`` true rating matrix.

    Absent entries of ``Y`` are NaN; they are never candidates. The
    relevance shift used for NDCG is the global minimum of ``Y`` when that
    minimum is negative, else zero.
    """

    Y: FloatArray
    noise: NoiseModel
    candidates: list[np.ndarray]
    arrival: str = "uniform"
    descriptor: dict[str, Any] = field(default_factory=dict)
    true_A: FloatArray | None = None
    true_B: FloatArray | None = None
    active_users: np.ndarray = field(init=False)
    _best: list[tuple[int, float] | None] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if self.arrival not in ARRIVALS:
            raise ValueError(
                f"arrival must be one of {', '.join(ARRIVALS)}"
            )
        if len(self.candidates) != self.Y.shape[0]:
            raise ValueError("one candidate set per user is required")
        self.candidates = [
            np.unique(np.asarray(c, dtype=np.int64)) for c in self.candidates
        ]
        self.active_users = np.array(
            [i for i, c in enumerate(self.candidates) if len(c)],
            dtype=np.int64,
        )
        if not len(self.active_users):
            raise ValueError("no user has a candidate item")
        self._best = [None] * self.n

    @property
    def n(self) -> int:
        return int(self.Y.shape[0])

    @property
    def m(self) -> int:
        return int(self.Y.shape[1])

    @property
    def relevance_shift(self) -> float:
        return min(float(np.nanmin(self.Y)), 0.0)

    def candidate_set(self, user: int) -> np.ndarray:
        return self.candidates[user]

    def next_user(self, rng: np.random.Generator, t: int = 0) -> int:
        if self.arrival == "round_robin":
            return int(self.active_users[t % len(self.active_users)])
        return int(self.active_users[rng.integers(len(self.active_users))])

    def best_item(self, user: int) -> tuple[int, float]:
        """``(j*, Y[user, j*])`` over the candidate set; lowest index ties."""

        cached = self._best[user]
        if cached is None:
            items = self.candidates[user]
            values = self.Y[user, items]
            pos = int(np.argmax(values))
            cached = (int(items[pos]), float(values[pos]))
            self._best[user] = cached
        return cached

    def true_rating(self, user: int, item: int) -> float:
        return float(self.Y[user, item])

    def observe(
        self, user: int, item: int, rng: np.random.Generator
    ) -> float:
        return self.noise.sample(self.true_rating(user, item), rng)

    def describe(self) -> dict[str, Any]:
        return {
            **self.descriptor,
            "users": self.n,
            "items": self.m,
            "noise": self.noise.describe(),
            "arrival": self.arrival,
            "relevance_shift": self.relevance_shift,
        }
