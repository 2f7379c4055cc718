"""Base classes and registry for recommendation policies."""

from __future__ import annotations

from abc import ABC, abstractmethod
from collections.abc import Callable
from dataclasses import dataclass
from typing import ClassVar

import numpy as np

from ..linalg import FloatArray
from ..state import FactorModel, Hyperparameters, InteractionLog

RESERVED_POLICIES = {
    "pts": "particle Thompson sampling",
    "nmf-bandit": "NMF-Bandit",
}


class EmptyCandidateSet(ValueError):
    """Raised when a policy is asked to choose from no items."""


@dataclass
class Selection:
    """Item chosen at one step plus the per-item scores behind it."""

    item: int
    scores: FloatArray
    explored: bool = False


class Policy(ABC):
    """A recommender that picks one candidate item per arriving user.

    ``select`` must return a member of ``candidates``; ``observe`` receives
    the rating of the item most recently selected for that user.
    """

    name: ClassVar[str]
    tunables: ClassVar[tuple[str, ...]] = ()

    def __init__(
        self,
        model: FactorModel,
        hp: Hyperparameters,
        rng: np.random.Generator,
        capacity: int = 1024,
    ):
        self.model = model
        self.hp = hp
        self.rng = rng
        self.log = InteractionLog(k=model.k, capacity=capacity)

    @abstractmethod
    def select(self, user: int, candidates: np.ndarray) -> Selection:
        """Choose an item for ``user`` among ``candidates``."""

    @abstractmethod
    def observe(self, user: int, item: int, rating: float) -> None:
        """Absorb the rating ``user`` gave to ``item``."""

    def step(
        self,
        user: int,
        candidates: np.ndarray,
        feedback: Callable[[int], float],
    ) -> tuple[Selection, float]:
        selection = self.select(user, candidates)
        rating = feedback(selection.item)
        self.observe(user, selection.item, rating)
        return selection, rating


def check_candidates(candidates: np.ndarray, m: int | None = None) -> None:
    if len(candidates) == 0:
        raise EmptyCandidateSet("candidate set is empty")
    if m is not None and (candidates.min() < 0 or candidates.max() >= m):
        raise IndexError(f"candidate index outside [0, {m})")


def greedy_argmax(scores: FloatArray, candidates: np.ndarray) -> int:
    """Best-scoring candidate; the lowest item index wins ties."""

    ordered = np.sort(candidates)
    return int(ordered[int(np.argmax(scores[ordered]))])


REGISTRY: dict[str, type[Policy]] = {}


def register_policy(
    name: str,
) -> Callable[[type[Policy]], type[Policy]]:
    def decorator(cls: type[Policy]) -> type[Policy]:
        REGISTRY[name] = cls
        cls.name = name
        return cls

    return decorator


def get_policy(name: str) -> type[Policy]:
    if name in RESERVED_POLICIES:
        raise KeyError(
            f"Policy '{name}' ({RESERVED_POLICIES[name]}) is reserved in "
            "the result schema but not implemented."
        )
    if name not in REGISTRY:
        raise KeyError(
            f"Unknown policy '{name}'. Available: {', '.join(REGISTRY)}"
        )
    return REGISTRY[name]


def list_policies() -> list[str]:
    return sorted(REGISTRY.keys())
