"""Evolving bandit state: factor estimates, interaction history, knobs."""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from collections import defaultdict
from dataclasses import dataclass, field
from typing import DefaultDict

import numpy as np

from .linalg import FloatArray, as_matrix, as_vector

S_MODES = ("fixed", "max_row_norm")
PRIORS = ("zero", "estimate")


@dataclass(frozen=True)
class Hyperparameters:
    """Tuning knobs shared by the ALB policy and its baselines.

    ``sigma1``/``sigma2`` are standard deviations of the random
    initialization of A and B.
    """

    lambda1: float = 0.01
    lambda2: float = 0.01
    sigma: float = 0.5
    delta: float = 0.01
    s: float = 1.0
    rank: int = 5
    sigma1: float = 1.0
    sigma2: float = 1.0
    s_mode: str = "fixed"
    prior: str = "zero"
    epsilon: float = 0.1

    def __post_init__(self) -> None:
        if self.lambda1 <= 0 or self.lambda2 <= 0:
            raise ValueError("lambda1 and lambda2 must be > 0")
        if not 0 < self.delta < 1:
            raise ValueError("delta must lie in (0, 1)")
        if self.sigma < 0 or self.s < 0:
            raise ValueError("sigma and s must be >= 0")
        if self.rank < 1:
            raise ValueError("rank must be >= 1")
        if self.sigma1 <= 0 or self.sigma2 <= 0:
            raise ValueError("sigma1 and sigma2 must be > 0")
        if not 0 <= self.epsilon <= 1:
            raise ValueError("epsilon must lie in [0, 1]")
        if self.s_mode not in S_MODES:
            raise ValueError(f"s_mode must be one of {', '.join(S_MODES)}")
        if self.prior not in PRIORS:
            raise ValueError(f"prior must be one of {', '.join(PRIORS)}")

    def norm_bound(self, model: FactorModel) -> float:
        """Value of ``s`` entering the confidence radius."""

        if self.s_mode == "max_row_norm":
            return float(np.linalg.norm(model.A, axis=1).max())
        return self.s


@dataclass
class FactorModel:
    """Current estimates of the user (A) and item (B) feature matrices."""

    A: FloatArray
    B: FloatArray

    def __post_init__(self) -> None:
        self.A = as_matrix(self.A)
        self.B = as_matrix(self.B)
        if self.A.shape[1] != self.B.shape[1]:
            raise ValueError(
                f"rank mismatch: A has {self.A.shape[1]} columns, "
                f"B has {self.B.shape[1]}"
            )

    @property
    def n(self) -> int:
        return int(self.A.shape[0])

    @property
    def m(self) -> int:
        return int(self.B.shape[0])

    @property
    def k(self) -> int:
        return int(self.A.shape[1])

    def copy(self) -> FactorModel:
        return FactorModel(A=self.A.copy(), B=self.B.copy())


def init_model(
    n: int,
    m: int,
    k: int,
    sigma1: float,
    sigma2: float,
    rng: np.random.Generator,
) -> FactorModel:
    """Draw A ~ N(0, sigma1^2) and B ~ N(0, sigma2^2) entrywise."""

    if min(n, m, k) < 1:
        raise ValueError("n, m and k must be >= 1")
    if sigma1 <= 0 or sigma2 <= 0:
        raise ValueError("sigma1 and sigma2 must be > 0")
    A = rng.normal(0.0, sigma1, size=(n, k))
    B = rng.normal(0.0, sigma2, size=(m, k))
    return FactorModel(A=A, B=B)


@dataclass
class InteractionLog:
    """Time-indexed history of (user, item, rating) with feature snapshots.

    ``X[t]`` holds the item features and ``Z[t]`` the user features used at
    step ``t``. Snapshot rows are rewritten in place when the owning user
    or item estimate changes.
    """

    k: int
    capacity: int = 1024
    _users: np.ndarray = field(init=False, repr=False)
    _items: np.ndarray = field(init=False, repr=False)
    _ratings: FloatArray = field(init=False, repr=False)
    _X: FloatArray = field(init=False, repr=False)
    _Z: FloatArray = field(init=False, repr=False)
    _user_steps: DefaultDict[int, list[int]] = field(
        init=False, repr=False, default_factory=lambda: defaultdict(list)
    )
    _item_steps: DefaultDict[int, list[int]] = field(
        init=False, repr=False, default_factory=lambda: defaultdict(list)
    )
    _length: int = field(init=False, default=0)

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError("rank must be >= 1")
        size = max(int(self.capacity), 1)
        self._users = np.zeros(size, dtype=np.int64)
        self._items = np.zeros(size, dtype=np.int64)
        self._ratings = np.zeros(size)
        self._X = np.zeros((size, self.k))
        self._Z = np.zeros((size, self.k))

    def __len__(self) -> int:
        return self._length

    @property
    def users(self) -> np.ndarray:
        return self._users[: self._length]

    @property
    def items(self) -> np.ndarray:
        return self._items[: self._length]

    @property
    def ratings(self) -> FloatArray:
        return self._ratings[: self._length]

    @property
    def X(self) -> FloatArray:
        return self._X[: self._length]

    @property
    def Z(self) -> FloatArray:
        return self._Z[: self._length]

    def record_step(
        self,
        user: int,
        item: int,
        rating: float,
        x_row: FloatArray,
        z_row: FloatArray,
    ) -> int:
        """Append one interaction and return its step index."""

        x = as_vector(x_row, self.k)
        z = as_vector(z_row, self.k)
        t = self._length
        if t == self._users.shape[0]:
            self._grow()
        self._users[t] = user
        self._items[t] = item
        self._ratings[t] = rating
        self._X[t] = x
        self._Z[t] = z
        self._user_steps[int(user)].append(t)
        self._item_steps[int(item)].append(t)
        self._length = t + 1
        return t

    def user_index_set(
        self, user: int, before: int | None = None
    ) -> np.ndarray:
        """Steps ``l < before`` at which ``user`` arrived.

        ``before`` defaults to the current length, i.e. the step about to
        be played.
        """

        steps = self._user_steps.get(int(user), [])
        stop = len(steps) if before is None else bisect_left(steps, before)
        return np.asarray(steps[:stop], dtype=np.int64)

    def item_index_set(
        self, item: int, through: int | None = None
    ) -> np.ndarray:
        """Steps ``l <= through`` at which ``item`` was played."""

        steps = self._item_steps.get(int(item), [])
        stop = len(steps) if through is None else bisect_right(steps, through)
        return np.asarray(steps[:stop], dtype=np.int64)

    def rewrite_user_rows(self, user: int, new_row: FloatArray) -> None:
        """Overwrite ``Z`` on every step that belongs to ``user``."""

        row = as_vector(new_row, self.k)
        steps = self._user_steps.get(int(user))
        if steps:
            self._Z[steps] = row

    def rewrite_item_rows(self, item: int, new_row: FloatArray) -> None:
        """Overwrite ``X`` on every step that belongs to ``item``."""

        row = as_vector(new_row, self.k)
        steps = self._item_steps.get(int(item))
        if steps:
            self._X[steps] = row

    def _grow(self) -> None:
        size = self._users.shape[0] * 2
        self._users = np.resize(self._users, size)
        self._items = np.resize(self._items, size)
        self._ratings = np.resize(self._ratings, size)
        self._X = np.resize(self._X, (size, self.k))
        self._Z = np.resize(self._Z, (size, self.k))
