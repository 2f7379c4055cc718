"""Regret and ranking metrics."""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from numpy.typing import ArrayLike

from .environments import Environment
from .linalg import FloatArray

NDCG_CONVENTION = "policy scores rank the user's candidate set"


@dataclass
class RunRecord:
    """Per-step results of one run plus its metadata.

    ``t`` is 1-based.
    """

    run_id: str
    policy: str
    seed: int
    t: np.ndarray
    user: np.ndarray
    item: np.ndarray
    rating: FloatArray
    regret: FloatArray
    ndcg: FloatArray
    metadata: dict[str, Any] = field(default_factory=dict)

    def __len__(self) -> int:
        return int(self.t.shape[0])

    @property
    def cum_regret(self) -> FloatArray:
        return np.cumsum(self.regret)

    @property
    def avg_cum_ndcg(self) -> FloatArray:
        return average_cumulative(self.ndcg)

    @property
    def final_regret(self) -> float:
        return float(self.cum_regret[-1])


def instantaneous_regret(env: Environment, user: int, rating: float) -> float:
    """``Y[user, j*] - y`` with ``j*`` the best candidate for ``user``."""

    _, best = env.best_item(user)
    return best - rating


def ndcg_at_k(
    ranking: Sequence[int],
    relevance: Mapping[int, float],
    k: int,
) -> float:
    """NDCG of the top ``k`` of ``ranking``; 1.0 when no item is relevant.

    The ideal ordering sorts every item in ``relevance`` by decreasing
    relevance. Items absent from ``relevance`` count as zero.
    """

    if k < 1:
        raise ValueError("cutoff must be >= 1")
    discounts = 1.0 / np.log2(np.arange(2, k + 2))
    gains = np.array([relevance.get(item, 0.0) for item in ranking[:k]])
    ideal = np.sort(np.fromiter(relevance.values(), dtype=float))[::-1][:k]
    idcg = float(ideal @ discounts[: len(ideal)])
    if idcg == 0.0:
        return 1.0
    dcg = float(gains @ discounts[: len(gains)])
    return min(dcg / idcg, 1.0)


def rank_candidates(scores: FloatArray, candidates: np.ndarray) -> np.ndarray:
    """Candidates by decreasing score; the lower index wins ties."""

    ordered = np.sort(candidates)
    return ordered[np.argsort(-scores[ordered], kind="stable")]


def step_ndcg(
    scores: FloatArray, env: Environment, user: int, k: int
) -> float:
    """NDCG@k of the policy's ranking of ``user``'s candidate set."""

    candidates = env.candidate_set(user)
    if len(candidates) == 1:
        return 1.0
    shift = env.relevance_shift
    relevance = {
        int(item): env.true_rating(user, int(item)) - shift
        for item in candidates
    }
    ranking = [int(item) for item in rank_candidates(scores, candidates)]
    return ndcg_at_k(ranking, relevance, min(k, len(candidates)))


def average_cumulative(series: ArrayLike) -> FloatArray:
    """``out[t] = mean(series[: t + 1])``."""

    values = np.asarray(series, dtype=np.float64)
    if values.size == 0:
        raise ValueError("series is empty")
    return np.cumsum(values) / np.arange(1, values.size + 1)
