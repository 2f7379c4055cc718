"""Aggregation of run records into grid and rank-sweep summaries."""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Any, DefaultDict

import numpy as np

from ..metrics import RunRecord


@dataclass
class GridPointStat:
    index: int
    params: dict[str, float]
    seeds: list[int]
    final_regrets: list[float]
    final_ndcg: list[float]
    mean: float
    stderr: float

    @property
    def sort_key(self) -> tuple[float, tuple[tuple[str, float], ...]]:
        return (self.mean, tuple(sorted(self.params.items())))


@dataclass
class GridResult:
    policy: str
    rank: int
    points: list[GridPointStat]
    best: GridPointStat


@dataclass
class RankSweep:
    results: list[GridResult] = field(default_factory=list)

    def for_policy(self, policy: str) -> list[GridResult]:
        return sorted(
            (r for r in self.results if r.policy == policy),
            key=lambda r: r.rank,
        )

    def spread(self, policy: str) -> float:
        """Max minus min of the best mean final regret across ranks."""

        means = [r.best.mean for r in self.for_policy(policy)]
        return max(means) - min(means) if means else 0.0

    def rows(self) -> list[dict[str, Any]]:
        return [
            {
                "policy": r.policy,
                "rank": r.rank,
                "mean_final_regret": r.best.mean,
                "stderr": r.best.stderr,
                "params": r.best.params,
            }
            for r in sorted(self.results, key=lambda r: (r.policy, r.rank))
        ]


def mean_and_stderr(values: list[float]) -> tuple[float, float]:
    data = np.asarray(values, dtype=np.float64)
    mean = float(data.mean())
    if data.size < 2:
        return mean, 0.0
    return mean, float(data.std(ddof=1) / math.sqrt(data.size))


class ResultAggregator:
    """Incrementally collect run records for one policy and rank."""

    def __init__(
        self, policy: str, rank: int, points: list[dict[str, float]]
    ):
        self.policy = policy
        self.rank = rank
        self.points = points
        self.regrets: DefaultDict[int, dict[int, float]] = defaultdict(dict)
        self.ndcg: DefaultDict[int, dict[int, float]] = defaultdict(dict)

    def ingest(self, point_index: int, record: RunRecord) -> None:
        self.regrets[point_index][record.seed] = record.final_regret
        self.ndcg[point_index][record.seed] = float(record.avg_cum_ndcg[-1])

    def build_result(self) -> GridResult:
        stats = []
        for index, params in enumerate(self.points):
            by_seed = self.regrets.get(index)
            if not by_seed:
                continue
            seeds = sorted(by_seed)
            regrets = [by_seed[seed] for seed in seeds]
            mean, stderr = mean_and_stderr(regrets)
            stats.append(
                GridPointStat(
                    index=index,
                    params=dict(params),
                    seeds=seeds,
                    final_regrets=regrets,
                    final_ndcg=[self.ndcg[index][seed] for seed in seeds],
                    mean=mean,
                    stderr=stderr,
                )
            )
        if not stats:
            raise ValueError(f"no runs recorded for policy '{self.policy}'")
        best = min(stats, key=lambda stat: stat.sort_key)
        return GridResult(
            policy=self.policy, rank=self.rank, points=stats, best=best
        )


@dataclass
class ExperimentReport:
    """Everything an experiment produced, handed to the output modules."""

    records: list[RunRecord]
    grids: list[GridResult] = field(default_factory=list)
    sweep: RankSweep | None = None
