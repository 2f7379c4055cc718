"""Result aggregation for albench."""

from .aggregator import (
    ExperimentReport,
    GridResult,
    RankSweep,
    ResultAggregator,
)

__all__ = [
    "ExperimentReport",
    "GridResult",
    "RankSweep",
    "ResultAggregator",
]
