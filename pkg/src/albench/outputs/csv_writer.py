"""CSV export module."""

from __future__ import annotations

import csv
import json
from collections.abc import Iterable, Iterator, Sequence
from pathlib import Path
from typing import Any

from ..analysis import ExperimentReport
from ..metrics import RunRecord
from .base import OutputModule, register_output

STEP_HEADER = [
    "run_id",
    "policy",
    "seed",
    "t",
    "user",
    "item",
    "y",
    "regret",
    "cum_regret",
    "ndcg",
    "avg_cum_ndcg",
]


def fmt_float(value: float) -> str:
    """17 significant digits, enough to round-trip a double."""

    return f"{float(value):.17g}"


def step_rows(record: RunRecord) -> Iterator[list[Any]]:
    cum_regret = record.cum_regret
    avg_ndcg = record.avg_cum_ndcg
    for row in range(len(record)):
        yield [
            record.run_id,
            record.policy,
            record.seed,
            int(record.t[row]),
            int(record.user[row]),
            int(record.item[row]),
            fmt_float(record.rating[row]),
            fmt_float(record.regret[row]),
            fmt_float(cum_regret[row]),
            fmt_float(record.ndcg[row]),
            fmt_float(avg_ndcg[row]),
        ]


@register_output("csv")
class CsvOutput(OutputModule):
    """Long-format per-step table plus grid and rank-sweep summaries."""

    def render(self, report: ExperimentReport) -> None:
        target = self.context.ensure_dir()

        self._write_csv(
            target / "steps.csv",
            STEP_HEADER,
            (row for record in report.records for row in step_rows(record)),
        )

        if report.grids:
            self._write_csv(
                target / "grid.csv",
                [
                    "policy",
                    "rank",
                    "point",
                    "params",
                    "seeds",
                    "mean_final_regret",
                    "stderr",
                    "best",
                ],
                (
                    [
                        grid.policy,
                        grid.rank,
                        stat.index,
                        json.dumps(stat.params, sort_keys=True),
                        len(stat.seeds),
                        fmt_float(stat.mean),
                        fmt_float(stat.stderr),
                        int(stat.index == grid.best.index),
                    ]
                    for grid in report.grids
                    for stat in grid.points
                ),
            )

        if report.sweep is not None:
            self._write_csv(
                target / "rank_sweep.csv",
                ["policy", "rank", "mean_final_regret", "stderr", "params"],
                (
                    [
                        row["policy"],
                        row["rank"],
                        fmt_float(row["mean_final_regret"]),
                        fmt_float(row["stderr"]),
                        json.dumps(row["params"], sort_keys=True),
                    ]
                    for row in report.sweep.rows()
                ),
            )

    def _write_csv(
        self,
        path: Path,
        headers: Sequence[str],
        rows: Iterable[Sequence],
    ) -> None:
        with path.open("w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle)
            writer.writerow(headers)
            writer.writerows(rows)
        self.context.attach(path)
