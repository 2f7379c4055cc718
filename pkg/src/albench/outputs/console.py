"""Console summary rendered with rich tables."""

from __future__ import annotations

from rich.console import Console
from rich.table import Table

from ..analysis import ExperimentReport, GridResult
from .base import OutputModule, register_output


@register_output("console")
class ConsoleOutput(OutputModule):
    runs_last = True

    def render(self, report: ExperimentReport) -> None:
        console = Console(file=self.context.stdout, width=100)

        if report.sweep is not None:
            console.print(self._sweep_table(report))
        elif report.grids:
            for grid in report.grids:
                console.print(self._grid_table(grid))
        else:
            console.print(self._runs_table(report))

        if self.context.attachments:
            console.print("Artifacts generated:")
            for path in self.context.attachments:
                console.print(f"  {path}")

    def _runs_table(self, report: ExperimentReport) -> Table:
        table = Table(title="Runs")
        for header in ("Run", "Steps", "Cum. regret", "Avg. NDCG"):
            table.add_column(header)
        for record in report.records:
            table.add_row(
                record.run_id,
                str(len(record)),
                f"{record.final_regret:.3f}",
                f"{record.avg_cum_ndcg[-1]:.4f}",
            )
        return table

    def _grid_table(self, grid: GridResult) -> Table:
        table = Table(title=f"Grid search: {grid.policy} (k={grid.rank})")
        for header in ("#", "Params", "Seeds", "Mean regret", "Std. err."):
            table.add_column(header)
        for stat in grid.points:
            marker = " *" if stat.index == grid.best.index else ""
            params = ", ".join(f"{k}={v:g}" for k, v in stat.params.items())
            table.add_row(
                f"{stat.index}{marker}",
                params or "-",
                str(len(stat.seeds)),
                f"{stat.mean:.3f}",
                f"{stat.stderr:.3f}",
            )
        return table

    def _sweep_table(self, report: ExperimentReport) -> Table:
        assert report.sweep is not None
        table = Table(title="Rank sweep (best grid point per rank)")
        for header in ("Policy", "k", "Mean regret", "Std. err.", "Params"):
            table.add_column(header)
        for row in report.sweep.rows():
            params = ", ".join(f"{k}={v:g}" for k, v in row["params"].items())
            table.add_row(
                row["policy"],
                str(row["rank"]),
                f"{row['mean_final_regret']:.3f}",
                f"{row['stderr']:.3f}",
                params or "-",
            )
        policies = sorted({row["policy"] for row in report.sweep.rows()})
        for policy in policies:
            table.caption = (table.caption or "") + (
                f"{policy} spread: {report.sweep.spread(policy):.3f}  "
            )
        return table
