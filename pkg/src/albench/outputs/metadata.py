"""Per-run metadata documents (JSON)."""

from __future__ import annotations

import json
from datetime import datetime, timezone
from typing import Any

from .. import __version__
from ..analysis import ExperimentReport
from ..metrics import NDCG_CONVENTION, RunRecord
from .base import OutputModule, register_output


@register_output("metadata")
class MetadataOutput(OutputModule):
    """One ``runs/<run_id>.json`` per run with the resolved config."""

    def render(self, report: ExperimentReport) -> None:
        target = self.context.ensure_dir("runs")
        created = datetime.now(timezone.utc).isoformat(timespec="seconds")

        for record in report.records:
            path = target / f"{record.run_id}.json"
            document = self._document(record, created)
            path.write_text(
                json.dumps(document, indent=2, sort_keys=True) + "\n",
                encoding="utf-8",
            )
            self.context.attach(path)

    def _document(self, record: RunRecord, created: str) -> dict[str, Any]:
        config = self.context.config
        return {
            "run_id": record.run_id,
            "policy": record.policy,
            "seed": record.seed,
            "steps": len(record),
            "final_cum_regret": record.final_regret,
            "final_avg_cum_ndcg": float(record.avg_cum_ndcg[-1]),
            "ndcg_convention": NDCG_CONVENTION,
            "config": config.to_dict(),
            "config_sha256": config.checksum,
            "library_version": __version__,
            "created": created,
            **record.metadata,
        }
