"""Integration tests for the albench workflow."""

import csv
import os
from pathlib import Path

import numpy as np
import pytest

from albench.analysis import ExperimentReport
from albench.config import ExperimentConfig, parse_config
from albench.harness import (
    emit_results,
    grid_search,
    rank_sweep,
    run_experiment,
    run_once,
)


def _gaussian_config(tmp_path, horizon, seeds, users=200, items=200):
    config = ExperimentConfig(
        horizon=horizon,
        seeds=list(seeds),
        rank=5,
        output_dir=tmp_path / "results",
        outputs=["csv"],
    )
    config.environment.users = users
    config.environment.items = items
    config.environment.rank = 5
    config.policy.params = {"lambda": 0.01, "sigma": 0.5, "epsilon": 0.1}
    return config.validate()


def _finals(config, policy):
    config.policy.names = [policy]
    report = run_experiment(config)
    return np.array([record.final_regret for record in report.records])


def _stderr(values):
    return values.std(ddof=1) / np.sqrt(values.size)


@pytest.mark.integration
def test_end_to_end_workflow(sample_config):
    """Test complete workflow from config file to emitted files."""
    config = parse_config(sample_config)
    config.outputs = ["csv", "metadata", "console"]

    report = run_experiment(config)
    assert [r.seed for r in report.records] == [0, 1]

    attachments = emit_results(config, report)
    names = sorted(Path(path).name for path in attachments)
    assert names == [
        "alb-k2-p000-s0.json",
        "alb-k2-p000-s1.json",
        "steps.csv",
    ]

    with (config.output_dir / "steps.csv").open(newline="") as handle:
        rows = list(csv.DictReader(handle))
    assert len(rows) == 80
    last = [row for row in rows if row["seed"] == "1"][-1]
    assert float(last["cum_regret"]) == report.records[1].final_regret


@pytest.mark.integration
def test_replay_end_to_end(tmp_path, movielens_file):
    """Test a replay run only recommends rated items."""
    config = ExperimentConfig(
        horizon=60, seeds=[3], rank=2, output_dir=tmp_path / "out"
    )
    config.environment.kind = "movielens"
    config.environment.path = movielens_file
    config.policy.params = {"lambda": 1.0, "sigma": 0.4}
    config.validate()

    record = run_once(config, seed=3)
    assert set(np.unique(record.user)) <= {0, 1, 2}
    assert np.all(record.regret >= 0)
    assert np.all(np.isin(record.rating, [1.0, 2.0, 3.0, 4.0, 5.0]))


@pytest.mark.integration
def test_alb_beats_random_small(tmp_path):
    """Test ALB accumulates less regret than random play."""
    config = _gaussian_config(tmp_path, 1500, [0, 1], users=10, items=10)
    config.environment.rank = 2
    config.environment.noise = 0.1
    config.rank = 2
    alb = _finals(config, "alb")
    random = _finals(config, "random")
    assert alb.mean() < random.mean()


@pytest.mark.integration
def test_egreedy_beats_random_small(tmp_path):
    """Test epsilon-greedy accumulates less regret than random play."""
    config = _gaussian_config(tmp_path, 1500, [0, 1], users=10, items=10)
    config.environment.rank = 2
    config.environment.noise = 0.1
    config.rank = 2
    greedy = _finals(config, "egreedy")
    random = _finals(config, "random")
    assert greedy.mean() < random.mean()


@pytest.mark.integration
def test_egreedy_depends_on_regularization(tmp_path):
    """Test egreedy runs with different lambda make different choices."""
    config = _gaussian_config(tmp_path, 300, [0], users=10, items=10)
    config.environment.rank = 2
    config.rank = 2
    config.policy.names = ["egreedy"]
    runs = []
    for value in (0.01, 1.0):
        config.policy.params = {"lambda": value, "epsilon": 0.1}
        runs.append(run_once(config, seed=0))
    assert not np.array_equal(runs[0].item, runs[1].item)
    assert runs[0].final_regret != runs[1].final_regret


@pytest.mark.slow
@pytest.mark.integration
def test_sublinear_regret(tmp_path):
    """Test average regret at T = 25000 is under half of that at 2500."""
    config = _gaussian_config(tmp_path, 25000, range(5))
    records = run_experiment(config).records
    curves = np.array([record.cum_regret for record in records]).mean(0)
    assert curves[-1] / 25000 < 0.5 * curves[2499] / 2500


@pytest.mark.slow
@pytest.mark.integration
def test_baseline_ordering(tmp_path):
    """Test ALB < epsilon-greedy < random by more than two errors."""
    config = _gaussian_config(tmp_path, 25000, range(5))
    alb = _finals(config, "alb")
    greedy = _finals(config, "egreedy")
    random = _finals(config, "random")

    band = 2 * np.hypot(_stderr(alb), _stderr(greedy))
    assert greedy.mean() - alb.mean() > band
    band = 2 * np.hypot(_stderr(greedy), _stderr(random))
    assert random.mean() - greedy.mean() > band


@pytest.mark.slow
@pytest.mark.integration
def test_rank_robustness(tmp_path):
    """Test ALB varies less across ranks than epsilon-greedy."""
    config = _gaussian_config(tmp_path, 25000, range(5))
    sweep = rank_sweep(config, ranks=[3, 5, 7], policies=["alb", "egreedy"])
    assert len(sweep.results) == 6
    assert sweep.spread("alb") < sweep.spread("egreedy")


@pytest.mark.slow
@pytest.mark.integration
def test_single_rank_grid_is_reproducible(tmp_path):
    """Test a grid search gives byte-identical output when repeated."""
    config = _gaussian_config(tmp_path, 2000, range(3), users=50, items=50)
    config.policy.grid = {"lambda": [0.01, 0.1], "sigma": [0.1, 0.5]}
    records = []
    first = grid_search(config, workers=2, sink=records)
    emit_results(config, ExperimentReport(records=records, grids=[first]))
    before = (config.output_dir / "grid.csv").read_bytes()

    records = []
    second = grid_search(config, workers=1, sink=records)
    emit_results(config, ExperimentReport(records=records, grids=[second]))
    assert (config.output_dir / "grid.csv").read_bytes() == before
    assert first.best.params == second.best.params


@pytest.mark.slow
@pytest.mark.integration
@pytest.mark.skipif(
    "ALBENCH_ML100K" not in os.environ,
    reason="set ALBENCH_ML100K to the MovieLens 100K u.data path",
)
def test_movielens_100k_replay(tmp_path):
    """Test a full-length ALB replay on MovieLens 100K round-trips."""
    config = ExperimentConfig(
        horizon=25000, seeds=[0], rank=5, output_dir=tmp_path / "ml"
    )
    config.environment.kind = "movielens"
    config.environment.path = Path(os.environ["ALBENCH_ML100K"])
    config.policy.params = {"lambda": 1.0, "sigma": 0.4}
    config.outputs = ["csv", "metadata"]
    config.validate()

    report = run_experiment(config)
    emit_results(config, report)
    with (config.output_dir / "steps.csv").open(newline="") as handle:
        regrets = [float(row["regret"]) for row in csv.DictReader(handle)]
    assert len(regrets) == 25000
    assert np.cumsum(regrets)[-1] == report.records[0].final_regret
