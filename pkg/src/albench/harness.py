"""High-level orchestration: single runs, grid searches and rank sweeps."""

from __future__ import annotations

import logging
from collections.abc import Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import asdict, dataclass, field
from functools import lru_cache, partial
from pathlib import Path
from typing import IO, Any

import numpy as np

from .analysis import (
    ExperimentReport,
    GridResult,
    RankSweep,
    ResultAggregator,
)
from .config import ConfigError, EnvironmentSpec, ExperimentConfig
from .datasets import RatingsTable, ingest
from .environments import (
    Environment,
    make_bernoulli_env,
    make_gaussian_env,
    make_replay_env,
    make_uniform_env,
)
from .metrics import RunRecord, instantaneous_regret, step_ndcg
from .outputs import OutputContext, resolve_outputs
from .policies import Policy, get_policy
from .seeding import STREAMS, SeedStreams
from .state import init_model

LOGGER = logging.getLogger(__name__)


class BudgetExceeded(RuntimeError):
    """Raised before starting work that needs more steps than allowed."""

    def __init__(self, required: int, budget: int):
        self.required = required
        self.budget = budget
        super().__init__(
            f"experiment needs {required} steps, budget is {budget}"
        )


@dataclass(frozen=True)
class RunSpec:
    policy: str
    rank: int
    seed: int
    point_index: int = 0
    point: dict[str, float] = field(default_factory=dict)

    @property
    def run_id(self) -> str:
        return (
            f"{self.policy}-k{self.rank}-p{self.point_index:03d}-s{self.seed}"
        )


def policy_class(name: str) -> type[Policy]:
    try:
        return get_policy(name)
    except KeyError as exc:
        raise ConfigError(str(exc.args[0])) from exc


@lru_cache(maxsize=4)
def load_table(
    kind: str,
    path: Path,
    fmt: str | None,
    include_implicit: bool,
    max_users: int | None,
    max_items: int | None,
) -> RatingsTable:
    options: dict[str, Any] = {}
    if kind == "bookcrossing" or fmt == "bookcrossing":
        options["include_implicit"] = include_implicit
    # None keeps the ingester default, 0 lifts the limit
    if max_users is not None:
        options["max_users"] = max_users or None
    if max_items is not None:
        options["max_items"] = max_items or None
    return ingest(path, fmt or kind, **options)


def build_environment(
    spec: EnvironmentSpec, rng: np.random.Generator
) -> Environment:
    if spec.is_replay:
        assert spec.path is not None
        table = load_table(
            spec.kind,
            Path(spec.path),
            spec.format,
            spec.include_implicit,
            spec.max_users,
            spec.max_items,
        )
        return make_replay_env(table, rng, arrival=spec.arrival)
    if spec.kind == "gaussian":
        return make_gaussian_env(
            spec.users,
            spec.items,
            spec.rank,
            spec.sigma1,
            spec.sigma2,
            spec.noise,
            rng,
            arrival=spec.arrival,
        )
    if spec.kind == "uniform":
        return make_uniform_env(
            spec.users,
            spec.items,
            spec.rank,
            spec.width,
            rng,
            arrival=spec.arrival,
        )
    if spec.kind == "bernoulli":
        return make_bernoulli_env(
            spec.users, spec.items, spec.rank, rng, arrival=spec.arrival
        )
    raise ConfigError(f"Unknown environment kind '{spec.kind}'")


def run_once(
    config: ExperimentConfig,
    seed: int,
    spec: RunSpec | None = None,
) -> RunRecord:
    """Play ``config.horizon`` steps of one policy in one environment."""

    if spec is None:
        spec = RunSpec(
            policy=config.policy.names[0], rank=config.rank, seed=seed
        )
    hp = config.policy.hyperparameters(spec.rank, spec.point)
    cls = policy_class(spec.policy)

    streams = SeedStreams(seed)
    env = build_environment(config.environment, streams.environment)
    model = init_model(
        env.n, env.m, spec.rank, hp.sigma1, hp.sigma2, streams.init
    )
    agent = cls(model, hp, streams.policy, capacity=config.horizon)

    horizon = config.horizon
    users = np.empty(horizon, dtype=np.int64)
    items = np.empty(horizon, dtype=np.int64)
    ratings = np.empty(horizon)
    regrets = np.empty(horizon)
    ndcgs = np.empty(horizon)

    LOGGER.debug("starting %s (T=%d)", spec.run_id, horizon)
    for step in range(horizon):
        user = env.next_user(streams.arrivals, step)
        feedback = partial(env.observe, user, rng=streams.noise)
        selection, rating = agent.step(
            user, env.candidate_set(user), feedback
        )
        users[step] = user
        items[step] = selection.item
        ratings[step] = rating
        regrets[step] = instantaneous_regret(env, user, rating)
        ndcgs[step] = step_ndcg(
            selection.scores, env, user, config.ndcg_cutoff
        )

    record = RunRecord(
        run_id=spec.run_id,
        policy=spec.policy,
        seed=seed,
        t=np.arange(1, horizon + 1),
        user=users,
        item=items,
        rating=ratings,
        regret=regrets,
        ndcg=ndcgs,
        metadata={
            "rank": spec.rank,
            "grid_point": spec.point_index,
            "point": dict(spec.point),
            "hyperparameters": asdict(hp),
            "environment": env.describe(),
            "seed_streams": list(STREAMS),
        },
    )
    LOGGER.info(
        "%s: cumulative regret %.4f", spec.run_id, record.final_regret
    )
    return record


def _run_spec(config: ExperimentConfig, spec: RunSpec) -> RunRecord:
    return run_once(config, spec.seed, spec)


def grid_specs(
    config: ExperimentConfig, policy: str, rank: int
) -> list[RunSpec]:
    points = config.policy.grid_points(policy_class(policy).tunables)
    return [
        RunSpec(
            policy=policy,
            rank=rank,
            seed=seed,
            point_index=index,
            point=point,
        )
        for index, point in enumerate(points)
        for seed in config.seeds
    ]


def check_budget(config: ExperimentConfig, specs: Sequence[RunSpec]) -> None:
    required = len(specs) * config.horizon
    if required > config.budget:
        raise BudgetExceeded(required, config.budget)


def execute(
    config: ExperimentConfig,
    specs: Sequence[RunSpec],
    workers: int | None = None,
    aggregators: dict[tuple[str, int], ResultAggregator] | None = None,
) -> list[RunRecord]:
    """Run every spec; records come back ordered as ``specs``.

    Completed records are handed to the matching aggregator as they
    arrive, in whatever order the workers finish.
    """

    workers = workers or config.workers
    done: dict[int, RunRecord] = {}

    def collect(position: int, record: RunRecord) -> None:
        done[position] = record
        spec = specs[position]
        if aggregators is not None:
            aggregators[(spec.policy, spec.rank)].ingest(
                spec.point_index, record
            )

    if workers <= 1 or len(specs) <= 1:
        for position, spec in enumerate(specs):
            collect(position, _run_spec(config, spec))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = {
                pool.submit(_run_spec, config, spec): position
                for position, spec in enumerate(specs)
            }
            for future in as_completed(futures):
                collect(futures[future], future.result())

    return [done[position] for position in range(len(specs))]


def _search(
    config: ExperimentConfig,
    policies: Iterable[str],
    ranks: Iterable[int],
    workers: int | None,
) -> tuple[list[GridResult], list[RunRecord]]:
    specs: list[RunSpec] = []
    aggregators: dict[tuple[str, int], ResultAggregator] = {}
    for policy in policies:
        for rank in ranks:
            batch = grid_specs(config, policy, rank)
            points = config.policy.grid_points(policy_class(policy).tunables)
            aggregators[(policy, rank)] = ResultAggregator(
                policy, rank, points
            )
            specs.extend(batch)
    check_budget(config, specs)
    records = execute(config, specs, workers, aggregators)
    grids = [agg.build_result() for agg in aggregators.values()]
    return grids, records


def grid_search(
    config: ExperimentConfig,
    policy: str | None = None,
    rank: int | None = None,
    workers: int | None = None,
    sink: list[RunRecord] | None = None,
) -> GridResult:
    """Every grid point over every seed; the lowest mean final regret wins."""

    name = policy or config.policy.names[0]
    grids, records = _search(
        config, [name], [rank or config.rank], workers
    )
    if sink is not None:
        sink.extend(records)
    return grids[0]


def rank_sweep(
    config: ExperimentConfig,
    ranks: Sequence[int] | None = None,
    policies: Sequence[str] | None = None,
    workers: int | None = None,
    sink: list[RunRecord] | None = None,
) -> RankSweep:
    """Repeat the grid search per rank with everything else fixed."""

    ranks = list(ranks or config.ranks)
    if any(rank < 1 for rank in ranks):
        raise ConfigError("ranks must be >= 1")
    grids, records = _search(
        config, policies or config.policy.names, ranks, workers
    )
    if sink is not None:
        sink.extend(records)
    return RankSweep(results=grids)


def run_experiment(
    config: ExperimentConfig, workers: int | None = None
) -> ExperimentReport:
    """Each configured policy at its scalar settings over every seed."""

    specs = [
        RunSpec(policy=policy, rank=config.rank, seed=seed)
        for policy in config.policy.names
        for seed in config.seeds
    ]
    for spec in specs:
        policy_class(spec.policy)
    check_budget(config, specs)
    return ExperimentReport(records=execute(config, specs, workers))


def grid_experiment(
    config: ExperimentConfig, workers: int | None = None
) -> ExperimentReport:
    grids, records = _search(
        config, config.policy.names, [config.rank], workers
    )
    return ExperimentReport(records=records, grids=grids)


def sweep_experiment(
    config: ExperimentConfig,
    ranks: Sequence[int] | None = None,
    workers: int | None = None,
) -> ExperimentReport:
    records: list[RunRecord] = []
    sweep = rank_sweep(config, ranks, workers=workers, sink=records)
    return ExperimentReport(
        records=records, grids=list(sweep.results), sweep=sweep
    )


def emit_results(
    config: ExperimentConfig,
    report: ExperimentReport,
    stdout: IO[str] | None = None,
) -> list[str]:
    """Render ``report`` through the configured outputs; return file paths."""

    if not report.records:
        raise ValueError("nothing to emit: no run records")
    try:
        modules = resolve_outputs(config.outputs)
    except KeyError as exc:
        raise ConfigError(str(exc.args[0])) from exc
    context = OutputContext(config=config, stdout=stdout)
    for module_cls in modules:
        module_cls(context).render(report)
    return context.attachments
