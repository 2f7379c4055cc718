"""Configuration handling for albench experiments."""

from __future__ import annotations

import hashlib
import itertools
import logging
import os
import re
from collections.abc import Callable, Iterable, Sequence
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, TypeVar

from .state import Hyperparameters

LOGGER = logging.getLogger(__name__)
T = TypeVar("T")

INLINE_COMMENT = re.compile(r"\s+#.*$")


class ConfigError(RuntimeError):
    """Raised when the configuration file cannot be parsed or found."""


DEFAULT_CONF_PATHS: list[Path] = [
    Path.cwd() / "albench.conf",
]

SYNTHETIC_KINDS = ("gaussian", "uniform", "bernoulli")
DATASET_KINDS = ("movielens", "bookcrossing", "jester")

# Hyperparameters of policies that are reserved in the schema only.
RESERVED_KEYS = {"particles", "theta", "exploration_set"}

NUMERIC_POLICY_KEYS = {
    "lambda",
    "lambda1",
    "lambda2",
    "sigma",
    "delta",
    "s",
    "sigma1",
    "sigma2",
    "epsilon",
}
TEXT_POLICY_KEYS = {"s_mode", "prior"}


def _bool(value: str) -> bool:
    return value.strip().lower() in {"1", "true", "yes", "on"}


def _split_csv(raw: str) -> list[str]:
    return [item.strip() for item in raw.split(",") if item.strip()]


def _int_list(raw: str) -> list[int]:
    return [int(item) for item in _split_csv(raw)]


def _float_list(raw: str) -> list[float]:
    return [float(item) for item in _split_csv(raw)]


def _optional(caster: Callable[[str], T]) -> Callable[[str], T | None]:
    def cast(raw: str) -> T | None:
        if raw.strip().lower() in {"", "none", "default"}:
            return None
        return caster(raw)

    return cast


@dataclass
class EnvironmentSpec:
    kind: str = "gaussian"
    users: int = 200
    items: int = 200
    rank: int = 5
    sigma1: float = 1.0
    sigma2: float = 1.0
    noise: float = 0.5
    width: float = 0.5
    path: Path | None = None
    format: str | None = None
    include_implicit: bool = False
    # None keeps the ingester default, 0 disables the limit
    max_users: int | None = None
    max_items: int | None = None
    arrival: str = "uniform"

    @property
    def is_replay(self) -> bool:
        return self.kind in DATASET_KINDS


@dataclass
class PolicySpec:
    names: list[str] = field(default_factory=lambda: ["alb"])
    params: dict[str, Any] = field(default_factory=dict)
    grid: dict[str, list[float]] = field(default_factory=dict)

    def hyperparameters(
        self, rank: int, point: dict[str, float] | None = None
    ) -> Hyperparameters:
        """Resolve scalar settings and a grid point into knobs."""

        values: dict[str, Any] = {**self.params, **(point or {})}
        if "lambda" in values:
            tied = values.pop("lambda")
            values.setdefault("lambda1", tied)
            values.setdefault("lambda2", tied)
            if point and "lambda" in point:
                values["lambda1"] = values["lambda2"] = tied
        try:
            return Hyperparameters(rank=rank, **values)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"Invalid hyperparameters: {exc}") from exc

    def grid_points(self, tunables: Iterable[str]) -> list[dict[str, float]]:
        """Cartesian product of the grid axes ``tunables`` cares about.

        Axes are ordered by name; values keep their listed order.
        """

        wanted = set(tunables)
        axes = sorted(
            (name, values)
            for name, values in self.grid.items()
            if name in wanted
        )
        if not axes:
            return [{}]
        names = [name for name, _ in axes]
        return [
            dict(zip(names, combo))
            for combo in itertools.product(*(values for _, values in axes))
        ]


@dataclass
class ExperimentConfig:
    horizon: int = 25000
    seeds: list[int] = field(default_factory=lambda: [0, 1, 2, 3, 4])
    rank: int = 5
    ndcg_cutoff: int = 5
    output_dir: Path = Path("./results")
    budget: int = 10**9
    workers: int = 1
    outputs: list[str] = field(
        default_factory=lambda: ["csv", "metadata", "console"]
    )
    ranks: list[int] = field(default_factory=lambda: [3, 5, 7])
    environment: EnvironmentSpec = field(default_factory=EnvironmentSpec)
    policy: PolicySpec = field(default_factory=PolicySpec)
    source: Path | None = None
    checksum: str = ""

    def validate(self) -> ExperimentConfig:
        if self.horizon < 1:
            raise ConfigError("horizon must be >= 1")
        if not self.seeds:
            raise ConfigError("at least one seed is required")
        if self.rank < 1 or any(rank < 1 for rank in self.ranks):
            raise ConfigError("ranks must be >= 1")
        if self.ndcg_cutoff < 1:
            raise ConfigError("ndcg_cutoff must be >= 1")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if not self.policy.names:
            raise ConfigError("at least one policy name is required")
        for name, values in self.policy.grid.items():
            if not values:
                raise ConfigError(f"grid axis '{name}' is empty")
        env = self.environment
        if env.kind not in SYNTHETIC_KINDS + DATASET_KINDS:
            raise ConfigError(f"Unknown environment kind '{env.kind}'")
        if env.is_replay and env.path is None:
            raise ConfigError(f"environment '{env.kind}' needs a path")
        if env.arrival not in ("uniform", "round_robin"):
            raise ConfigError(f"Unknown arrival process '{env.arrival}'")
        for point in self.policy.grid_points(self.policy.grid):
            self.policy.hyperparameters(self.rank, point)
        return self

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        return _jsonable(data)


def _jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {key: _jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(item) for item in value]
    if isinstance(value, Path):
        return str(value)
    return value


def discover_config_file(explicit_path: Path | None = None) -> Path:
    """Return the first readable configuration file."""

    candidates: Sequence[Path]
    if explicit_path:
        candidates = [explicit_path]
    else:
        env_path = os.getenv("ALBENCH_CONFIG")
        candidates = [Path(env_path)] if env_path else DEFAULT_CONF_PATHS

    for candidate in candidates:
        if candidate.is_file():
            return candidate

    raise ConfigError(
        "No configuration file found. Searched: "
        + ", ".join(str(p) for p in candidates)
    )


def parse_config(path: Path | None = None) -> ExperimentConfig:
    """Load an experiment configuration (strictly section-based)."""

    conf_path = discover_config_file(path)
    raw = _read_config_file(conf_path)

    config = ExperimentConfig(source=conf_path)
    config.checksum = hashlib.sha256(conf_path.read_bytes()).hexdigest()

    mappings: list[tuple[str, Any, str, Callable[[str], Any]]] = [
        # [experiment]
        ("experiment.horizon", config, "horizon", int),
        ("experiment.seeds", config, "seeds", _int_list),
        ("experiment.rank", config, "rank", int),
        ("experiment.ndcg_cutoff", config, "ndcg_cutoff", int),
        ("experiment.output_dir", config, "output_dir", Path),
        ("experiment.budget", config, "budget", int),
        ("experiment.workers", config, "workers", int),
        ("experiment.outputs", config, "outputs", _split_csv),
        # [sweep]
        ("sweep.ranks", config, "ranks", _int_list),
        # [policy]
        ("policy.name", config.policy, "names", _split_csv),
    ]
    env = config.environment
    mappings += [
        ("environment.kind", env, "kind", str.lower),
        ("environment.users", env, "users", int),
        ("environment.items", env, "items", int),
        ("environment.rank", env, "rank", int),
        ("environment.sigma1", env, "sigma1", float),
        ("environment.sigma2", env, "sigma2", float),
        ("environment.noise", env, "noise", float),
        ("environment.width", env, "width", float),
        ("environment.path", env, "path", _optional(Path)),
        ("environment.format", env, "format", _optional(str.lower)),
        ("environment.include_implicit", env, "include_implicit", _bool),
        ("environment.max_users", env, "max_users", _optional(int)),
        ("environment.max_items", env, "max_items", _optional(int)),
        ("environment.arrival", env, "arrival", str.lower),
    ]

    known = set()
    for key, target, attr, caster in mappings:
        known.add(key)
        if key in raw:
            try:
                setattr(target, attr, caster(raw[key]))
            except ValueError as exc:
                raise ConfigError(
                    f"Invalid value for {key} in {conf_path}: {raw[key]!r}"
                ) from exc

    _parse_policy_params(config.policy, raw, conf_path)
    _parse_grid(config.policy, raw, conf_path)

    for key in raw:
        section = key.split(".", 1)[0]
        if key not in known and section in {"experiment", "environment"}:
            LOGGER.warning("Ignoring unknown key %s in %s", key, conf_path)

    return config.validate()


def _parse_policy_params(
    policy: PolicySpec, raw: dict[str, str], conf_path: Path
) -> None:
    """Scalar hyperparameters from the [policy] section."""

    prefix = "policy."
    for key, value in raw.items():
        if not key.startswith(prefix) or key == "policy.name":
            continue
        name = key.replace(prefix, "")
        if name in RESERVED_KEYS:
            LOGGER.info("Ignoring reserved hyperparameter %s", name)
        elif name in NUMERIC_POLICY_KEYS:
            try:
                policy.params[name] = float(value)
            except ValueError as exc:
                raise ConfigError(
                    f"Invalid value for {key} in {conf_path}: {value!r}"
                ) from exc
        elif name in TEXT_POLICY_KEYS:
            policy.params[name] = value.lower()
        else:
            raise ConfigError(f"Unknown policy key '{name}' in {conf_path}")


def _parse_grid(
    policy: PolicySpec, raw: dict[str, str], conf_path: Path
) -> None:
    """Value lists from the [grid] section only."""

    prefix = "grid."
    for key, value in raw.items():
        if not key.startswith(prefix):
            continue
        name = key.replace(prefix, "")
        if name in RESERVED_KEYS:
            LOGGER.info("Ignoring reserved grid axis %s", name)
            continue
        if name not in NUMERIC_POLICY_KEYS:
            raise ConfigError(f"Unknown grid axis '{name}' in {conf_path}")
        try:
            policy.grid[name] = _float_list(value)
        except ValueError as exc:
            raise ConfigError(
                f"Invalid value for {key} in {conf_path}: {value!r}"
            ) from exc
        if not policy.grid[name]:
            raise ConfigError(f"grid axis '{name}' is empty")


def _read_config_file(conf_path: Path) -> dict[str, str]:
    """Read a config file into a flat key/value mapping with section keys."""

    raw: dict[str, str] = {}
    current_section: str | None = None

    with conf_path.open("r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue

            # Section header, e.g. [experiment], [policy], [grid]
            if stripped.startswith("[") and stripped.endswith("]"):
                name = stripped[1:-1].strip().lower()
                current_section = name or None
                continue

            if "=" not in stripped:
                raise ConfigError(
                    f"Invalid config line {lineno} in {conf_path}: {line!r}"
                )

            if current_section is None:
                raise ConfigError(
                    f"Config key outside section at line {lineno} in "
                    f"{conf_path}: {line!r}"
                )

            key, value = stripped.split("=", 1)
            key = key.strip().lower()
            value = INLINE_COMMENT.sub("", value)
            raw[f"{current_section}.{key}"] = value.strip()

    return raw
