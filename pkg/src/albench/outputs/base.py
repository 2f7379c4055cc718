"""Result writers and their registry."""

from __future__ import annotations

import sys
from abc import ABC, abstractmethod
from collections.abc import Callable, Iterable
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, ClassVar

from ..analysis import ExperimentReport
from ..config import ExperimentConfig


@dataclass
class OutputContext:
    """Shared state handed to every writer of one experiment."""

    config: ExperimentConfig
    attachments: list[str] = field(default_factory=list)
    stdout: IO[str] | None = None

    def __post_init__(self) -> None:
        if self.stdout is None:
            self.stdout = sys.stdout

    @property
    def output_dir(self) -> Path:
        return Path(self.config.output_dir)

    def ensure_dir(self, *parts: str) -> Path:
        target = self.output_dir.joinpath(*parts)
        target.mkdir(parents=True, exist_ok=True)
        return target

    def attach(self, path: Path) -> None:
        self.attachments.append(str(path))


class OutputModule(ABC):
    name: ClassVar[str]
    # summaries that list the attachments of the other writers
    runs_last: ClassVar[bool] = False

    def __init__(self, context: OutputContext):
        self.context = context

    @abstractmethod
    def render(self, report: ExperimentReport) -> None:
        """Write ``report`` in this module's format."""


REGISTRY: dict[str, type[OutputModule]] = {}


def register_output(
    name: str,
) -> Callable[[type[OutputModule]], type[OutputModule]]:
    def decorator(cls: type[OutputModule]) -> type[OutputModule]:
        if name in REGISTRY and REGISTRY[name] is not cls:
            raise ValueError(f"output module '{name}' is already registered")
        REGISTRY[name] = cls
        cls.name = name
        return cls

    return decorator


def get_output_module(name: str) -> type[OutputModule]:
    key = name.strip().lower()
    if key not in REGISTRY:
        raise KeyError(
            f"Unknown output module '{name}'. "
            f"Available: {', '.join(list_outputs())}"
        )
    return REGISTRY[key]


def resolve_outputs(names: Iterable[str]) -> list[type[OutputModule]]:
    """Modules for ``names`` without repeats, ``runs_last`` ones at the end."""

    modules: list[type[OutputModule]] = []
    for name in names:
        if not name.strip():
            continue
        module = get_output_module(name)
        if module not in modules:
            modules.append(module)
    return sorted(modules, key=lambda module: module.runs_last)


def list_outputs() -> list[str]:
    return sorted(REGISTRY.keys())
