"""Output module registry."""

# Ensure built-in modules register themselves
from . import console, csv_writer, metadata  # noqa: F401
from .base import (
    OutputContext,
    OutputModule,
    get_output_module,
    list_outputs,
    resolve_outputs,
)

__all__ = [
    "OutputContext",
    "OutputModule",
    "get_output_module",
    "list_outputs",
    "resolve_outputs",
]
