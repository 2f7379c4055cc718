"""albench package bootstrap."""

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("albench")
except PackageNotFoundError:  # pragma: no cover - source checkout
    __version__ = "0.1.0.dev0"

from .cli import main  # noqa: E402

__all__ = [
    "cli",
    "config",
    "harness",
    "main",
    "__version__",
]
