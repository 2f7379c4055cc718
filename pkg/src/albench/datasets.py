"""Readers for the rating datasets used in replay experiments."""

from __future__ import annotations

import csv
import hashlib
import logging
from collections import Counter
from collections.abc import Callable, Iterable, Iterator
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .linalg import FloatArray

LOGGER = logging.getLogger(__name__)

JESTER_MISSING = 99.0


class IngestionError(RuntimeError):
    """Base class for dataset ingestion failures."""


class ParseError(IngestionError):
    """Raised when a line does not follow the dataset's format."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        where = f"line {lineno}: " if lineno is not None else ""
        super().__init__(f"{where}{message}")


class EmptyTable(IngestionError):
    """Raised when no rating survives parsing and filtering."""


@dataclass
class RatingEntry:
    user: str
    item: str
    rating: float
    lineno: int


@dataclass
class RatingsTable:
    """Deduplicated ``(user, item, rating)`` triples with dense indices.

    ``users[r]``/``items[r]`` index into ``user_ids``/``item_ids``.
    """

    name: str
    user_ids: list[str]
    item_ids: list[str]
    users: np.ndarray
    items: np.ndarray
    ratings: FloatArray
    scale: tuple[float, float]
    source: str = ""
    checksum: str = ""
    columns: int | None = None
    extra: dict[str, Any] = field(default_factory=dict)

    def __len__(self) -> int:
        return int(self.ratings.shape[0])

    @property
    def n(self) -> int:
        return len(self.user_ids)

    @property
    def m(self) -> int:
        return len(self.item_ids)

    @property
    def density(self) -> float:
        return len(self) / float(self.n * self.m)

    def dense(self) -> FloatArray:
        """``n x m`` matrix of ratings with NaN for unrated entries."""

        matrix = np.full((self.n, self.m), np.nan)
        matrix[self.users, self.items] = self.ratings
        return matrix

    def rated_items(self) -> list[np.ndarray]:
        order = np.argsort(self.users, kind="stable")
        bounds = np.searchsorted(self.users[order], np.arange(self.n + 1))
        return [
            np.sort(self.items[order[lo:hi]])
            for lo, hi in zip(bounds[:-1], bounds[1:])
        ]

    def describe(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "source": self.source,
            "sha256": self.checksum,
            "users": self.n,
            "items": self.m,
            "ratings": len(self),
            "density": self.density,
            "scale": list(self.scale),
            "columns": self.columns,
            **self.extra,
        }


def file_checksum(path: Path) -> str:
    digest = hashlib.sha256()
    with path.open("rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def build_table(
    entries: Iterable[RatingEntry],
    name: str,
    scale: tuple[float, float],
    max_users: int | None = None,
    max_items: int | None = None,
    selection: str = "top",
) -> RatingsTable:
    """Deduplicate, subset and index rating entries.

    A repeated ``(user, item)`` pair keeps its last rating, placed at the
    position of that last occurrence. ``selection="top"`` keeps the most
    rated users/items; ``"first"`` keeps users in order of appearance.
    """

    low, high = scale
    latest: dict[tuple[str, str], float] = {}
    for entry in entries:
        if not low <= entry.rating <= high:
            raise ParseError(
                f"rating {entry.rating} outside [{low}, {high}]", entry.lineno
            )
        key = (entry.user, entry.item)
        latest.pop(key, None)
        latest[key] = entry.rating

    triples = list(latest.items())
    if max_users is not None:
        keep_users = _select(
            (u for (u, _), _ in triples), max_users, selection
        )
        triples = [t for t in triples if t[0][0] in keep_users]
    if max_items is not None:
        keep_items = _select((i for (_, i), _ in triples), max_items, "top")
        triples = [t for t in triples if t[0][1] in keep_items]
    if not triples:
        raise EmptyTable(f"{name}: no ratings left after filtering")

    user_index: dict[str, int] = {}
    item_index: dict[str, int] = {}
    users = np.empty(len(triples), dtype=np.int64)
    items = np.empty(len(triples), dtype=np.int64)
    ratings = np.empty(len(triples))
    for row, ((user, item), rating) in enumerate(triples):
        users[row] = user_index.setdefault(user, len(user_index))
        items[row] = item_index.setdefault(item, len(item_index))
        ratings[row] = rating

    return RatingsTable(
        name=name,
        user_ids=list(user_index),
        item_ids=list(item_index),
        users=users,
        items=items,
        ratings=ratings,
        scale=scale,
    )


def _select(keys: Iterable[str], limit: int, selection: str) -> set[str]:
    if selection == "first":
        ordered = list(dict.fromkeys(keys))
        return set(ordered[:limit])
    return {key for key, _ in Counter(keys).most_common(limit)}


def _read_lines(path: Path, encoding: str) -> Iterator[tuple[int, str]]:
    with path.open("r", encoding=encoding, newline="") as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.rstrip("\r\n")
            if line.strip():
                yield lineno, line


def _guarded(
    rows: Iterator[tuple[int, Any]],
    parse: Callable[[int, Any], Iterable[RatingEntry]],
    strict: bool,
    scale: tuple[float, float],
) -> Iterator[RatingEntry]:
    """Parse ``rows`` line by line; a bad line is fatal only when strict.

    A line contributes all of its entries or none of them.
    """

    low, high = scale
    for lineno, row in rows:
        try:
            entries = list(parse(lineno, row))
            for entry in entries:
                if not low <= entry.rating <= high:
                    raise ParseError(
                        f"rating {entry.rating} outside [{low}, {high}]",
                        lineno,
                    )
        except ParseError as exc:
            if strict:
                raise
            LOGGER.warning("Skipping %s", exc)
            continue
        except ValueError as exc:
            if strict:
                raise ParseError(str(exc), lineno) from exc
            LOGGER.warning("Skipping line %d: %s", lineno, exc)
            continue
        yield from entries


def ingest_movielens(
    path: Path,
    max_users: int | None = None,
    max_items: int | None = None,
    strict: bool = True,
) -> RatingsTable:
    """MovieLens ``u.data``: ``user<TAB>item<TAB>rating<TAB>timestamp``."""

    def parse(lineno: int, line: str) -> Iterable[RatingEntry]:
        fields = line.split("\t")
        if len(fields) != 4:
            raise ParseError(
                f"expected 4 tab-separated fields, got {len(fields)}", lineno
            )
        user, item, rating, _timestamp = fields
        yield RatingEntry(user.strip(), item.strip(), float(rating), lineno)

    scale = (1.0, 5.0)
    entries = _guarded(_read_lines(path, "utf-8"), parse, strict, scale)
    table = build_table(entries, "movielens", scale, max_users, max_items)
    return _stamp(table, path)


def ingest_bookcrossing(
    path: Path,
    include_implicit: bool = False,
    max_users: int | None = 2000,
    max_items: int | None = 2000,
    strict: bool = True,
) -> RatingsTable:
    """Book-Crossing ratings: ``"User-ID";"ISBN";"Book-Rating"`` with header.

    Rating 0 marks implicit feedback and is dropped unless
    ``include_implicit`` is set. Read as latin-1.
    """

    def parse(lineno: int, fields: list[str]) -> Iterable[RatingEntry]:
        if len(fields) != 3:
            raise ParseError(
                f"expected 3 ';'-separated fields, got {len(fields)}", lineno
            )
        user, isbn, raw = (value.strip() for value in fields)
        rating = float(raw)
        if rating == 0 and not include_implicit:
            return
        yield RatingEntry(user, isbn, rating, lineno)

    def rows() -> Iterator[tuple[int, list[str]]]:
        with path.open("r", encoding="latin-1", newline="") as handle:
            reader = csv.reader(handle, delimiter=";", quotechar='"')
            try:
                next(reader, None)
                for fields in reader:
                    if fields:
                        yield reader.line_num, fields
            except csv.Error as exc:
                raise ParseError(str(exc), reader.line_num) from exc

    scale = (0.0, 10.0) if include_implicit else (1.0, 10.0)
    table = build_table(
        _guarded(rows(), parse, strict, scale),
        "bookcrossing",
        scale,
        max_users,
        max_items,
    )
    return _stamp(table, path)


def ingest_jester(
    path: Path,
    max_users: int | None = 5000,
    max_items: int | None = None,
    strict: bool = True,
) -> RatingsTable:
    """Jester matrix: rated-count column, then one rating per joke.

    ``99`` marks an unrated joke. Users are numbered by line and the first
    ``max_users`` users with at least one rating are kept.
    """

    columns: set[int] = set()

    def parse(lineno: int, line: str) -> Iterable[RatingEntry]:
        fields = [value.strip() for value in line.split(",")]
        if len(fields) < 2:
            raise ParseError("expected a count column and ratings", lineno)
        values = [float(value) for value in fields[1:]]
        columns.add(len(values))
        for joke, rating in enumerate(values, start=1):
            if rating == JESTER_MISSING:
                continue
            yield RatingEntry(str(lineno), str(joke), rating, lineno)

    scale = (-10.0, 10.0)
    table = build_table(
        _guarded(_read_lines(path, "utf-8"), parse, strict, scale),
        "jester",
        scale,
        max_users,
        max_items,
        selection="first",
    )
    table.columns = max(columns) if columns else None
    if len(columns) > 1:
        LOGGER.warning("Jester rows have uneven widths: %s", sorted(columns))
    return _stamp(table, path)


INGESTERS: dict[str, Callable[..., RatingsTable]] = {
    "movielens": ingest_movielens,
    "bookcrossing": ingest_bookcrossing,
    "jester": ingest_jester,
}


def detect_format(path: Path) -> str:
    name = path.name.lower()
    if name == "u.data" or "movielens" in name or name.startswith("ml-"):
        return "movielens"
    if "bx-book-ratings" in name or "bookcrossing" in name:
        return "bookcrossing"
    if "jester" in name:
        return "jester"
    raise ParseError(f"cannot infer dataset format from '{path.name}'")


def ingest(path: Path, fmt: str | None = None, **options: Any) -> RatingsTable:
    """Read ``path`` with the ingester for ``fmt`` (guessed when omitted)."""

    if not path.is_file():
        raise IngestionError(f"dataset file not found: {path}")
    name = fmt or detect_format(path)
    if name not in INGESTERS:
        raise IngestionError(
            f"Unknown dataset format '{name}'. "
            f"Available: {', '.join(sorted(INGESTERS))}"
        )
    table = INGESTERS[name](path, **options)
    LOGGER.info(
        "%s: %d users x %d items, %d ratings (density %.4f)",
        table.name,
        table.n,
        table.m,
        len(table),
        table.density,
    )
    return table


def _stamp(table: RatingsTable, path: Path) -> RatingsTable:
    table.source = str(path)
    table.checksum = file_checksum(path)
    return table
