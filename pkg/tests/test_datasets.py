"""Tests for rating dataset ingestion."""

import hashlib
import logging
import os
from pathlib import Path

import numpy as np
import pytest

from albench.datasets import (
    EmptyTable,
    IngestionError,
    ParseError,
    RatingEntry,
    build_table,
    detect_format,
    ingest,
    ingest_bookcrossing,
    ingest_jester,
    ingest_movielens,
)


def test_movielens_dedup_last_wins(movielens_file):
    """Test duplicate pairs keep their last rating."""
    table = ingest_movielens(movielens_file)
    assert len(table) == 6
    assert table.user_ids == ["186", "22", "196"]
    assert table.item_ids == ["302", "377", "242"]
    dense = table.dense()
    assert dense[2, 2] == 5.0
    assert dense[1, 1] == 1.0
    assert np.isnan(dense[1, 0])
    assert table.scale == (1.0, 5.0)
    pairs = list(zip(table.users.tolist(), table.items.tolist()))
    assert len(set(pairs)) == len(pairs)


def test_movielens_checksum_and_stats(movielens_file):
    """Test the SHA-256 and summary statistics."""
    table = ingest_movielens(movielens_file)
    digest = hashlib.sha256(movielens_file.read_bytes()).hexdigest()
    assert table.checksum == digest
    stats = table.describe()
    assert stats["users"] == 3
    assert stats["items"] == 3
    assert stats["ratings"] == 6
    assert stats["density"] == pytest.approx(6 / 9)
    assert stats["source"] == str(movielens_file)


def test_movielens_parse_error_line_number(tmp_path):
    """Test malformed lines fail with their line number."""
    data = tmp_path / "u.data"
    data.write_text("1\t2\t3\t4\n1\t2\n")
    with pytest.raises(ParseError) as excinfo:
        ingest_movielens(data)
    assert excinfo.value.lineno == 2
    assert "line 2" in str(excinfo.value)


def test_movielens_rating_outside_scale(tmp_path):
    """Test ratings outside 1-5 are rejected."""
    data = tmp_path / "u.data"
    data.write_text("1\t2\t3\t4\n1\t3\t9\t4\n")
    with pytest.raises(ParseError) as excinfo:
        ingest_movielens(data)
    assert excinfo.value.lineno == 2


def test_lenient_ingestion_skips_lines(tmp_path, caplog):
    """Test lenient mode logs and skips malformed lines."""
    data = tmp_path / "u.data"
    data.write_text("1\t2\t3\t4\ngarbage\n2\t2\tfour\t4\n2\t5\t1\t4\n")
    with caplog.at_level(logging.WARNING):
        table = ingest_movielens(data, strict=False)
    assert len(table) == 2
    assert "Skipping line 2" in caplog.text
    assert "Skipping line 3" in caplog.text


def test_lenient_ingestion_skips_out_of_scale_lines(tmp_path, caplog):
    """Test lenient mode skips a line whose rating is off the scale."""
    data = tmp_path / "u.data"
    data.write_text("1\t2\t3\t4\n1\t3\t7\t4\n2\t2\t5\t4\n")
    with caplog.at_level(logging.WARNING):
        table = ingest_movielens(data, strict=False)
    assert len(table) == 2
    assert sorted(table.ratings) == [3.0, 5.0]
    assert "Skipping line 2" in caplog.text


def test_lenient_jester_drops_whole_row(tmp_path, caplog):
    """Test an off-scale Jester rating drops every rating of its row."""
    data = tmp_path / "jester.csv"
    data.write_text("2,1.5,-3\n2,4.0,12.5\n")
    with caplog.at_level(logging.WARNING):
        table = ingest_jester(data, strict=False)
    assert len(table) == 2
    assert table.user_ids == ["1"]
    assert "Skipping line 2" in caplog.text


def test_bookcrossing_oversized_field(tmp_path):
    """Test a field over the csv size limit raises a ParseError."""
    data = tmp_path / "BX-Book-Ratings.csv"
    data.write_bytes(
        (
            '"User-ID";"ISBN";"Book-Rating"\n'
            '"276726";"0155061224";"5"\n'
            '"276729";"' + "x" * 140_000 + '";"3"\n'
        ).encode("latin-1")
    )
    with pytest.raises(ParseError) as excinfo:
        ingest_bookcrossing(data)
    assert excinfo.value.lineno == 3
    with pytest.raises(IngestionError):
        ingest_bookcrossing(data, strict=False)


def test_bookcrossing_drops_implicit_ratings(bookcrossing_file):
    """Test zero ratings are dropped and the header skipped."""
    table = ingest_bookcrossing(bookcrossing_file)
    assert len(table) == 6
    assert table.n == 5
    assert table.scale == (1.0, 10.0)
    assert "342310538\xe9" in table.item_ids
    assert np.all(table.ratings >= 1)


def test_bookcrossing_include_implicit(bookcrossing_file):
    """Test implicit ratings are kept on request."""
    table = ingest_bookcrossing(bookcrossing_file, include_implicit=True)
    assert len(table) == 8
    assert table.n == 7
    assert table.scale == (0.0, 10.0)
    assert 0.0 in table.ratings


def test_bookcrossing_subset_by_rating_count(bookcrossing_file):
    """Test the most active users are kept."""
    table = ingest_bookcrossing(bookcrossing_file, max_users=1)
    assert table.user_ids == ["276729"]
    assert len(table) == 2


def test_jester_missing_markers(jester_file):
    """Test 99 is dropped and empty users disappear."""
    table = ingest_jester(jester_file)
    assert table.user_ids == ["1", "3", "4"]
    assert len(table) == 9
    assert table.columns == 4
    assert table.scale == (-10.0, 10.0)
    assert 99.0 not in table.ratings
    assert table.describe()["columns"] == 4


def test_jester_first_users(jester_file):
    """Test the first users in file order are kept."""
    table = ingest_jester(jester_file, max_users=2)
    assert table.user_ids == ["1", "3"]
    assert len(table) == 7


def test_build_table_subsetting_and_empty():
    """Test item subsetting and filtering everything away."""
    entries = [
        RatingEntry("u1", "a", 1.0, 1),
        RatingEntry("u2", "a", 2.0, 2),
        RatingEntry("u2", "b", 3.0, 3),
    ]
    table = build_table(entries, "toy", (0.0, 5.0), max_items=1)
    assert table.item_ids == ["a"]
    assert len(table) == 2
    with pytest.raises(EmptyTable):
        build_table([], "toy", (0.0, 5.0))


def test_rated_items_match_triple_scan(movielens_file):
    """Test per-user rated items against a scan of the triples."""
    table = ingest_movielens(movielens_file)
    for user, items in enumerate(table.rated_items()):
        expected = sorted(
            int(i) for u, i in zip(table.users, table.items) if u == user
        )
        assert list(items) == expected


@pytest.mark.parametrize(
    "name,expected",
    [
        ("u.data", "movielens"),
        ("ml-100k.tsv", "movielens"),
        ("BX-Book-Ratings.csv", "bookcrossing"),
        ("jester-data-1.csv", "jester"),
    ],
)
def test_detect_format(name, expected):
    """Test format detection from file names."""
    assert detect_format(Path(name)) == expected


def test_detect_format_unknown():
    """Test unknown names raise an ingestion error."""
    with pytest.raises(IngestionError):
        detect_format(Path("ratings.bin"))


def test_ingest_dispatch(movielens_file, tmp_path):
    """Test dispatch, overrides and missing files."""
    assert len(ingest(movielens_file)) == 6
    renamed = tmp_path / "ratings.tsv"
    renamed.write_bytes(movielens_file.read_bytes())
    assert len(ingest(renamed, "movielens")) == 6
    with pytest.raises(IngestionError):
        ingest(tmp_path / "missing.data", "movielens")
    with pytest.raises(IngestionError):
        ingest(movielens_file, "netflix")


@pytest.mark.skipif(
    "ALBENCH_ML100K" not in os.environ,
    reason="set ALBENCH_ML100K to the MovieLens 100K u.data path",
)
def test_movielens_100k_whole():
    """Test the full MovieLens 100K file ingests to 100000 triples."""
    table = ingest_movielens(Path(os.environ["ALBENCH_ML100K"]))
    assert len(table) == 100_000
    assert (table.n, table.m) == (943, 1682)
    assert set(np.unique(table.ratings)) == {1.0, 2.0, 3.0, 4.0, 5.0}
