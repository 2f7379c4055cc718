"""Tests for seed stream derivation."""

import numpy as np
import pytest

from albench.seeding import STREAMS, SeedStreams, stream


def test_streams_are_reproducible():
    """Test one seed and name always give the same draws."""
    first = stream(7, "noise").random(5)
    second = stream(7, "noise").random(5)
    assert np.array_equal(first, second)


def test_streams_are_independent():
    """Test different names and seeds give different draws."""
    draws = {name: stream(0, name).random(4).tobytes() for name in STREAMS}
    assert len(set(draws.values())) == len(STREAMS)
    assert not np.array_equal(
        stream(0, "policy").random(4), stream(1, "policy").random(4)
    )


def test_seed_streams_bundle():
    """Test the bundle exposes every stream."""
    bundle = SeedStreams(3)
    for name in STREAMS:
        generator = getattr(bundle, name)
        assert isinstance(generator, np.random.Generator)
        assert generator.random() == stream(3, name).random()


def test_unknown_stream():
    """Test unknown stream names are rejected."""
    with pytest.raises(ValueError):
        stream(0, "weather")
