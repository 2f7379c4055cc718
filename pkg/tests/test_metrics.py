"""Tests for regret and NDCG metrics."""

import itertools
import math

import numpy as np
import pytest

from albench.environments import Environment, NoNoise
from albench.metrics import (
    average_cumulative,
    instantaneous_regret,
    ndcg_at_k,
    rank_candidates,
    step_ndcg,
)


def _env(Y, candidates=None):
    Y = np.asarray(Y, dtype=float)
    if candidates is None:
        candidates = [np.arange(Y.shape[1])] * Y.shape[0]
    return Environment(Y=Y, noise=NoNoise(), candidates=candidates)


def _brute_ndcg(order, relevance, k):
    dcg = sum(
        relevance[item] / math.log2(pos + 2)
        for pos, item in enumerate(order[:k])
    )
    ideal = sorted(relevance.values(), reverse=True)[:k]
    idcg = sum(rel / math.log2(pos + 2) for pos, rel in enumerate(ideal))
    return 1.0 if idcg == 0 else dcg / idcg


def test_ndcg_perfect_ranking():
    """Test the ideal ranking scores one."""
    relevance = {0: 3.0, 1: 2.0, 2: 1.0}
    assert ndcg_at_k([0, 1, 2], relevance, 5) == pytest.approx(1.0)


def test_ndcg_two_position_example():
    """Test a single relevant item placed second."""
    relevance = {10: 1.0, 11: 0.0, 12: 0.0}
    value = ndcg_at_k([11, 10, 12], relevance, 5)
    assert value == pytest.approx(math.log(2) / math.log(3))
    assert value == pytest.approx(0.6309, abs=1e-4)


def test_ndcg_equal_and_zero_relevance():
    """Test equal relevances and the IDCG = 0 convention."""
    equal = {0: 2.0, 1: 2.0, 2: 2.0}
    for order in itertools.permutations(equal):
        assert ndcg_at_k(list(order), equal, 2) == pytest.approx(1.0)
    assert ndcg_at_k([0, 1], {0: 0.0, 1: 0.0}, 5) == 1.0


def test_ndcg_scale_invariance():
    """Test scaling all relevances leaves NDCG unchanged."""
    rng = np.random.default_rng(0)
    relevance = {j: float(r) for j, r in enumerate(rng.uniform(size=8))}
    order = list(rng.permutation(8))
    scaled = {j: 7.5 * r for j, r in relevance.items()}
    assert abs(
        ndcg_at_k(order, relevance, 5) - ndcg_at_k(order, scaled, 5)
    ) <= 1e-12


def test_ndcg_rejects_bad_cutoff():
    """Test the cutoff must be positive."""
    with pytest.raises(ValueError):
        ndcg_at_k([0], {0: 1.0}, 0)


def test_rank_candidates_breaks_ties_by_index():
    """Test ranking by decreasing score with lower index first."""
    scores = np.array([0.0, 5.0, 1.0, 5.0, 2.0])
    ranked = rank_candidates(scores, np.array([4, 3, 1, 0]))
    assert list(ranked) == [1, 3, 4, 0]


def test_step_ndcg_single_candidate_and_perfect_scores():
    """Test trivial step NDCG values."""
    env = _env([[1.0, 4.0, 2.0]], candidates=[[1]])
    assert step_ndcg(np.zeros(3), env, 0, 5) == 1.0

    env = _env([[1.0, 4.0, 2.0, 3.0]])
    assert step_ndcg(env.Y[0], env, 0, 5) == pytest.approx(1.0)


def test_step_ndcg_reversed_scores_match_brute_force():
    """Test reversed scores against an explicit permutation oracle."""
    env = _env([[0.5, 3.0, 1.0, 2.5, 4.0]])
    scores = -env.Y[0]
    order = [0, 2, 3, 1, 4]
    relevance = {j: env.Y[0, j] for j in range(5)}
    assert step_ndcg(scores, env, 0, 5) == pytest.approx(
        _brute_ndcg(order, relevance, 5)
    )


def test_step_ndcg_is_rank_determined():
    """Test score vectors with the same ordering give the same NDCG."""
    env = _env([[0.5, 3.0, 1.0, 2.5, 4.0, 0.1]])
    scores = np.array([0.3, 0.1, 0.9, 0.4, 0.2, 0.0])
    monotone = np.exp(5 * scores) - 3
    assert step_ndcg(scores, env, 0, 3) == step_ndcg(monotone, env, 0, 3)


def test_step_ndcg_shifts_negative_ratings():
    """Test relevances are shifted by the global minimum when negative."""
    env = _env([[-4.0, -1.0, 2.0], [-10.0, 0.0, 1.0]])
    scores = np.array([0.0, 2.0, 1.0])
    relevance = {0: 6.0, 1: 9.0, 2: 12.0}
    assert step_ndcg(scores, env, 0, 2) == pytest.approx(
        _brute_ndcg([1, 2, 0], relevance, 2)
    )
    value = step_ndcg(scores, env, 1, 5)
    assert 0.0 <= value <= 1.0


def test_instantaneous_regret():
    """Test regret is best rating minus the observation."""
    env = _env([[1.0, 3.0, 2.0]])
    assert instantaneous_regret(env, 0, 3.0) == 0.0
    assert instantaneous_regret(env, 0, 1.0) == 2.0
    assert instantaneous_regret(env, 0, 3.5) == -0.5


def test_regret_translation_covariance():
    """Test shifting Y and observations leaves regret unchanged."""
    Y = np.array([[1.0, 3.0, 2.0]])
    base = _env(Y)
    shifted = _env(Y + 10.0)
    assert instantaneous_regret(base, 0, 2.25) == pytest.approx(
        instantaneous_regret(shifted, 0, 12.25)
    )


def test_cumulative_regret_matches_independent_accumulation():
    """Test prefix sums over 200 scripted steps."""
    rng = np.random.default_rng(1)
    env = _env(rng.normal(size=(4, 6)))
    regrets = []
    running, oracle = 0.0, []
    for _ in range(200):
        user = int(rng.integers(0, 4))
        observed = env.Y[user, int(rng.integers(0, 6))] + rng.normal()
        regret = instantaneous_regret(env, user, observed)
        regrets.append(regret)
        running += env.Y[user].max() - observed
        oracle.append(running)
    np.testing.assert_allclose(np.cumsum(regrets), oracle, rtol=1e-12)


def test_average_cumulative():
    """Test small series and the O(T^2) oracle."""
    np.testing.assert_allclose(average_cumulative([1.0, 0.0]), [1.0, 0.5])
    np.testing.assert_allclose(average_cumulative([0.7] * 5), [0.7] * 5)
    twice = average_cumulative(average_cumulative([0.4] * 6))
    np.testing.assert_allclose(twice, [0.4] * 6)

    rng = np.random.default_rng(2)
    series = rng.uniform(size=1000)
    naive = [sum(series[: t + 1]) / (t + 1) for t in range(1000)]
    np.testing.assert_allclose(average_cumulative(series), naive, rtol=1e-12)
    with pytest.raises(ValueError):
        average_cumulative([])
