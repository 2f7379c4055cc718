"""Comparison policies: uniform random and epsilon-greedy factorization."""

from __future__ import annotations

import numpy as np

from ..linalg import FloatArray, ridge_solve
from ..state import FactorModel, Hyperparameters, InteractionLog
from .alb import ls_item_update
from .base import (
    Policy,
    Selection,
    check_candidates,
    greedy_argmax,
    register_policy,
)


def random_policy_step(
    candidates: np.ndarray, rng: np.random.Generator
) -> int:
    check_candidates(candidates)
    return int(candidates[rng.integers(len(candidates))])


def refit_user(
    model: FactorModel,
    log: InteractionLog,
    user: int,
    hp: Hyperparameters,
) -> FloatArray:
    """Ridge fit of the user row over its history, no exploration bonus."""

    steps = log.user_index_set(user)
    prior = model.A[user].copy() if hp.prior == "estimate" else None
    return ridge_solve(log.X[steps], log.ratings[steps], hp.lambda1, prior)


def egreedy_mf_step(
    model: FactorModel,
    log: InteractionLog,
    user: int,
    candidates: np.ndarray,
    epsilon: float,
    rng: np.random.Generator,
    hp: Hyperparameters | None = None,
) -> Selection:
    """Explore uniformly with probability ``epsilon``, else exploit.

    When ``hp`` is given and the user has history, the user row is first
    refit from the log; a user with no history keeps its current row.
    Exploitation takes the candidate maximizing ``A_i . B_j``. The
    exploration coin is only drawn for ``0 < epsilon < 1``.
    """

    check_candidates(candidates, model.m)
    if hp is not None and len(log.user_index_set(user)) > 0:
        model.A[user] = refit_user(model, log, user, hp)
    scores = model.B @ model.A[user]

    if epsilon >= 1.0 or (epsilon > 0.0 and rng.random() < epsilon):
        return Selection(
            item=random_policy_step(candidates, rng),
            scores=scores,
            explored=True,
        )
    return Selection(item=greedy_argmax(scores, candidates), scores=scores)


@register_policy("random")
class RandomPolicy(Policy):
    """Uniform choice over the candidates; ranks them at random."""

    def __init__(
        self,
        model: FactorModel,
        hp: Hyperparameters,
        rng: np.random.Generator,
        capacity: int = 1024,
    ):
        super().__init__(model, hp, rng, capacity)
        # rankings never advance the stream that picks items
        self.ranking_rng = np.random.Generator(rng.bit_generator.jumped())

    def select(self, user: int, candidates: np.ndarray) -> Selection:
        item = random_policy_step(candidates, self.rng)
        scores = self.ranking_rng.random(self.model.m)
        return Selection(item=item, scores=scores, explored=True)

    def observe(self, user: int, item: int, rating: float) -> None:
        self.log.record_step(
            user,
            item,
            rating,
            x_row=self.model.B[item],
            z_row=self.model.A[user],
        )


@register_policy("egreedy")
class EpsilonGreedyPolicy(Policy):
    """Alternating ridge refits with epsilon-greedy item choice."""

    tunables = ("lambda", "lambda1", "lambda2", "epsilon")

    def select(self, user: int, candidates: np.ndarray) -> Selection:
        return egreedy_mf_step(
            self.model,
            self.log,
            user,
            candidates,
            self.hp.epsilon,
            self.rng,
            hp=self.hp,
        )

    def observe(self, user: int, item: int, rating: float) -> None:
        model, log, hp = self.model, self.log, self.hp
        log.record_step(
            user, item, rating, x_row=model.B[item], z_row=model.A[user]
        )
        log.rewrite_user_rows(user, model.A[user])
        prior = model.B[item].copy() if hp.prior == "estimate" else None
        model.B[item] = ls_item_update(log, item, hp, prior=prior)
        log.rewrite_item_rows(item, model.B[item])
        model.A[user] = refit_user(model, log, user, hp)
        log.rewrite_user_rows(user, model.A[user])
