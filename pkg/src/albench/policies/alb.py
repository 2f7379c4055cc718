"""Alternating Linear Bandits.

Each step runs an OFUL step for the arriving user (confidence ellipsoid
over the user's feature vector, joint optimistic choice of item and user
estimate) followed by a regularized least-squares refit of the played
item. Every quantity is derived from the interaction log at the time it
is needed, because refits rewrite historical snapshot rows.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from ..environments import Environment
from ..linalg import (
    FloatArray,
    SpdFactorization,
    inverse_weighted_norm,
    log_det,
    ridge_solve,
    spd_factor,
    spd_solve,
    weighted_norm,
)
from ..metrics import instantaneous_regret
from ..state import FactorModel, Hyperparameters, InteractionLog
from .base import (
    Policy,
    Selection,
    check_candidates,
    greedy_argmax,
    register_policy,
)

LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConfidenceEllipsoid:
    """``{q : ||q - center||_V <= radius}`` for one user at one step."""

    center: FloatArray
    gram: FloatArray
    factor: SpdFactorization
    radius: float

    def contains(self, q: FloatArray, rtol: float = 1e-9) -> bool:
        return weighted_norm(self.factor, q - self.center) <= self.radius * (
            1 + rtol
        )


@dataclass(frozen=True)
class OfulChoice:
    item: int
    estimate: FloatArray
    scores: FloatArray


@dataclass(frozen=True)
class AlbStepResult:
    item: int
    rating: float
    regret: float
    choice: OfulChoice


def confidence_radius(
    factor: SpdFactorization,
    lambda1: float,
    sigma: float,
    delta: float,
    s: float,
) -> float:
    """Radius ``c`` with the determinant ratio evaluated in log space."""

    k = factor.dimension
    log_ratio = 0.5 * log_det(factor) - 0.5 * k * math.log(lambda1)
    argument = max(log_ratio - math.log(delta), 0.0)
    return sigma * math.sqrt(2.0 * argument) + math.sqrt(lambda1) * s


def build_confidence(
    log: InteractionLog,
    user: int,
    hp: Hyperparameters,
    s: float | None = None,
    prior: FloatArray | None = None,
) -> ConfidenceEllipsoid:
    """Ellipsoid from the user's earlier steps ``{l < t : i_l = user}``.

    ``s`` overrides ``hp.s``; ``prior`` shifts the ridge center toward a
    given estimate instead of the origin.
    """

    steps = log.user_index_set(user)
    design = log.X[steps]
    targets = log.ratings[steps]

    gram = design.T @ design + hp.lambda1 * np.eye(log.k)
    factor = spd_factor(gram)
    rhs = design.T @ targets
    if prior is not None:
        rhs = rhs + hp.lambda1 * prior
    center = spd_solve(factor, rhs)

    radius = confidence_radius(
        factor,
        hp.lambda1,
        hp.sigma,
        hp.delta,
        hp.s if s is None else s,
    )
    return ConfidenceEllipsoid(
        center=center, gram=gram, factor=factor, radius=radius
    )


def oful_step(
    ellipsoid: ConfidenceEllipsoid,
    B: FloatArray,
    candidates: np.ndarray,
) -> OfulChoice:
    """Jointly optimistic (item, user estimate) over the ellipsoid.

    Scores are ``mu . B_j + c * ||V^{-1/2} B_j||`` for every item; the
    chosen item is the best candidate. A zero direction leaves the
    estimate at the center.
    """

    check_candidates(candidates, B.shape[0])
    widths = np.asarray(inverse_weighted_norm(ellipsoid.factor, B.T))
    scores = B @ ellipsoid.center + ellipsoid.radius * widths
    item = greedy_argmax(scores, candidates)

    width = float(widths[item])
    if width > 0.0:
        direction = spd_solve(ellipsoid.factor, B[item])
        estimate = ellipsoid.center + ellipsoid.radius * direction / width
    else:
        LOGGER.debug("zero direction for item %d; keeping center", item)
        estimate = ellipsoid.center.copy()
    return OfulChoice(item=item, estimate=estimate, scores=scores)


def ls_item_update(
    log: InteractionLog,
    item: int,
    hp: Hyperparameters,
    prior: FloatArray | None = None,
) -> FloatArray:
    """Ridge refit of ``item`` over ``{l <= t : j_l = item}``."""

    steps = log.item_index_set(item)
    return ridge_solve(log.Z[steps], log.ratings[steps], hp.lambda2, prior)


def choose(
    model: FactorModel,
    log: InteractionLog,
    user: int,
    hp: Hyperparameters,
    candidates: np.ndarray,
) -> OfulChoice:
    """OFUL step; writes the optimistic estimate into ``model.A``."""

    prior = model.A[user].copy() if hp.prior == "estimate" else None
    ellipsoid = build_confidence(
        log, user, hp, s=hp.norm_bound(model), prior=prior
    )
    choice = oful_step(ellipsoid, model.B, candidates)
    model.A[user] = choice.estimate
    return choice


def absorb(
    model: FactorModel,
    log: InteractionLog,
    user: int,
    item: int,
    rating: float,
    hp: Hyperparameters,
) -> None:
    """LS step: record the interaction, refit the item, rewrite history."""

    log.record_step(
        user, item, rating, x_row=model.B[item], z_row=model.A[user]
    )
    log.rewrite_user_rows(user, model.A[user])
    prior = model.B[item].copy() if hp.prior == "estimate" else None
    refit = ls_item_update(log, item, hp, prior=prior)
    model.B[item] = refit
    log.rewrite_item_rows(item, refit)


def alb_step(
    model: FactorModel,
    log: InteractionLog,
    user: int,
    hp: Hyperparameters,
    env: Environment,
    rng: np.random.Generator,
) -> AlbStepResult:
    """One full iteration against ``env``, drawing noise from ``rng``."""

    choice = choose(model, log, user, hp, env.candidate_set(user))
    rating = env.observe(user, choice.item, rng)
    absorb(model, log, user, choice.item, rating, hp)
    return AlbStepResult(
        item=choice.item,
        rating=rating,
        regret=instantaneous_regret(env, user, rating),
        choice=choice,
    )


@register_policy("alb")
class AlbPolicy(Policy):
    """Alternating Linear Bandits behind the common policy interface."""

    tunables = ("lambda", "lambda1", "lambda2", "sigma", "delta", "s")

    last_choice: OfulChoice | None = None

    def select(self, user: int, candidates: np.ndarray) -> Selection:
        choice = choose(self.model, self.log, user, self.hp, candidates)
        self.last_choice = choice
        return Selection(item=choice.item, scores=choice.scores)

    def observe(self, user: int, item: int, rating: float) -> None:
        absorb(self.model, self.log, user, item, rating, self.hp)
