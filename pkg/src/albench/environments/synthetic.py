"""Synthetic low-rank environments: Gaussian, uniform and Bernoulli."""

from __future__ import annotations

import numpy as np

from ..linalg import FloatArray
from .base import (
    BernoulliNoise,
    Environment,
    GaussianNoise,
    NoiseModel,
    UniformNoise,
)


def sample_simplex(
    rows: int, k: int, rng: np.random.Generator
) -> FloatArray:
    """Rows uniform on the probability simplex (normalized exponentials)."""

    draws = rng.exponential(size=(rows, k))
    return draws / draws.sum(axis=1, keepdims=True)


def _all_items(n: int, m: int) -> list[np.ndarray]:
    items = np.arange(m, dtype=np.int64)
    return [items] * n


def _low_rank_env(
    A: FloatArray,
    B: FloatArray,
    noise: NoiseModel,
    kind: str,
    arrival: str,
) -> Environment:
    n, k = A.shape
    m = B.shape[0]
    return Environment(
        Y=A @ B.T,
        noise=noise,
        candidates=_all_items(n, m),
        arrival=arrival,
        descriptor={"kind": kind, "rank": k},
        true_A=A,
        true_B=B,
    )


def make_gaussian_env(
    n: int,
    m: int,
    k: int,
    sigma1: float,
    sigma2: float,
    sigma: float,
    rng: np.random.Generator,
    arrival: str = "uniform",
) -> Environment:
    """``Y = A B^T`` with Gaussian factors and additive Gaussian noise."""

    if sigma1 <= 0 or sigma2 <= 0 or sigma < 0:
        raise ValueError("factor scales must be > 0 and noise >= 0")
    A = rng.normal(0.0, sigma1, size=(n, k))
    B = rng.normal(0.0, sigma2, size=(m, k))
    return _low_rank_env(A, B, GaussianNoise(sigma), "gaussian", arrival)


def _simplex_factors(
    n: int, m: int, k: int, rng: np.random.Generator
) -> tuple[FloatArray, FloatArray]:
    if k < 1:
        raise ValueError("rank must be >= 1")
    A = sample_simplex(n, k, rng)
    B = rng.uniform(0.0, 1.0, size=(m, k))
    return A, B


def make_uniform_env(
    n: int,
    m: int,
    k: int,
    width: float,
    rng: np.random.Generator,
    arrival: str = "uniform",
) -> Environment:
    """Simplex users, ``[0, 1]`` items; observation uniform of ``width``."""

    if width < 0:
        raise ValueError("width must be >= 0")
    A, B = _simplex_factors(n, m, k, rng)
    return _low_rank_env(A, B, UniformNoise(width), "uniform", arrival)


def make_bernoulli_env(
    n: int,
    m: int,
    k: int,
    rng: np.random.Generator,
    arrival: str = "uniform",
) -> Environment:
    """Same ``Y`` as the uniform environment; 0/1 observations."""

    A, B = _simplex_factors(n, m, k, rng)
    return _low_rank_env(A, B, BernoulliNoise(), "bernoulli", arrival)
