"""Environments: synthetic generators and dataset replay."""

from .base import (
    BernoulliNoise,
    Environment,
    GaussianNoise,
    NoiseModel,
    NoNoise,
    UniformNoise,
)
from .replay import make_replay_env
from .synthetic import (
    make_bernoulli_env,
    make_gaussian_env,
    make_uniform_env,
    sample_simplex,
)

__all__ = [
    "BernoulliNoise",
    "Environment",
    "GaussianNoise",
    "NoiseModel",
    "NoNoise",
    "UniformNoise",
    "make_bernoulli_env",
    "make_gaussian_env",
    "make_replay_env",
    "make_uniform_env",
    "sample_simplex",
]
