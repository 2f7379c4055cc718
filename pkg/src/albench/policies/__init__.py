"""Policy registry."""

# Ensure built-in policies register themselves
from . import alb, baselines  # noqa: F401
from .base import (
    RESERVED_POLICIES,
    EmptyCandidateSet,
    Policy,
    Selection,
    get_policy,
    list_policies,
)

__all__ = [
    "RESERVED_POLICIES",
    "EmptyCandidateSet",
    "Policy",
    "Selection",
    "get_policy",
    "list_policies",
]
