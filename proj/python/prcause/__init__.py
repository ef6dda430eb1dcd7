"""Probability-raising causes in Markov decision processes."""

from pathlib import Path

from ._core import (
    BudgetExceeded,
    InputError,
    Mdp,
    PreconditionError,
    canonical_cause,
    check_gpr,
    check_spr,
    optimal_cause,
    quality,
)

__all__ = [
    "BudgetExceeded",
    "InputError",
    "Mdp",
    "PreconditionError",
    "canonical_cause",
    "check_gpr",
    "check_spr",
    "load_model",
    "optimal_cause",
    "quality",
]


def load_model(path):
    return Mdp.parse(Path(path).read_text())
