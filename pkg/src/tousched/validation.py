"""Input validation helpers shared by the estimators and operators."""

from __future__ import annotations

from typing import Sequence

from .instance import ProblemInstance


def check_instance(x: object) -> ProblemInstance:
    if not isinstance(x, ProblemInstance):
        raise TypeError(f"expected a ProblemInstance, got {type(x).__name__}")
    return x


def check_permutation(perm: Sequence[int], size: int) -> None:
    """Require ``perm`` to be a permutation of 1..size."""
    if len(perm) != size:
        raise ValueError(f"permutation has length {len(perm)}, expected {size}")
    if sorted(perm) != list(range(1, size + 1)):
        raise ValueError(f"not a permutation of 1..{size}")


def check_probability(name: str, value: float) -> float:
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must be in [0, 1], got {value}")
    return float(value)


def check_positive_int(name: str, value: int, minimum: int = 1) -> int:
    if int(value) != value or value < minimum:
        raise ValueError(f"{name} must be an integer >= {minimum}, got {value}")
    return int(value)


def check_weights(weights: Sequence[float]) -> tuple[float, ...]:
    ws = tuple(float(w) for w in weights)
    if len(ws) < 2:
        raise ValueError(f"need at least two weights, got {len(ws)}")
    if any(w <= 0 for w in ws):
        raise ValueError(f"weights must be positive, got {ws}")
    return ws
