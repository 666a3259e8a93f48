"""Closeness-based ranking of Pareto-optimal schedules.

Both objectives are costs, so the ideal point takes each column's minimum
and the nadir each column's maximum.  Columns are first shifted by their
minimum and normalized by their column sum, which puts the two objectives
on a similar scale regardless of units, then weighted.  Relative closeness
C* = d_nadir / (d_nadir + d_ideal) uses city-block distances; under them
d_nadir + d_ideal is the same for every row, so C* decreases strictly
whenever either objective worsens and a dominated solution can never
outrank one that dominates it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator

from .validation import check_weights


class DegenerateFrontError(ValueError):
    """The front cannot be ranked (too small or without spread)."""


@dataclass(frozen=True)
class RankedSolution:
    solution_index: int
    closeness: float
    power_cost_cny: float
    jump_penalty: float


@dataclass(frozen=True)
class TopsisRanking:
    entries: tuple[RankedSolution, ...]
    weights: tuple[float, ...]

    @property
    def recommended(self) -> RankedSolution:
        return self.entries[0]


def topsis_closeness(matrix, weights, column_names=None) -> np.ndarray:
    """Relative closeness of each row; higher is better, both columns costs."""
    data = np.asarray(matrix, dtype=float)
    if data.ndim != 2:
        raise DegenerateFrontError("expected a 2-d matrix of objective values")
    rows, cols = data.shape
    w = np.asarray(weights, dtype=float)
    if w.shape != (cols,):
        raise DegenerateFrontError(f"need {cols} weights, got {w.size}")
    if column_names is None:
        column_names = tuple(f"column {j + 1}" for j in range(cols))
    if rows < 2:
        raise DegenerateFrontError("need at least 2 solutions to rank")

    shifted = data - data.min(axis=0)
    sums = shifted.sum(axis=0)
    if (sums == 0).all():
        raise DegenerateFrontError("nothing to rank: all solutions are identical")
    for j, total in enumerate(sums):
        if total == 0:
            raise DegenerateFrontError(f"{column_names[j]} is constant across the front")

    weighted = shifted / sums * w
    ideal = weighted.min(axis=0)
    nadir = weighted.max(axis=0)
    d_ideal = np.abs(weighted - ideal).sum(axis=1)
    d_nadir = np.abs(weighted - nadir).sum(axis=1)
    return d_nadir / (d_nadir + d_ideal)


def rank_front(front, weights=(0.4, 0.6)) -> TopsisRanking:
    """Rank (power cost, jump penalty) vectors, best first.

    ``front`` holds objective pairs or objects with an ``as_tuple`` method.
    Ties in closeness keep input order.
    """
    w = check_weights(weights)
    pairs = [p.as_tuple() if hasattr(p, "as_tuple") else (float(p[0]), float(p[1])) for p in front]
    closeness = topsis_closeness(pairs, w, column_names=("power cost", "jump penalty"))
    order = np.argsort(-closeness, kind="stable")
    entries = tuple(
        RankedSolution(int(i), float(closeness[i]), pairs[i][0], pairs[i][1]) for i in order
    )
    return TopsisRanking(entries, w)


class TopsisRanker(BaseEstimator):
    """Rank alternatives on cost-oriented criteria by relative closeness.

    Parameters
    ----------
    weights : positive importance weight per criterion column.

    Attributes
    ----------
    closeness_ : closeness of each input row, in input order.
    order_ : row indices sorted best first.
    ideal_, nadir_ : per-column best and worst of the weighted matrix.
    """

    def __init__(self, weights: tuple[float, ...] = (0.4, 0.6)):
        self.weights = weights

    def fit(self, X, y=None):
        w = check_weights(self.weights)
        data = np.asarray(X, dtype=float)
        if data.ndim != 2 or data.shape[1] != len(w):
            raise ValueError(f"expected a 2-d matrix with {len(w)} columns")
        self.closeness_ = topsis_closeness(data, w)
        self.order_ = np.argsort(-self.closeness_, kind="stable")
        shifted = data - data.min(axis=0)
        weighted = shifted / shifted.sum(axis=0) * np.asarray(w)
        self.ideal_ = weighted.min(axis=0)
        self.nadir_ = weighted.max(axis=0)
        return self
