"""Exhaustive exact solver for tiny instances.

Ground truth for the evolutionary solver: enumerates every ordered
partition of the slabs into units, applies the length and width-run
bounds, discretizes the idle vector on a grid, and keeps the
non-dominated objective vectors.  Everything here is written for
clarity over speed and is deliberately independent of the engine's
vectorized evaluation path.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import accumulate

from .instance import ProblemInstance, instance_digest
from .tariff import CostMode

MAX_SLABS = 8
MAX_UNITS = 2

_EPS = 1e-9


@dataclass(frozen=True)
class FrontPoint:
    power_cost_cny: float
    jump_penalty: float
    units: tuple[tuple[int, ...], ...]
    idle: tuple[float, ...]

    def as_tuple(self) -> tuple[float, float]:
        return (self.power_cost_cny, self.jump_penalty)


@dataclass(frozen=True)
class ExactFront:
    points: tuple[FrontPoint, ...]
    instance_sha256: str
    idle_grid_h: float


def _feasible_batches(instance: ProblemInstance):
    """Yield every ordered partition of the slabs into valid units.

    Units are built left to right; a unit may only be closed once its
    length reaches the lower bound, and branches that cannot possibly
    fill the remaining units are cut early.
    """
    slabs = sorted(instance.slabs, key=lambda s: s.id)
    lo = instance.min_unit_length_km
    hi = instance.max_unit_length_km
    run_cap = instance.max_same_width_run_km
    m = instance.unit_count
    total = sum(s.length_km for s in slabs)

    units: list[list[int]] = [[] for _ in range(m)]

    def rec(k, remaining, remaining_len, cur_len, last_width, cur_run):
        # remaining units after this one still need at least lo each,
        # and even stuffed to hi they must be able to absorb the rest
        units_left = m - k - 1
        if remaining_len + cur_len < units_left * lo + lo - _EPS:
            return
        if remaining_len > units_left * hi + (hi - cur_len) + _EPS:
            return
        if cur_len >= lo - _EPS:
            if k == m - 1:
                if not remaining:
                    yield tuple(tuple(u) for u in units)
            else:
                rem_total = remaining_len
                units[k + 1] = []
                yield from rec(k + 1, remaining, rem_total, 0.0, None, 0.0)
        for i, slab in enumerate(slabs):
            if not remaining & (1 << i):
                continue
            new_len = cur_len + slab.length_km
            if new_len > hi + _EPS:
                continue
            new_run = cur_run + slab.length_km if slab.width_mm == last_width else slab.length_km
            if new_run > run_cap + _EPS:
                continue
            units[k].append(slab.id)
            yield from rec(
                k,
                remaining & ~(1 << i),
                remaining_len - slab.length_km,
                new_len,
                slab.width_mm,
                new_run,
            )
            units[k].pop()

    units[0] = []
    yield from rec(0, (1 << len(slabs)) - 1, total, 0.0, None, 0.0)


def _sequence_cost(instance: ProblemInstance, seq: tuple[int, ...], start: float) -> float:
    """Electricity cost of rolling ``seq`` back to back from ``start``."""
    cost = 0.0
    clock = start
    for sid in seq:
        slab = instance.slab(sid)
        cost += instance.tariff.interval_cost(clock, clock + slab.time_h, slab.energy_mwh)
        clock += slab.time_h
    return cost


def _sequence_penalty(instance: ProblemInstance, seq: tuple[int, ...]) -> float:
    return sum(instance.penalty_between(a, b) for a, b in zip(seq, seq[1:]))


def exact_front(instance: ProblemInstance, idle_grid_h: float = 0.25) -> ExactFront:
    """Complete non-dominated set over grid-discretized idle vectors.

    Refuses instances beyond 8 slabs or 2 units; the search space grows
    factorially and larger cases belong to the evolutionary solver.
    """
    n = len(instance.slabs)
    m = instance.unit_count
    if n > MAX_SLABS or m > MAX_UNITS:
        raise ValueError(
            f"exhaustive search is limited to {MAX_SLABS} slabs and {MAX_UNITS} units, "
            f"got {n} slabs and {m} units"
        )
    if idle_grid_h <= 0:
        raise ValueError("idle_grid_h must be positive")

    steps = int((instance.idle_budget_h + _EPS) / idle_grid_h)
    candidates: list[FrontPoint] = []

    # every ordering of one unit is paired with every ordering of the
    # other, so each sequence's cost curve is recomputed factorially
    # often; cache the curves (unit 2's start offset is fixed by its own
    # membership, since the complement set determines unit 1's duration)
    total_time = sum(s.time_h for s in instance.slabs)
    lead_cache: dict[tuple[int, ...], list[float]] = {}
    tail_cache: dict[tuple[int, ...], list[float]] = {}

    def lead_costs(seq: tuple[int, ...]) -> list[float]:
        curve = lead_cache.get(seq)
        if curve is None:
            curve = [_sequence_cost(instance, seq, a * idle_grid_h) for a in range(steps + 1)]
            lead_cache[seq] = curve
        return curve

    def tail_costs(seq: tuple[int, ...]) -> list[float]:
        curve = tail_cache.get(seq)
        if curve is None:
            p1 = total_time - sum(instance.slab(sid).time_h for sid in seq)
            curve = [_sequence_cost(instance, seq, p1 + b * idle_grid_h) for b in range(steps + 1)]
            tail_cache[seq] = curve
        return curve

    for units in _feasible_batches(instance):
        penalty = sum(_sequence_penalty(instance, seq) for seq in units)
        if m == 1:
            costs = lead_costs(units[0])
            a_best = min(range(steps + 1), key=costs.__getitem__)
            best = costs[a_best]
            idle = (a_best * idle_grid_h,)
        else:
            # v1 = a*grid, v1 + v2 = b*grid: unit 2 cost depends on b alone,
            # so the cheapest start of unit 1 is a running prefix minimum
            cost1 = lead_costs(units[0])
            cost2 = tail_costs(units[1])
            pref = list(accumulate(cost1, min))
            pref_arg = [0] * (steps + 1)
            for a in range(1, steps + 1):
                pref_arg[a] = a if cost1[a] < cost1[pref_arg[a - 1]] else pref_arg[a - 1]
            b_best = min(range(steps + 1), key=lambda b: pref[b] + cost2[b])
            a_best = pref_arg[b_best]
            best = pref[b_best] + cost2[b_best]
            idle = (a_best * idle_grid_h, (b_best - a_best) * idle_grid_h)
        candidates.append(FrontPoint(best, penalty, units, idle))

    front: list[FrontPoint] = []
    for cand in candidates:
        dominated = False
        for kept in front:
            if (
                kept.power_cost_cny <= cand.power_cost_cny
                and kept.jump_penalty <= cand.jump_penalty
            ):
                dominated = True
                break
        if dominated:
            continue
        front = [
            kept
            for kept in front
            if not (
                cand.power_cost_cny <= kept.power_cost_cny
                and cand.jump_penalty <= kept.jump_penalty
            )
        ]
        front.append(cand)

    front.sort(key=lambda p: (p.power_cost_cny, p.jump_penalty))
    return ExactFront(tuple(front), instance_digest(instance), idle_grid_h)
