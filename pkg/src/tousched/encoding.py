"""Hybrid schedule encoding: a placement permutation plus an idle-time vector.

A candidate schedule is a pair ``(perm, idle)``.  ``perm`` is a permutation
of ``1 .. m*n`` where code ``c`` names the pairing of slab
``((c-1) mod n) + 1`` with rolling unit ``floor((c-1)/n) + 1``.  Scanning the
permutation left to right and applying each pairing greedily (first placement
of a slab wins, capacity and width-run limits permitting) turns the
permutation into an ordered batch plan.  ``idle`` holds one non-negative
waiting time per unit, inserted before the unit starts; the sum may not
exceed the idle budget of the instance.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .instance import ProblemInstance

_EPS = 1e-9


@dataclass(frozen=True)
class Chromosome:
    """One encoded schedule: placement permutation plus per-unit idle hours."""

    perm: tuple[int, ...]
    idle: tuple[float, ...]


@dataclass(frozen=True)
class BatchSchedule:
    """Decoded batch plan.

    ``units`` holds the slab ids of each rolling unit in rolling order.
    When ``feasible`` is false, ``unplaced`` lists slabs that found no seat
    and ``short_units`` the 1-based units that ended below the minimum
    length, so every failure is traceable.
    """

    units: tuple[tuple[int, ...], ...]
    unit_lengths: tuple[float, ...]
    feasible: bool
    unplaced: tuple[int, ...]
    short_units: tuple[int, ...]


@dataclass(frozen=True)
class TimedSchedule:
    """A batch plan placed on the clock."""

    units: tuple[tuple[int, ...], ...]
    unit_starts: tuple[float, ...]
    unit_ends: tuple[float, ...]
    slab_starts: dict[int, float]
    idle: tuple[float, ...]


class TimingError(ValueError):
    """The idle vector pushes the schedule past the horizon."""


def decode(perm: Sequence[int], instance: ProblemInstance) -> BatchSchedule:
    """Greedy left-to-right decoding of a placement permutation.

    Each code pairs one slab with one unit.  The slab is appended to that
    unit if it is still unplaced, the unit stays within the maximum length,
    and the same-width run (reset whenever the width changes) stays within
    the run cap.  The result is feasible when every slab found a seat and
    every unit reached the minimum length.
    """
    n = instance.n_slabs
    m = instance.unit_count
    if len(perm) != n * m:
        raise ValueError(f"permutation has length {len(perm)}, expected {n * m}")
    slabs = instance.slabs
    upper = instance.max_unit_length_km + _EPS
    run_cap = instance.max_same_width_run_km + _EPS

    placed = [False] * (n + 1)
    units: list[list[int]] = [[] for _ in range(m)]
    lengths = [0.0] * m
    run_lengths = [0.0] * m
    last_width: list[float | None] = [None] * m

    for code in perm:
        s = (code - 1) % n
        k = (code - 1) // n
        slab = slabs[s]
        if placed[slab.id]:
            continue
        if slab.width_mm == last_width[k]:
            candidate_run = run_lengths[k] + slab.length_km
        else:
            candidate_run = slab.length_km
        if lengths[k] + slab.length_km <= upper and candidate_run <= run_cap:
            units[k].append(slab.id)
            lengths[k] += slab.length_km
            run_lengths[k] = candidate_run
            last_width[k] = slab.width_mm
            placed[slab.id] = True

    unplaced = tuple(s.id for s in slabs if not placed[s.id])
    lower = instance.min_unit_length_km - _EPS
    short = tuple(k + 1 for k in range(m) if lengths[k] < lower)
    return BatchSchedule(
        units=tuple(tuple(u) for u in units),
        unit_lengths=tuple(lengths),
        feasible=not unplaced and not short,
        unplaced=unplaced,
        short_units=short,
    )


def unit_times(batch: BatchSchedule, instance: ProblemInstance) -> tuple[float, ...]:
    """Processing time of each unit (sum of its slab times)."""
    return tuple(sum(instance.slab(i).time_h for i in unit) for unit in batch.units)


def timing(
    batch: BatchSchedule,
    idle: Sequence[float],
    instance: ProblemInstance,
) -> TimedSchedule:
    """Place a batch plan on the clock given per-unit idle times.

    Unit k starts after all earlier units plus every idle block up to and
    including its own.  Slabs run back to back inside a unit.
    """
    m = instance.unit_count
    if len(idle) != m:
        raise ValueError(f"idle vector has length {len(idle)}, expected {m}")
    if any(v < -_EPS for v in idle):
        raise ValueError(f"idle times must be >= 0, got {tuple(idle)}")
    starts: list[float] = []
    ends: list[float] = []
    slab_starts: dict[int, float] = {}
    clock = 0.0
    for k, unit in enumerate(batch.units):
        clock += idle[k]
        starts.append(clock)
        for slab_id in unit:
            slab_starts[slab_id] = clock
            clock += instance.slab(slab_id).time_h
        ends.append(clock)
    if clock > instance.horizon_h + 1e-6:
        raise TimingError(
            f"schedule ends at {clock:.4f} h, past the {instance.horizon_h} h horizon"
        )
    return TimedSchedule(
        units=batch.units,
        unit_starts=tuple(starts),
        unit_ends=tuple(ends),
        slab_starts=slab_starts,
        idle=tuple(float(v) for v in idle),
    )


def allocate_idle(
    batch: BatchSchedule,
    instance: ProblemInstance,
    initial: Sequence[float],
) -> tuple[float, ...]:
    """Shift idle blocks so units drift out of expensive tariff periods.

    Periods are visited from most to least expensive.  For each unit, two
    moves are tried against the current period: if the unit starts in it but
    would finish under a cheaper price, the idle block after the unit is
    pulled in front of it (the unit slides later); if the unit finishes in it
    but started under a cheaper price, the idle block before the unit is
    pushed behind it (the unit slides earlier).  Each move transfers a whole
    idle block to its neighbour, so the idle total is preserved and no other
    unit moves.
    """
    m = instance.unit_count
    if len(initial) != m:
        raise ValueError(f"idle vector has length {len(initial)}, expected {m}")
    if any(v < -_EPS for v in initial):
        raise ValueError(f"idle times must be >= 0, got {tuple(initial)}")
    budget = instance.idle_budget_h
    if sum(initial) > budget + 1e-6:
        raise ValueError(f"idle sum {sum(initial):.4f} h exceeds the budget {budget:.4f} h")
    if not batch.feasible:
        raise ValueError("idle allocation needs a feasible batch plan")

    tariff = instance.tariff
    proc = unit_times(batch, instance)
    idle = [max(0.0, float(v)) for v in initial]

    def span(i: int) -> tuple[float, float]:
        before = sum(proc[:i]) + sum(idle[: i + 1])
        return before, before + proc[i]

    def tail_price(end: float) -> float:
        # production occupies [start, end), so the completion instant is
        # priced by the period it ran in, not the one starting there
        return tariff.periods[tariff.period_index_ending(end)].price_cny_per_kwh

    order = sorted(range(len(tariff.periods)), key=lambda j: (-tariff.periods[j].price_cny_per_kwh, j))
    for j in order:
        price = tariff.periods[j].price_cny_per_kwh
        for i in range(m):
            start, end = span(i)
            if (
                i + 1 < m
                and idle[i + 1] > 0
                and tariff.period_index_at(start) == j
                and tail_price(end) < price
            ):
                # pull the trailing idle block in front: the unit slides later
                idle[i] += idle[i + 1]
                idle[i + 1] = 0.0
                start, end = span(i)
            if (
                i + 1 < m
                and idle[i] > 0
                and tariff.period_index_ending(end) == j
                and tariff.price_at(start) < price
            ):
                # push the leading idle block behind: the unit slides earlier
                idle[i + 1] += idle[i]
                idle[i] = 0.0
    return tuple(idle)


def random_chromosome(instance: ProblemInstance, rng: np.random.Generator) -> Chromosome:
    """Uniform random permutation plus a uniform random idle split.

    The idle vector is drawn uniformly from the simplex of non-negative
    vectors whose sum stays within the idle budget (when the permutation
    decodes feasibly; otherwise it is all zeros).
    """
    n = instance.n_slabs
    m = instance.unit_count
    perm = tuple(int(c) for c in rng.permutation(n * m) + 1)
    idle: tuple[float, ...] = (0.0,) * m
    if decode(perm, instance).feasible:
        budget = instance.idle_budget_h
        if budget > 0:
            split = rng.dirichlet(np.ones(m + 1)) * budget
            idle = tuple(float(v) for v in split[:m])
    return Chromosome(perm=perm, idle=idle)
