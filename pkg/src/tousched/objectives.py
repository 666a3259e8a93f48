"""Objective evaluation for batch schedules.

Two objectives are minimised jointly: the electricity bill of the rolling
campaign and the accumulated changeover penalty between adjacent slabs
inside each unit.  Infeasible chromosomes are not repaired here; they get
a large sentinel value on both axes so dominance-based selection discards
them whenever a feasible alternative exists.
"""

from __future__ import annotations

from dataclasses import dataclass

from .encoding import BatchSchedule, Chromosome, TimedSchedule, decode, timing
from .instance import ProblemInstance
from .tariff import CostMode

# sentinel for infeasible schedules, far above any attainable cost
BIG_M = 1.0e12

_EPS = 1e-9


@dataclass(frozen=True)
class ObjectiveVector:
    power_cost_cny: float
    jump_penalty: float
    feasible: bool

    def as_tuple(self) -> tuple[float, float]:
        return (self.power_cost_cny, self.jump_penalty)


@dataclass(frozen=True)
class Violation:
    code: str
    detail: str

    def __str__(self) -> str:
        return f"{self.code}: {self.detail}"


def eval_power_cost(
    timed: TimedSchedule,
    instance: ProblemInstance,
    mode: CostMode = CostMode.PROPORTIONAL,
) -> float:
    """Total electricity cost in CNY over every slab's processing interval."""
    tariff = instance.tariff
    total = 0.0
    for unit in timed.units:
        for sid in unit:
            slab = instance.slab(sid)
            start = timed.slab_starts[sid]
            total += tariff.interval_cost(start, start + slab.time_h, slab.energy_mwh, mode)
    return total


def eval_penalty(batch: BatchSchedule, instance: ProblemInstance) -> float:
    """Sum of changeover penalties between adjacent slabs within each unit."""
    total = 0.0
    for unit in batch.units:
        for a, b in zip(unit, unit[1:]):
            total += instance.penalty_between(a, b)
    return total


def check_constraints(
    units: tuple[tuple[int, ...], ...],
    idle: tuple[float, ...],
    instance: ProblemInstance,
) -> list[Violation]:
    """Independently audit a schedule against every model constraint.

    This intentionally re-derives unit lengths and width runs from scratch
    instead of trusting decoder bookkeeping, so it can vet schedules from
    any source (decoder output, hand-written files, external tools).
    """
    out: list[Violation] = []
    known = {s.id for s in instance.slabs}
    seen: dict[int, int] = {}
    for k, unit in enumerate(units):
        for sid in unit:
            if sid in seen:
                out.append(Violation("slab-duplicate", f"slab {sid} appears in units {seen[sid]} and {k + 1}"))
            seen[sid] = k + 1
    missing = sorted(sid for sid in known if sid not in seen)
    if missing:
        out.append(Violation("slab-missing", f"slabs not scheduled: {missing}"))
    extra = sorted(sid for sid in seen if sid not in known)
    if extra:
        out.append(Violation("slab-unknown", f"slabs not in the instance: {extra}"))

    for k, unit in enumerate(units):
        slabs = [instance.slab(sid) for sid in unit if sid in known]
        length = sum(s.length_km for s in slabs)
        if length < instance.min_unit_length_km - _EPS:
            out.append(
                Violation(
                    "unit-length-low",
                    f"unit {k + 1} rolls {length:.3f} km, below the {instance.min_unit_length_km} km minimum",
                )
            )
        if length > instance.max_unit_length_km + _EPS:
            out.append(
                Violation(
                    "unit-length-high",
                    f"unit {k + 1} rolls {length:.3f} km, above the {instance.max_unit_length_km} km maximum",
                )
            )
        run = 0.0
        last_width = None
        for slab in slabs:
            run = run + slab.length_km if slab.width_mm == last_width else slab.length_km
            last_width = slab.width_mm
            if run > instance.max_same_width_run_km + _EPS:
                out.append(
                    Violation(
                        "width-run",
                        f"unit {k + 1} rolls {run:.3f} km of width {slab.width_mm} mm in a row, "
                        f"above the {instance.max_same_width_run_km} km cap",
                    )
                )
                break

    if len(idle) != len(units):
        out.append(Violation("idle-shape", f"expected {len(units)} idle entries, got {len(idle)}"))
    for k, v in enumerate(idle):
        if v < -_EPS:
            out.append(Violation("idle-negative", f"idle before unit {k + 1} is {v}"))
    if sum(idle) > instance.idle_budget_h + 1e-6:
        out.append(
            Violation(
                "idle-budget",
                f"total idle {sum(idle):.4f} h exceeds the {instance.idle_budget_h:.4f} h slack",
            )
        )
    return out


def evaluate_chromosome(
    chromosome: Chromosome,
    instance: ProblemInstance,
    mode: CostMode = CostMode.PROPORTIONAL,
) -> tuple[ObjectiveVector, BatchSchedule, TimedSchedule | None]:
    """Decode, time, and score one chromosome.

    The idle vector is taken as-is; callers that want the price-driven idle
    adjustment applied must do so before evaluation so that the stored genes
    and the reported objectives always describe the same schedule.
    """
    batch = decode(chromosome.perm, instance)
    if not batch.feasible:
        return ObjectiveVector(BIG_M, BIG_M, False), batch, None
    timed = timing(batch, chromosome.idle, instance)
    cost = eval_power_cost(timed, instance, mode)
    penalty = eval_penalty(batch, instance)
    return ObjectiveVector(cost, penalty, True), batch, timed
