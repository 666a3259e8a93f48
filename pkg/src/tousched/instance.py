"""Problem instances: the slab pool, batching limits and penalty tables.

An instance couples the physical data (slabs with width, gauge, hardness,
length, processing time and energy demand) with the batching rules (number
of rolling units, per-unit length window, same-width run cap), the tariff
and the adjacency penalty tables.  Penalties are instance data, not code:
each attribute jump is scored by a step table carried in the instance file.
"""

from __future__ import annotations

import hashlib
import json
from bisect import bisect_left
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .tariff import TouPeriod, TouTariff

_EPS = 1e-9


class InstanceFormatError(ValueError):
    """The instance file is malformed or violates a structural rule."""


class InfeasibleInstanceError(ValueError):
    """The instance admits no schedule at all (load-time check)."""


@dataclass(frozen=True)
class Slab:
    """One slab: geometry, rolling attributes and resource demands."""

    id: int
    width_mm: float
    gauge_mm: float
    hardness: int
    length_km: float
    time_h: float
    energy_mwh: float

    def __post_init__(self) -> None:
        if self.id < 1:
            raise InstanceFormatError(f"slab id must be >= 1, got {self.id}")
        for name in ("width_mm", "gauge_mm", "length_km", "time_h", "energy_mwh"):
            value = getattr(self, name)
            if not value > 0:
                raise InstanceFormatError(f"slab {self.id}: {name} must be positive, got {value}")
        if self.hardness < 0:
            raise InstanceFormatError(f"slab {self.id}: hardness grade must be >= 0")


@dataclass(frozen=True)
class StepTable:
    """Monotone step function scoring an attribute jump.

    ``steps`` is a sequence of (bound, score) pairs with strictly increasing
    bounds.  A jump is scored by the first entry whose bound is >= the jump;
    a jump beyond the last bound scores ``overflow``.  A zero jump always
    scores zero.
    """

    steps: tuple[tuple[float, float], ...]
    overflow: float

    def __post_init__(self) -> None:
        if not self.steps:
            raise InstanceFormatError("step table needs at least one entry")
        bounds = [b for b, _ in self.steps]
        if any(b <= 0 for b in bounds):
            raise InstanceFormatError("step bounds must be positive")
        if any(b2 <= b1 for b1, b2 in zip(bounds, bounds[1:])):
            raise InstanceFormatError("step bounds must be strictly increasing")
        if any(s < 0 for _, s in self.steps) or self.overflow < 0:
            raise InstanceFormatError("penalty scores must be >= 0")
        object.__setattr__(self, "_bounds", tuple(bounds))
        object.__setattr__(self, "_scores", tuple(s for _, s in self.steps))

    def lookup(self, jump: float) -> float:
        """Score for an absolute jump of ``jump``."""
        if jump < 0:
            raise ValueError(f"jump must be >= 0, got {jump}")
        if jump == 0:
            return 0.0
        i = bisect_left(self._bounds, jump)
        if i == len(self._bounds):
            return self.overflow
        return self._scores[i]


@dataclass(frozen=True)
class PenaltyModel:
    """Adjacency penalty tables for width, gauge and hardness jumps."""

    width_mm: StepTable
    gauge_mm: StepTable
    hardness: StepTable

    def penalty_between(self, a: Slab, b: Slab) -> float:
        """Total penalty when ``b`` directly follows ``a`` in a rolling unit."""
        return (
            self.width_mm.lookup(abs(a.width_mm - b.width_mm))
            + self.gauge_mm.lookup(abs(a.gauge_mm - b.gauge_mm))
            + self.hardness.lookup(abs(a.hardness - b.hardness))
        )


def default_penalty_model() -> PenaltyModel:
    """Step tables of a typical mill: small jumps cheap, large jumps punishing."""
    return PenaltyModel(
        width_mm=StepTable(((20.0, 1.0), (40.0, 3.0), (80.0, 6.0), (150.0, 10.0), (250.0, 16.0)), 25.0),
        gauge_mm=StepTable(((0.4, 1.0), (1.0, 3.0), (2.0, 6.0), (4.0, 10.0)), 18.0),
        hardness=StepTable(((1.0, 2.0), (2.0, 5.0), (4.0, 9.0)), 15.0),
    )


@dataclass(frozen=True)
class ProblemInstance:
    """A full scheduling problem over one tariff horizon."""

    slabs: tuple[Slab, ...]
    unit_count: int
    min_unit_length_km: float
    max_unit_length_km: float
    max_same_width_run_km: float
    horizon_h: float
    tariff: TouTariff
    penalties: PenaltyModel

    def __post_init__(self) -> None:
        if not self.slabs:
            raise InstanceFormatError("instance needs at least one slab")
        ids = [s.id for s in self.slabs]
        if len(set(ids)) != len(ids):
            dupes = sorted({i for i in ids if ids.count(i) > 1})
            raise InstanceFormatError(f"duplicate slab ids: {dupes}")
        if self.unit_count < 1:
            raise InstanceFormatError(f"unit_count must be >= 1, got {self.unit_count}")
        if not 0 < self.min_unit_length_km <= self.max_unit_length_km:
            raise InstanceFormatError(
                f"need 0 < min_unit_length_km <= max_unit_length_km, got "
                f"[{self.min_unit_length_km}, {self.max_unit_length_km}]"
            )
        if self.max_same_width_run_km <= 0:
            raise InstanceFormatError("max_same_width_run_km must be positive")
        if abs(self.tariff.horizon_h - self.horizon_h) > _EPS:
            raise InstanceFormatError(
                f"tariff covers {self.tariff.horizon_h} h but horizon_h is {self.horizon_h} h"
            )
        total = self.total_time_h
        if total > self.horizon_h + _EPS:
            raise InfeasibleInstanceError(
                f"total processing time {total:.3f} h exceeds the {self.horizon_h} h horizon"
            )
        object.__setattr__(self, "_by_id", {s.id: s for s in self.slabs})

    @property
    def n_slabs(self) -> int:
        return len(self.slabs)

    @property
    def total_time_h(self) -> float:
        return sum(s.time_h for s in self.slabs)

    @property
    def idle_budget_h(self) -> float:
        """Idle time available for distribution: horizon minus total work."""
        return max(0.0, self.horizon_h - self.total_time_h)

    def slab(self, slab_id: int) -> Slab:
        try:
            return self._by_id[slab_id]
        except KeyError:
            raise KeyError(f"no slab with id {slab_id}") from None

    def penalty_between(self, a: int | Slab, b: int | Slab) -> float:
        """Adjacency penalty between two slabs, given as ids or objects."""
        sa = a if isinstance(a, Slab) else self.slab(a)
        sb = b if isinstance(b, Slab) else self.slab(b)
        return self.penalties.penalty_between(sa, sb)


def _step_table_to_dict(table: StepTable) -> dict[str, Any]:
    return {
        "steps": [[float(b), float(s)] for b, s in table.steps],
        "overflow": float(table.overflow),
    }


def _step_table_from_dict(data: Any, where: str) -> StepTable:
    try:
        steps = tuple((float(b), float(s)) for b, s in data["steps"])
        return StepTable(steps, float(data["overflow"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise InstanceFormatError(f"bad penalty table {where!r}: {exc}") from None


def serialize_instance(instance: ProblemInstance) -> dict[str, Any]:
    """Plain-dict form of an instance, ready for ``json.dump``."""
    # numeric fields are coerced to their declared types so that equal
    # instances serialize to identical JSON no matter how they were built
    return {
        "unit_count": int(instance.unit_count),
        "min_unit_length_km": float(instance.min_unit_length_km),
        "max_unit_length_km": float(instance.max_unit_length_km),
        "max_same_width_run_km": float(instance.max_same_width_run_km),
        "horizon_h": float(instance.horizon_h),
        "tariff": {
            "periods": [
                {
                    "start_h": float(p.start_h),
                    "duration_h": float(p.duration_h),
                    "price_cny_per_kwh": float(p.price_cny_per_kwh),
                    "label": p.label,
                }
                for p in instance.tariff.periods
            ]
        },
        "penalties": {
            "width_mm": _step_table_to_dict(instance.penalties.width_mm),
            "gauge_mm": _step_table_to_dict(instance.penalties.gauge_mm),
            "hardness": _step_table_to_dict(instance.penalties.hardness),
        },
        "slabs": [
            {
                "id": int(s.id),
                "width_mm": float(s.width_mm),
                "gauge_mm": float(s.gauge_mm),
                "hardness": int(s.hardness),
                "length_km": float(s.length_km),
                "time_h": float(s.time_h),
                "energy_mwh": float(s.energy_mwh),
            }
            for s in instance.slabs
        ],
    }


def instance_from_dict(data: Any) -> ProblemInstance:
    """Build and validate an instance from its plain-dict form."""
    if not isinstance(data, dict):
        raise InstanceFormatError("instance document must be a JSON object")
    missing = {
        "unit_count",
        "min_unit_length_km",
        "max_unit_length_km",
        "max_same_width_run_km",
        "horizon_h",
        "tariff",
        "penalties",
        "slabs",
    } - data.keys()
    if missing:
        raise InstanceFormatError(f"instance is missing fields: {sorted(missing)}")
    try:
        periods = tuple(
            TouPeriod(
                float(p["start_h"]),
                float(p["duration_h"]),
                float(p["price_cny_per_kwh"]),
                str(p["label"]),
            )
            for p in data["tariff"]["periods"]
        )
        tariff = TouTariff(periods, horizon_h=float(data["horizon_h"]))
    except InstanceFormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise InstanceFormatError(f"bad tariff: {exc}") from None
    pen = data["penalties"]
    if not isinstance(pen, dict) or {"width_mm", "gauge_mm", "hardness"} - pen.keys():
        raise InstanceFormatError("penalties must define width_mm, gauge_mm and hardness tables")
    penalties = PenaltyModel(
        width_mm=_step_table_from_dict(pen["width_mm"], "width_mm"),
        gauge_mm=_step_table_from_dict(pen["gauge_mm"], "gauge_mm"),
        hardness=_step_table_from_dict(pen["hardness"], "hardness"),
    )
    try:
        slabs = tuple(
            Slab(
                id=int(s["id"]),
                width_mm=float(s["width_mm"]),
                gauge_mm=float(s["gauge_mm"]),
                hardness=int(s["hardness"]),
                length_km=float(s["length_km"]),
                time_h=float(s["time_h"]),
                energy_mwh=float(s["energy_mwh"]),
            )
            for s in data["slabs"]
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise InstanceFormatError(f"bad slab record: {exc}") from None
    return ProblemInstance(
        slabs=slabs,
        unit_count=int(data["unit_count"]),
        min_unit_length_km=float(data["min_unit_length_km"]),
        max_unit_length_km=float(data["max_unit_length_km"]),
        max_same_width_run_km=float(data["max_same_width_run_km"]),
        horizon_h=float(data["horizon_h"]),
        tariff=tariff,
        penalties=penalties,
    )


def parse_instance(path: str | Path) -> ProblemInstance:
    """Read and validate a JSON instance file."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InstanceFormatError(f"cannot read instance file: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"instance file is not valid JSON: {exc}") from None
    return instance_from_dict(data)


def write_instance(instance: ProblemInstance, path: str | Path) -> None:
    """Serialize an instance to a JSON file."""
    Path(path).write_text(
        json.dumps(serialize_instance(instance), indent=2) + "\n", encoding="utf-8"
    )


def instance_digest(instance: ProblemInstance) -> str:
    """SHA-256 over the canonical serialized form, for run manifests."""
    payload = json.dumps(serialize_instance(instance), sort_keys=True).encode("utf-8")
    return hashlib.sha256(payload).hexdigest()
