"""Artifact emitters: CSV reports, run manifest, and an SVG timeline.

Floats are written with ``repr`` (shortest round-trip form), so a run
with a fixed seed produces byte-identical files on every machine.
"""

from __future__ import annotations

import csv
import json
from typing import Iterable

from .encoding import BatchSchedule, TimedSchedule
from .instance import ProblemInstance
from .moea import Individual
from .topsis import TopsisRanking

PARETO_FIELDS = ("f1_cny", "f2_penalty", "perm", "idle")
RANKING_FIELDS = ("rank", "closeness", "f1_cny", "f2_penalty", "solution_index")
SCHEDULE_FIELDS = (
    "unit",
    "slab_quantity",
    "rolling_length_km",
    "processing_time_h",
    "power_demand_mwh",
    "avg_load_mw",
    "idle_before_h",
    "start_h",
    "end_h",
)
HISTOGRAM_FIELDS = ("period", "start_h", "end_h", "price_cny_per_kwh", "energy_mwh", "avg_load_mw")


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_csv(path, fields, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(fields)
        for row in rows:
            writer.writerow([_fmt(row[f]) for f in fields])


def write_pareto_csv(path, front: Iterable[Individual]) -> None:
    entries = sorted(front, key=lambda i: (i.objectives.power_cost_cny, i.objectives.jump_penalty))
    rows = [
        {
            "f1_cny": ind.objectives.power_cost_cny,
            "f2_penalty": ind.objectives.jump_penalty,
            "perm": " ".join(str(c) for c in ind.chromosome.perm),
            "idle": " ".join(repr(v) for v in ind.chromosome.idle),
        }
        for ind in entries
    ]
    _write_csv(path, PARETO_FIELDS, rows)


def read_pareto_csv(path) -> list[dict]:
    """Rows as dicts with parsed objectives, perm, and idle."""
    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            out.append(
                {
                    "f1_cny": float(row["f1_cny"]),
                    "f2_penalty": float(row["f2_penalty"]),
                    "perm": tuple(int(c) for c in row["perm"].split()),
                    "idle": tuple(float(v) for v in row["idle"].split()),
                }
            )
    return out


def write_ranking_csv(path, ranking: TopsisRanking) -> None:
    rows = [
        {
            "rank": r + 1,
            "closeness": entry.closeness,
            "f1_cny": entry.power_cost_cny,
            "f2_penalty": entry.jump_penalty,
            "solution_index": entry.solution_index,
        }
        for r, entry in enumerate(ranking.entries)
    ]
    _write_csv(path, RANKING_FIELDS, rows)


def unit_rows(batch: BatchSchedule, timed: TimedSchedule, instance: ProblemInstance) -> list[dict]:
    """One summary row per rolling unit."""
    rows = []
    for k, unit in enumerate(batch.units):
        slabs = [instance.slab(sid) for sid in unit]
        time = sum(s.time_h for s in slabs)
        energy = sum(s.energy_mwh for s in slabs)
        rows.append(
            {
                "unit": k + 1,
                "slab_quantity": len(unit),
                "rolling_length_km": round(sum(s.length_km for s in slabs), 6),
                "processing_time_h": round(time, 6),
                "power_demand_mwh": round(energy, 6),
                "avg_load_mw": round(energy / time, 6) if time else 0.0,
                "idle_before_h": round(timed.idle[k], 6),
                "start_h": round(timed.unit_starts[k], 6),
                "end_h": round(timed.unit_ends[k], 6),
            }
        )
    return rows


def write_schedule_csv(path, rows: list[dict]) -> None:
    _write_csv(path, SCHEDULE_FIELDS, rows)


def load_histogram(timed: TimedSchedule, instance: ProblemInstance) -> list[dict]:
    """Energy drawn in each tariff period, spreading every slab uniformly."""
    tariff = instance.tariff
    energy = [0.0] * len(tariff.periods)
    for unit in timed.units:
        for sid in unit:
            slab = instance.slab(sid)
            start = timed.slab_starts[sid]
            end = start + slab.time_h
            for j, period in enumerate(tariff.periods):
                overlap = min(end, period.end_h) - max(start, period.start_h)
                if overlap > 0:
                    energy[j] += slab.energy_mwh * overlap / slab.time_h
    return [
        {
            "period": j + 1,
            "start_h": period.start_h,
            "end_h": period.end_h,
            "price_cny_per_kwh": period.price_cny_per_kwh,
            "energy_mwh": energy[j],
            "avg_load_mw": energy[j] / period.duration_h,
        }
        for j, period in enumerate(tariff.periods)
    ]


def write_load_histogram_csv(path, rows: list[dict]) -> None:
    _write_csv(path, HISTOGRAM_FIELDS, rows)


def write_manifest(path, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def gantt_svg(timed: TimedSchedule, instance: ProblemInstance) -> str:
    """Timeline of the rolling units under the price curve."""
    tariff = instance.tariff
    horizon = tariff.horizon_h
    left, top = 50.0, 20.0
    scale = 880.0 / horizon
    price_h = 110.0
    lane_h = 24.0
    m = len(timed.units)
    height = top + price_h + 40 + m * lane_h + 40
    width = left + horizon * scale + 30

    pmax = tariff.max_price
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" height="{height:.0f}" '
        f'font-family="sans-serif" font-size="11">',
        f'<rect width="{width:.0f}" height="{height:.0f}" fill="white"/>',
    ]

    def x(t: float) -> float:
        return left + t * scale

    # price step line with period shading
    for period in tariff.periods:
        shade = 0.12 + 0.5 * period.price_cny_per_kwh / pmax
        parts.append(
            f'<rect x="{x(period.start_h):.1f}" y="{top:.1f}" '
            f'width="{(period.duration_h * scale):.1f}" height="{price_h:.1f}" '
            f'fill="#f5b041" fill-opacity="{shade - 0.12:.3f}"/>'
        )
    steps = []
    for period in tariff.periods:
        y = top + price_h * (1.0 - period.price_cny_per_kwh / pmax)
        steps.append(f"{x(period.start_h):.1f},{y:.1f}")
        steps.append(f"{x(period.end_h):.1f},{y:.1f}")
    parts.append(
        f'<polyline points="{" ".join(steps)}" fill="none" stroke="#c0392b" stroke-width="2"/>'
    )
    parts.append(
        f'<text x="{left:.1f}" y="{top - 6:.1f}" fill="#333">price (CNY/kWh), max {pmax}</text>'
    )

    lanes_top = top + price_h + 30
    for k in range(m):
        y = lanes_top + k * lane_h
        parts.append(
            f'<text x="8" y="{y + lane_h * 0.7:.1f}" fill="#333">unit {k + 1}</text>'
        )
        parts.append(
            f'<rect x="{x(timed.unit_starts[k]):.1f}" y="{y + 3:.1f}" '
            f'width="{max(1.0, (timed.unit_ends[k] - timed.unit_starts[k]) * scale):.1f}" '
            f'height="{lane_h - 6:.1f}" fill="#2e86c1" stroke="#1b4f72"/>'
        )

    axis_y = lanes_top + m * lane_h + 12
    parts.append(
        f'<line x1="{x(0):.1f}" y1="{axis_y:.1f}" x2="{x(horizon):.1f}" y2="{axis_y:.1f}" '
        f'stroke="#333"/>'
    )
    tick = 0
    while tick <= horizon:
        parts.append(
            f'<line x1="{x(tick):.1f}" y1="{axis_y:.1f}" x2="{x(tick):.1f}" y2="{axis_y + 4:.1f}" stroke="#333"/>'
        )
        parts.append(
            f'<text x="{x(tick):.1f}" y="{axis_y + 16:.1f}" text-anchor="middle" fill="#333">{tick}</text>'
        )
        tick += 2
    parts.append("</svg>")
    return "\n".join(parts)
