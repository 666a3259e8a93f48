"""Synthetic problem instances.

Profiles combine a variety level (how spread out width/gauge/hardness
are) with a load level (how much of the horizon the rolling program
fills).  A full-load program leaves almost no idle slack, a not-full one
leaves hours that the solver can place against the tariff.
"""

from __future__ import annotations

import numpy as np

from .instance import ProblemInstance, Slab, default_penalty_model
from .tariff import default_tariff

PROFILES = (
    "many-varieties,full-load",
    "many-varieties,not-full-load",
    "few-varieties,full-load",
    "few-varieties,not-full-load",
)

_WIDTH_GRID_MM = 50


def _width_pool(many: bool) -> list[int]:
    if many:
        return [850 + _WIDTH_GRID_MM * i for i in range(18)]
    return [1050 + _WIDTH_GRID_MM * i for i in range(5)]


def _gauge_pool(many: bool) -> list[float]:
    if many:
        return [round(1.2 + 0.4 * i, 2) for i in range(18)]
    return [round(2.0 + 0.25 * i, 2) for i in range(5)]


def _hardness_pool(many: bool) -> list[int]:
    return [1, 2, 3, 4, 5] if many else [2, 3]


def generate_instance(
    n_slabs: int,
    unit_count: int,
    seed: int | None = None,
    profile: str = "many-varieties,full-load",
) -> ProblemInstance:
    """Draw a random instance with the given shape and profile."""
    if profile not in PROFILES:
        raise ValueError(f"unknown profile {profile!r}; choose one of {', '.join(PROFILES)}")
    if n_slabs < 1 or unit_count < 1:
        raise ValueError("need at least one slab and one unit")
    many = profile.startswith("many")
    full = profile.endswith(",full-load")

    rng = np.random.default_rng(seed)
    tariff = default_tariff()
    horizon = tariff.horizon_h

    load_frac = rng.uniform(0.95, 0.98) if full else rng.uniform(0.72, 0.82)
    total_time = load_frac * horizon
    jitter = rng.uniform(0.8, 1.2, size=n_slabs)
    times = np.round(total_time * jitter / jitter.sum(), 5)

    speeds = rng.uniform(3.1, 3.7, size=n_slabs)
    lengths = np.round(times * speeds, 4)
    loads = rng.uniform(19.0, 23.0, size=n_slabs)
    energies = np.round(times * loads, 4)

    widths = rng.choice(_width_pool(many), size=n_slabs)
    gauges = rng.choice(_gauge_pool(many), size=n_slabs)
    hardnesses = rng.choice(_hardness_pool(many), size=n_slabs)

    slabs = tuple(
        Slab(
            id=i + 1,
            width_mm=int(widths[i]),
            gauge_mm=float(gauges[i]),
            hardness=int(hardnesses[i]),
            length_km=float(lengths[i]),
            time_h=float(times[i]),
            energy_mwh=float(energies[i]),
        )
        for i in range(n_slabs)
    )

    avg_unit_len = float(lengths.sum()) / unit_count
    return ProblemInstance(
        slabs=slabs,
        unit_count=unit_count,
        min_unit_length_km=round(0.62 * avg_unit_len, 3),
        max_unit_length_km=round(1.22 * avg_unit_len, 3),
        max_same_width_run_km=max(1.0, round(1.25 * float(lengths.max()), 3)),
        horizon_h=horizon,
        tariff=tariff,
        penalties=default_penalty_model(),
    )
