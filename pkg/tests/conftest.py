"""Shared fixtures: the day tariff, penalty tables and small instances."""

from __future__ import annotations

import numpy as np
import pytest

from tousched import (
    ProblemInstance,
    Slab,
    default_penalty_model,
    default_tariff,
    generate_instance,
)

# collected by tests/test_acceptance.py, printed by pytest_terminal_summary
ACCEPTANCE_RESULTS: list[str] = []


@pytest.fixture
def tariff():
    return default_tariff()


@pytest.fixture
def penalties():
    return default_penalty_model()


@pytest.fixture
def demo_instance():
    return generate_instance(12, 2, seed=20240517, profile="many-varieties,not-full-load")


@pytest.fixture
def rng():
    return np.random.default_rng(99)


def make_instance(slab_rows, unit_count, *, min_len=0.1, max_len=1000.0, run_cap=1000.0,
                  horizon=24.0):
    """Instance from (length, time, energy, width, gauge, hardness) rows.

    The defaults leave the length and width-run limits slack so tests can
    focus on one rule at a time.
    """
    slabs = tuple(
        Slab(
            id=i + 1,
            length_km=row[0],
            time_h=row[1],
            energy_mwh=row[2],
            width_mm=row[3],
            gauge_mm=row[4],
            hardness=row[5],
        )
        for i, row in enumerate(slab_rows)
    )
    return ProblemInstance(
        slabs=slabs,
        unit_count=unit_count,
        min_unit_length_km=min_len,
        max_unit_length_km=max_len,
        max_same_width_run_km=run_cap,
        tariff=default_tariff(),
        penalties=default_penalty_model(),
        horizon_h=horizon,
    )


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_RESULTS:
            terminalreporter.write_line(line)
