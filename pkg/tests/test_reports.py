"""CSV, manifest and SVG reporting."""

import json

import numpy as np
import pytest

from tousched import (
    TouBatchScheduler,
    decode,
    evaluate_chromosome,
    random_chromosome,
    rank_front,
    timing,
)
from tousched.reports import (
    gantt_svg,
    load_histogram,
    read_pareto_csv,
    unit_rows,
    write_load_histogram_csv,
    write_manifest,
    write_pareto_csv,
    write_ranking_csv,
    write_schedule_csv,
)


@pytest.fixture
def solved(demo_instance):
    model = TouBatchScheduler(population_size=16, generations=10, random_state=4)
    return model.fit(demo_instance)


@pytest.fixture
def timed_pair(demo_instance):
    rng = np.random.default_rng(2)
    while True:
        chrom = random_chromosome(demo_instance, rng)
        batch = decode(chrom.perm, demo_instance)
        if batch.feasible:
            return batch, timing(batch, chrom.idle, demo_instance)


class TestParetoCsv:
    def test_round_trip_is_exact(self, solved, tmp_path):
        path = tmp_path / "pareto.csv"
        write_pareto_csv(path, solved.pareto_front_)
        rows = read_pareto_csv(path)
        assert len(rows) == len(solved.pareto_front_)
        for row, ind in zip(rows, solved.pareto_front_):
            assert row["f1_cny"] == ind.objectives.power_cost_cny
            assert row["f2_penalty"] == ind.objectives.jump_penalty
            assert row["perm"] == ind.chromosome.perm
            assert row["idle"] == ind.chromosome.idle

    def test_rows_sorted_by_cost(self, solved, tmp_path):
        path = tmp_path / "pareto.csv"
        write_pareto_csv(path, reversed(solved.pareto_front_))
        costs = [r["f1_cny"] for r in read_pareto_csv(path)]
        assert costs == sorted(costs)

    def test_reread_objectives_match_reevaluation(self, solved, demo_instance, tmp_path):
        from tousched import Chromosome

        path = tmp_path / "pareto.csv"
        write_pareto_csv(path, solved.pareto_front_)
        for row in read_pareto_csv(path):
            vec, _, _ = evaluate_chromosome(
                Chromosome(perm=row["perm"], idle=row["idle"]), demo_instance
            )
            assert vec.as_tuple() == (row["f1_cny"], row["f2_penalty"])


class TestRankingCsv:
    def test_columns_and_order(self, solved, tmp_path):
        ranking = rank_front([i.objectives for i in solved.pareto_front_])
        path = tmp_path / "ranking.csv"
        write_ranking_csv(path, ranking)
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "rank,closeness,f1_cny,f2_penalty,solution_index"
        assert len(lines) == 1 + len(ranking.entries)
        first = lines[1].split(",")
        assert first[0] == "1"
        assert float(first[1]) == ranking.recommended.closeness


class TestScheduleRows:
    def test_unit_rows_cover_every_unit(self, timed_pair, demo_instance):
        batch, timed = timed_pair
        rows = unit_rows(batch, timed, demo_instance)
        assert [r["unit"] for r in rows] == [1, 2]
        assert sum(r["slab_quantity"] for r in rows) == demo_instance.n_slabs
        for row in rows:
            assert row["end_h"] == pytest.approx(
                row["start_h"] + row["processing_time_h"], abs=1e-6
            )

    def test_schedule_csv_written(self, timed_pair, demo_instance, tmp_path):
        batch, timed = timed_pair
        path = tmp_path / "schedule.csv"
        write_schedule_csv(path, unit_rows(batch, timed, demo_instance))
        assert path.read_text().startswith("unit,slab_quantity,rolling_length_km")


class TestLoadHistogram:
    def test_energy_is_conserved(self, timed_pair, demo_instance):
        _, timed = timed_pair
        rows = load_histogram(timed, demo_instance)
        total = sum(r["energy_mwh"] for r in rows)
        assert total == pytest.approx(sum(s.energy_mwh for s in demo_instance.slabs))

    def test_one_row_per_tariff_period(self, timed_pair, demo_instance):
        _, timed = timed_pair
        rows = load_histogram(timed, demo_instance)
        assert len(rows) == len(demo_instance.tariff.periods)
        for row, period in zip(rows, demo_instance.tariff.periods):
            assert row["start_h"] == period.start_h
            assert row["price_cny_per_kwh"] == period.price_cny_per_kwh
            assert row["avg_load_mw"] == pytest.approx(
                row["energy_mwh"] / (period.end_h - period.start_h)
            )

    def test_csv_written(self, timed_pair, demo_instance, tmp_path):
        _, timed = timed_pair
        path = tmp_path / "loads.csv"
        write_load_histogram_csv(path, load_histogram(timed, demo_instance))
        assert len(path.read_text().strip().splitlines()) == 1 + len(
            demo_instance.tariff.periods
        )


class TestManifest:
    def test_stable_and_newline_terminated(self, tmp_path):
        payload = {"b": 2, "a": [1, 2], "nested": {"y": 0.5, "x": "v"}}
        p1, p2 = tmp_path / "m1.json", tmp_path / "m2.json"
        write_manifest(p1, payload)
        write_manifest(p2, dict(reversed(list(payload.items()))))
        assert p1.read_bytes() == p2.read_bytes()
        text = p1.read_text()
        assert text.endswith("\n")
        assert json.loads(text) == payload


class TestGanttSvg:
    def test_contains_price_bands_and_unit_bars(self, timed_pair, demo_instance):
        _, timed = timed_pair
        svg = gantt_svg(timed, demo_instance)
        assert svg.startswith("<svg")
        assert svg.rstrip().endswith("</svg>")
        assert svg.count("<rect") >= len(demo_instance.tariff.periods) + len(timed.units)
        assert "price (CNY/kWh)" in svg
        assert "polyline" in svg
