"""Objective evaluation and the independent constraint audit."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tousched import (
    BIG_M,
    Chromosome,
    CostMode,
    check_constraints,
    decode,
    eval_penalty,
    eval_power_cost,
    evaluate_chromosome,
    generate_instance,
    random_chromosome,
    timing,
)

from conftest import make_instance

ROWS = [
    (1.0, 2.0, 10.0, 1500, 3.0, 2),
    (1.0, 2.0, 10.0, 1400, 2.5, 2),
    (1.0, 2.0, 10.0, 1300, 2.0, 3),
    (1.0, 2.0, 10.0, 1200, 1.5, 3),
]


@pytest.fixture
def inst():
    return make_instance(ROWS, 2, min_len=1.5, max_len=2.0)


class TestPowerCost:
    def test_hand_computed_cost(self, inst):
        batch = decode((1, 6, 3, 8, 2, 4, 5, 7), inst)
        timed = timing(batch, (0.0, 0.0), inst)
        # unit 1 spans [0, 4] at 0.428; unit 2 spans [4, 8]:
        # slab 2 in [4, 6] (off-peak), slab 4 in [6, 8] (1 h off-peak,
        # 1 h flat-peak), 5 MW throughout
        expected = 10_000 * 0.428 * 3 + 5_000 * (0.428 + 0.628)
        assert eval_power_cost(timed, inst) == pytest.approx(expected)

    def test_off_versus_on_peak_ratio(self, inst):
        batch = decode((1, 6, 3, 8, 2, 4, 5, 7), inst)
        cheap = eval_power_cost(timing(batch, (0.0, 0.0), inst), inst)
        # push unit 2 into the 18:00-21:00 peak
        dear = eval_power_cost(timing(batch, (13.0, 1.0), inst), inst)
        assert dear > cheap
        # slab 4 runs [19, 21] fully on-peak instead of half flat-peak
        assert dear - cheap > 0

    def test_start_period_mode_prices_by_entry_period(self, inst):
        batch = decode((1, 6, 3, 8, 2, 4, 5, 7), inst)
        timed = timing(batch, (0.0, 0.0), inst)
        expected = 10_000 * 0.428 * 3 + 10_000 * 0.428
        assert eval_power_cost(timed, inst, CostMode.START_PERIOD) == pytest.approx(expected)


class TestPenalty:
    def test_sums_adjacent_pairs_inside_units(self, inst):
        batch = decode((1, 6, 3, 8, 2, 4, 5, 7), inst)
        # unit 1 is (1, 3): width 200 -> 16, gauge 1.0 -> 3, hardness 1 -> 2
        # unit 2 is (2, 4): width 200 -> 16, gauge 1.0 -> 3, hardness 1 -> 2
        assert eval_penalty(batch, inst) == 42.0

    def test_no_penalty_across_unit_boundary(self, inst):
        batch = decode((1, 2, 7, 8, 3, 4, 5, 6), inst)
        assert batch.units == ((1, 2), (3, 4))
        # within-unit jumps only: (1,2) and (3,4), each 100 mm/0.5 mm/0
        assert eval_penalty(batch, inst) == 2 * (10.0 + 3.0)

    def test_single_slab_units_score_zero(self):
        rows = ROWS[:2]
        one = make_instance(rows, 2, min_len=0.5, max_len=1.0)
        batch = decode((1, 4, 2, 3), one)
        assert batch.units == ((1,), (2,))
        assert eval_penalty(batch, one) == 0.0


class TestEvaluateChromosome:
    def test_feasible_chromosome_gets_real_objectives(self, inst):
        chrom = Chromosome(perm=(1, 6, 3, 8, 2, 4, 5, 7), idle=(0.0, 0.0))
        vec, batch, timed = evaluate_chromosome(chrom, inst)
        assert vec.feasible and batch.feasible and timed is not None
        assert vec.jump_penalty == 42.0
        assert vec.power_cost_cny < BIG_M

    def test_infeasible_decode_gets_sentinel(self):
        rows = [(5.0, 2.0, 20.0, 1500, 3.0, 2)] + ROWS[:2]
        bad = make_instance(rows, 2, min_len=0.5, max_len=2.0)
        vec, batch, timed = evaluate_chromosome(
            Chromosome(perm=tuple(range(1, 7)), idle=(0.0, 0.0)), bad
        )
        assert not vec.feasible
        assert vec.as_tuple() == (BIG_M, BIG_M)
        assert timed is None
        assert batch.unplaced == (1,)

    @given(seed=st.integers(min_value=0, max_value=10_000))
    @settings(max_examples=40, deadline=None)
    def test_feasible_decode_passes_the_audit(self, seed):
        inst = generate_instance(6, 2, seed=seed)
        chrom = random_chromosome(inst, np.random.default_rng(seed))
        vec, batch, _ = evaluate_chromosome(chrom, inst)
        if vec.feasible:
            assert check_constraints(batch.units, chrom.idle, inst) == []
        else:
            assert batch.unplaced or batch.short_units


class TestConstraintAudit:
    def codes(self, units, idle, inst):
        return [v.code for v in check_constraints(units, idle, inst)]

    def test_clean_schedule_has_no_violations(self, inst):
        assert self.codes(((1, 3), (2, 4)), (0.0, 0.0), inst) == []

    def test_duplicate_slab(self, inst):
        assert "slab-duplicate" in self.codes(((1, 3), (1, 2, 4)), (0.0, 0.0), inst)

    def test_missing_slab(self, inst):
        assert "slab-missing" in self.codes(((1, 3), (2,)), (0.0, 0.0), inst)

    def test_unknown_slab(self, inst):
        assert "slab-unknown" in self.codes(((1, 3), (2, 4, 9)), (0.0, 0.0), inst)

    def test_unit_too_short(self, inst):
        out = self.codes(((1, 2, 3), (4,)), (0.0, 0.0), inst)
        assert "unit-length-low" in out

    def test_unit_too_long(self, inst):
        out = self.codes(((1, 2, 3), (4,)), (0.0, 0.0), inst)
        assert "unit-length-high" in out

    def test_width_run_cap(self):
        rows = [(1.0, 1.0, 10.0, 1500, 3.0, 2)] * 3
        tight = make_instance(rows, 1, min_len=0.5, max_len=10.0, run_cap=2.0)
        assert "width-run" in self.codes(((1, 2, 3),), (0.0,), tight)

    def test_idle_shape(self, inst):
        assert "idle-shape" in self.codes(((1, 3), (2, 4)), (0.0,), inst)

    def test_idle_negative(self, inst):
        assert "idle-negative" in self.codes(((1, 3), (2, 4)), (-0.2, 0.0), inst)

    def test_idle_budget(self, inst):
        over = inst.idle_budget_h + 1.0
        assert "idle-budget" in self.codes(((1, 3), (2, 4)), (over, 0.0), inst)

    def test_violations_render_readably(self, inst):
        out = check_constraints(((1, 3), (2,)), (0.0, 0.0), inst)
        assert any(str(v).startswith("slab-missing:") for v in out)
        assert all(": " in str(v) for v in out)
