"""Time-of-use tariff lookups and interval pricing."""

import pytest
from hypothesis import given, strategies as st

from tousched import CostMode, TouPeriod, TouTariff, default_day_periods, default_tariff


class TestPriceLookup:
    def test_known_prices(self, tariff):
        assert tariff.price_at(19) == 0.878
        assert tariff.price_at(3) == 0.428
        assert tariff.price_at(7.5) == 0.628

    def test_periods_are_half_open(self, tariff):
        # 8:00 belongs to the period starting there, not the one ending
        idx = tariff.period_index_at(8.0)
        assert tariff.periods[idx].start_h == 8.0
        end_idx = tariff.period_index_ending(8.0)
        assert tariff.periods[end_idx].end_h == 8.0

    def test_price_extremes(self, tariff):
        assert tariff.min_price == 0.428
        assert tariff.max_price == 0.878

    def test_out_of_range_rejected(self, tariff):
        with pytest.raises(ValueError):
            tariff.price_at(-0.5)
        with pytest.raises(ValueError):
            tariff.price_at(24.5)


class TestIntervalCost:
    def test_two_hour_span_across_price_change(self, tariff):
        # 1 MW for two hours straddling the 18:00 price step:
        # 778 CNY in the first hour, 878 in the second
        assert tariff.interval_cost(17, 19, 2.0) == pytest.approx(1656.00, abs=1e-6)

    def test_full_off_peak_block(self, tariff):
        # a block priced wholly at 0.428 CNY/kWh
        assert tariff.interval_cost(0, 2.67, 59.71) == pytest.approx(25555.88, abs=0.005)

    def test_proportional_splits_energy_by_time(self, tariff):
        whole = tariff.interval_cost(17, 19, 2.0)
        parts = tariff.interval_cost(17, 18, 1.0) + tariff.interval_cost(18, 19, 1.0)
        assert whole == pytest.approx(parts, abs=1e-9)

    def test_start_period_mode_prices_whole_interval_at_start(self, tariff):
        cost = tariff.interval_cost(17, 19, 2.0, CostMode.START_PERIOD)
        assert cost == pytest.approx(2.0 * 1000 * 0.778, abs=1e-9)

    def test_zero_length_interval_costs_nothing(self, tariff):
        assert tariff.interval_cost(5.0, 5.0, 1.0) == 0.0

    def test_reversed_interval_rejected(self, tariff):
        with pytest.raises(ValueError, match="before start"):
            tariff.interval_cost(5.0, 4.0, 1.0)

    def test_interval_past_horizon_rejected(self, tariff):
        with pytest.raises(ValueError):
            tariff.interval_cost(23.0, 25.0, 1.0)

    @given(
        start=st.floats(min_value=0.0, max_value=20.0),
        length=st.floats(min_value=0.01, max_value=3.9),
        split=st.floats(min_value=0.001, max_value=0.999),
        energy=st.floats(min_value=0.1, max_value=100.0),
    )
    def test_cost_is_additive_over_splits(self, start, length, split, energy):
        tariff = default_tariff()
        end = start + length
        mid = start + length * split
        whole = tariff.interval_cost(start, end, energy)
        e_first = energy * (mid - start) / length
        parts = tariff.interval_cost(start, mid, e_first) + tariff.interval_cost(
            mid, end, energy - e_first
        )
        assert whole == pytest.approx(parts, rel=1e-9, abs=1e-6)

    @given(
        start=st.floats(min_value=0.0, max_value=20.0),
        length=st.floats(min_value=0.01, max_value=3.9),
        energy=st.floats(min_value=0.1, max_value=100.0),
    )
    def test_cost_bounded_by_price_extremes(self, start, length, energy):
        tariff = default_tariff()
        cost = tariff.interval_cost(start, start + length, energy)
        assert tariff.min_price * energy * 1000 - 1e-6 <= cost
        assert cost <= tariff.max_price * energy * 1000 + 1e-6


class TestTariffConstruction:
    def test_day_cycle_covers_24_hours(self):
        periods = default_day_periods()
        assert periods[0].start_h == 0.0
        assert periods[-1].end_h == 24.0
        assert sum(p.duration_h for p in periods) == pytest.approx(24.0)

    def test_multi_day_tiling(self):
        two_days = default_tariff(days=2)
        assert two_days.horizon_h == 48.0
        assert two_days.price_at(19) == two_days.price_at(43)
        one = default_tariff()
        assert two_days.interval_cost(25, 27, 2.0) == pytest.approx(
            one.interval_cost(1, 3, 2.0)
        )

    def test_price_gap_rejected(self):
        with pytest.raises(ValueError, match="gap"):
            TouTariff(
                (
                    TouPeriod(0.0, 10.0, 0.4, "off-peak"),
                    TouPeriod(11.0, 13.0, 0.8, "on-peak"),
                )
            )

    def test_overlap_rejected(self):
        with pytest.raises(ValueError):
            TouTariff(
                (
                    TouPeriod(0.0, 10.0, 0.4, "off-peak"),
                    TouPeriod(9.0, 15.0, 0.8, "on-peak"),
                )
            )

    def test_first_period_must_start_at_zero(self):
        with pytest.raises(ValueError):
            TouTariff((TouPeriod(1.0, 23.0, 0.4, "off-peak"),))

    def test_negative_price_rejected(self):
        with pytest.raises(ValueError):
            TouPeriod(0.0, 24.0, -0.1, "off-peak")
