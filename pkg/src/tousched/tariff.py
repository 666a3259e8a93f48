"""Time-of-use electricity tariffs.

A tariff is a sequence of contiguous half-open price periods that exactly
covers the scheduling horizon ``[0, horizon_h)``.  Prices are CNY per kWh,
times are hours, energies are MWh (1 MWh = 1000 kWh).
"""

from __future__ import annotations

import enum
from bisect import bisect_right
from dataclasses import dataclass
from typing import Iterable, Sequence

_EPS = 1e-9

PERIOD_LABELS = ("on-peak", "mid-peak", "flat-peak", "off-peak")


class CostMode(enum.Enum):
    """How the energy of a processing interval is priced.

    PROPORTIONAL spreads the energy uniformly over the interval and
    integrates the piecewise-constant price curve across it.  START_PERIOD
    books the whole energy at the price in force when the interval begins.
    """

    PROPORTIONAL = "proportional"
    START_PERIOD = "start-period"

    @classmethod
    def coerce(cls, value: "CostMode | str") -> "CostMode":
        if isinstance(value, cls):
            return value
        try:
            return cls(value)
        except ValueError:
            choices = ", ".join(m.value for m in cls)
            raise ValueError(f"unknown cost mode {value!r} (choose from: {choices})") from None


@dataclass(frozen=True)
class TouPeriod:
    """One price period. The interval is half-open: [start_h, start_h + duration_h)."""

    start_h: float
    duration_h: float
    price_cny_per_kwh: float
    label: str

    def __post_init__(self) -> None:
        if self.start_h < 0:
            raise ValueError(f"period start must be >= 0, got {self.start_h}")
        if self.duration_h <= 0:
            raise ValueError(f"period duration must be positive, got {self.duration_h}")
        if self.price_cny_per_kwh < 0:
            raise ValueError(f"period price must be >= 0, got {self.price_cny_per_kwh}")
        if self.label not in PERIOD_LABELS:
            raise ValueError(f"unknown period label {self.label!r}, expected one of {PERIOD_LABELS}")

    @property
    def end_h(self) -> float:
        return self.start_h + self.duration_h


class TouTariff:
    """Piecewise-constant price curve over ``[0, horizon_h)``.

    Periods must be contiguous and non-overlapping; together they tile the
    horizon exactly.  Membership is half-open, so a boundary instant belongs
    to the period that starts there.
    """

    def __init__(self, periods: Iterable[TouPeriod], horizon_h: float | None = None) -> None:
        ordered = tuple(sorted(periods, key=lambda p: p.start_h))
        if not ordered:
            raise ValueError("tariff needs at least one period")
        if abs(ordered[0].start_h) > _EPS:
            raise ValueError(f"first period must start at 0, got {ordered[0].start_h}")
        for prev, nxt in zip(ordered, ordered[1:]):
            gap = nxt.start_h - prev.end_h
            if gap > _EPS:
                raise ValueError(f"price gap between {prev.end_h} h and {nxt.start_h} h")
            if gap < -_EPS:
                raise ValueError(f"overlapping periods at {nxt.start_h} h")
        end = ordered[-1].end_h
        if horizon_h is not None and abs(end - horizon_h) > _EPS:
            raise ValueError(f"periods cover [0, {end}] but horizon is {horizon_h} h")
        self.periods = ordered
        self.horizon_h = end
        self._starts = [p.start_h for p in ordered]
        self._prices = [p.price_cny_per_kwh for p in ordered]
        # cumulative integral of the price curve at each period start, used
        # for O(1) interval pricing
        cum = [0.0]
        for p in ordered:
            cum.append(cum[-1] + p.duration_h * p.price_cny_per_kwh)
        self._cum = cum

    @classmethod
    def tiled(cls, day_periods: Sequence[TouPeriod], days: int) -> "TouTariff":
        """Repeat a 24 h period layout over ``days`` consecutive days."""
        if days < 1:
            raise ValueError(f"days must be >= 1, got {days}")
        base = cls(day_periods, horizon_h=24.0)
        shifted = [
            TouPeriod(p.start_h + 24.0 * d, p.duration_h, p.price_cny_per_kwh, p.label)
            for d in range(days)
            for p in base.periods
        ]
        return cls(shifted, horizon_h=24.0 * days)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, TouTariff) and self.periods == other.periods

    def __repr__(self) -> str:
        return f"TouTariff({len(self.periods)} periods, horizon={self.horizon_h} h)"

    @property
    def min_price(self) -> float:
        return min(self._prices)

    @property
    def max_price(self) -> float:
        return max(self._prices)

    def period_index_at(self, t: float) -> int:
        """Index of the period whose half-open interval contains instant ``t``."""
        if t < -_EPS or t >= self.horizon_h:
            raise ValueError(f"instant {t} h outside [0, {self.horizon_h}) h")
        return max(0, bisect_right(self._starts, max(t, 0.0)) - 1)

    def period_index_ending(self, t: float) -> int:
        """Index of the period containing the instant just before ``t``.

        Used for completion times: a job finishing exactly on a boundary is
        priced against the period it ran in, not the one starting there.
        """
        if t <= _EPS or t > self.horizon_h + _EPS:
            raise ValueError(f"completion instant {t} h outside (0, {self.horizon_h}] h")
        return max(0, bisect_right(self._starts, min(t, self.horizon_h) - _EPS) - 1)

    def price_at(self, t: float) -> float:
        """Price in force at instant ``t``, with half-open period membership."""
        return self._prices[self.period_index_at(t)]

    def _integral(self, t: float) -> float:
        """Integral of the price curve over [0, t], in CNY h per kWh."""
        t = min(max(t, 0.0), self.horizon_h)
        i = max(0, bisect_right(self._starts, t) - 1)
        return self._cum[i] + (t - self._starts[i]) * self._prices[i]

    def interval_cost(
        self,
        start_h: float,
        end_h: float,
        energy_mwh: float,
        mode: CostMode = CostMode.PROPORTIONAL,
    ) -> float:
        """Cost in CNY of ``energy_mwh`` consumed over ``[start_h, end_h)``.

        In PROPORTIONAL mode the energy is drawn at a uniform rate and each
        overlapped period is billed for its share.  In START_PERIOD mode the
        whole energy is billed at ``price_at(start_h)``.
        """
        if energy_mwh < 0:
            raise ValueError(f"energy must be >= 0, got {energy_mwh}")
        if start_h < -_EPS or end_h > self.horizon_h + _EPS:
            raise ValueError(
                f"interval [{start_h}, {end_h}] h outside tariff horizon [0, {self.horizon_h}] h"
            )
        if end_h < start_h - _EPS:
            raise ValueError(f"interval end {end_h} h before start {start_h} h")
        mode = CostMode.coerce(mode)
        if mode is CostMode.START_PERIOD:
            if start_h >= self.horizon_h - _EPS:
                price = self._prices[-1]
            else:
                price = self.price_at(start_h)
            return energy_mwh * 1000.0 * price
        width = end_h - start_h
        if width <= _EPS:
            return 0.0
        avg_price = (self._integral(end_h) - self._integral(start_h)) / width
        return energy_mwh * 1000.0 * avg_price


def default_day_periods() -> tuple[TouPeriod, ...]:
    """A four-tier industrial day tariff (CNY per kWh), eight periods over 24 h."""
    return (
        TouPeriod(0.0, 7.0, 0.428, "off-peak"),
        TouPeriod(7.0, 1.0, 0.628, "flat-peak"),
        TouPeriod(8.0, 3.0, 0.778, "mid-peak"),
        TouPeriod(11.0, 4.0, 0.628, "flat-peak"),
        TouPeriod(15.0, 3.0, 0.778, "mid-peak"),
        TouPeriod(18.0, 3.0, 0.878, "on-peak"),
        TouPeriod(21.0, 1.0, 0.628, "flat-peak"),
        TouPeriod(22.0, 2.0, 0.428, "off-peak"),
    )


def default_tariff(days: int = 1) -> TouTariff:
    """The default day tariff, optionally tiled over several days."""
    return TouTariff.tiled(default_day_periods(), days)
