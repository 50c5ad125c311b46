"""Nonstationary Poisson call arrivals from a piecewise-constant daily rate.

Arrivals are generated by thinning against the largest band rate. Each
proposal consumes two uniforms from the stream, ``(u_gap, u_accept)``:
the gap is ``-log(1 - u_gap) / max_rate`` and the proposal is kept when
``u_accept * max_base_rate < base_rate(t)``. The acceptance test does not
depend on the multiplier, so scaled scenarios reuse the same draws.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from .des.streams import RandomStream

HOURS_PER_DAY = 24.0


class ScheduleError(ValueError):
    pass


@dataclass(frozen=True)
class Band:
    start: float
    end: float
    rate: float

    def __post_init__(self):
        for f in ("start", "end", "rate"):
            object.__setattr__(self, f, float(getattr(self, f)))

    @property
    def width(self) -> float:
        w = (self.end - self.start) % HOURS_PER_DAY
        return HOURS_PER_DAY if w == 0 else w

    def contains(self, hour: float) -> bool:
        if self.start < self.end:
            return self.start <= hour < self.end
        return hour >= self.start or hour < self.end

    @property
    def key(self) -> str:
        """Band label such as ``"21-07"``."""
        if self.start.is_integer() and self.end.is_integer():
            return f"{int(self.start):02d}-{int(self.end):02d}"
        return f"{self.start:g}-{self.end:g}"


def check_partition(edges: Sequence[tuple[float, float]]) -> None:
    """Raise unless the (start, end) hour pairs tile [0, 24) exactly."""
    if not edges:
        raise ScheduleError("at least one band is required")
    for s, e in edges:
        if not (0 <= s < HOURS_PER_DAY and 0 <= e <= HOURS_PER_DAY):
            raise ScheduleError(f"band {s}-{e} has hours outside [0, 24]")
    ordered = sorted(edges)
    total = 0.0
    for (s, e), (s_next, _) in zip(ordered, ordered[1:] + ordered[:1]):
        if e % HOURS_PER_DAY != s_next % HOURS_PER_DAY:
            raise ScheduleError(f"band ending at {e} is not followed by a band starting there")
        w = (e - s) % HOURS_PER_DAY
        total += HOURS_PER_DAY if (w == 0 and len(edges) == 1) else w
    if not math.isclose(total, HOURS_PER_DAY):
        raise ScheduleError(f"bands cover {total} h, not 24 h")


@dataclass(frozen=True)
class RateSchedule:
    bands: tuple[Band, ...]
    multiplier: float = 1.0

    def __post_init__(self):
        check_partition([(b.start, b.end) for b in self.bands])
        if any(b.rate < 0 for b in self.bands):
            raise ScheduleError("rates must be non-negative")
        if not self.multiplier > 0:
            raise ScheduleError("multiplier must be positive")

    def band_index(self, t: float) -> int:
        h = t % HOURS_PER_DAY
        for i, b in enumerate(self.bands):
            if b.contains(h):
                return i
        raise AssertionError("bands do not cover the day")  # pragma: no cover

    def base_rate_at(self, t: float) -> float:
        return self.bands[self.band_index(t)].rate

    def rate_at(self, t: float) -> float:
        return self.base_rate_at(t) * self.multiplier

    @property
    def max_base_rate(self) -> float:
        return max(b.rate for b in self.bands)

    @property
    def max_rate(self) -> float:
        return self.max_base_rate * self.multiplier

    def expected_count(self, horizon_hours: float) -> float:
        """Integral of the intensity over [0, horizon]."""
        return self.multiplier * sum(
            b.rate * _overlap(b, horizon_hours) for b in self.bands
        )

    def band_keys(self) -> list[str]:
        return [b.key for b in self.bands]


def _overlap(band: Band, horizon: float) -> float:
    """Hours of [0, horizon] falling inside ``band``."""
    days = int(horizon // HOURS_PER_DAY)
    total = days * band.width
    rem = horizon - days * HOURS_PER_DAY
    if rem > 0:
        segs = [(band.start, band.end)] if band.start < band.end else [(band.start, HOURS_PER_DAY), (0.0, band.end)]
        total += sum(max(0.0, min(e, rem) - s) for s, e in segs)
    return total


def calibrate_from_monthly_counts(
    counts: Sequence[tuple[float, float, float]], days_in_month: int = 30
) -> RateSchedule:
    """Rates per hour from ``(start_hour, end_hour, calls_per_month)`` triples."""
    if days_in_month < 28:
        raise ScheduleError("a month has at least 28 days")
    check_partition([(s, e) for s, e, _ in counts])
    bands = []
    for s, e, calls in counts:
        if calls < 0:
            raise ScheduleError("call counts must be non-negative")
        width = Band(s, e, 0.0).width
        bands.append(Band(float(s), float(e), calls / (days_in_month * width)))
    return RateSchedule(tuple(bands))


def scale_rates(schedule: RateSchedule, m: float) -> RateSchedule:
    """Scale the arrival intensity by ``m`` (composes with any existing multiplier)."""
    if not m > 0:
        raise ScheduleError("multiplier must be positive")
    return replace(schedule, multiplier=schedule.multiplier * m)


def next_arrival(schedule: RateSchedule, now: float, stream: RandomStream) -> Optional[float]:
    """Next arrival time strictly after ``now``; None if every band rate is zero."""
    base_max = schedule.max_base_rate
    if base_max <= 0:
        return None
    lam_max = base_max * schedule.multiplier
    t = now
    while True:
        u_gap, u_acc = stream.random(2)
        t = t + (-math.log(1.0 - u_gap)) / lam_max
        if u_acc * base_max < schedule.base_rate_at(t):
            return t


def generate_arrivals(
    schedule: RateSchedule, horizon: float, stream: RandomStream, chunk: int = 4096
) -> np.ndarray:
    """All arrival times in [0, horizon).

    Consumes the stream exactly like repeated ``next_arrival`` calls, so the
    two agree up to floating-point rounding of the logarithm.
    """
    base_max = schedule.max_base_rate
    if base_max <= 0 or horizon <= 0:
        return np.empty(0)
    lam_max = base_max * schedule.multiplier
    starts = np.array([b.start for b in schedule.bands])
    ends = np.array([b.end for b in schedule.bands])
    rates = np.array([b.rate for b in schedule.bands])
    wraps = starts >= ends
    out = []
    t = 0.0
    while t < horizon:
        u = stream.random((chunk, 2))
        gaps = -np.log(1.0 - u[:, 0]) / lam_max
        times = np.cumsum(np.concatenate(([t], gaps)))[1:]
        hours = times % HOURS_PER_DAY
        inside = np.where(
            wraps,
            (hours[:, None] >= starts) | (hours[:, None] < ends),
            (hours[:, None] >= starts) & (hours[:, None] < ends),
        )
        rate = rates[np.argmax(inside, axis=1)]
        keep = u[:, 1] * base_max < rate
        out.append(times[keep & (times < horizon)])
        t = times[-1]
    return np.concatenate(out)
