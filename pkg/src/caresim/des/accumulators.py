"""Observation (tally) and time-persistent statistics."""

from __future__ import annotations

import math


class TallyStat:
    """Running count/sum/min/max of discrete observations."""

    __slots__ = ("count", "sum", "sum_squares", "min", "max")

    def __init__(self):
        self.count = 0
        self.sum = 0.0
        self.sum_squares = 0.0
        self.min = math.inf
        self.max = -math.inf

    def record(self, x: float) -> None:
        self.count += 1
        self.sum += x
        self.sum_squares += x * x
        if x < self.min:
            self.min = x
        if x > self.max:
            self.max = x

    @property
    def mean(self) -> float:
        return self.sum / self.count if self.count else math.nan

    @property
    def variance(self) -> float:
        if self.count < 2:
            return math.nan
        m = self.mean
        return max(0.0, (self.sum_squares - self.count * m * m) / (self.count - 1))

    def __repr__(self) -> str:
        return f"TallyStat(count={self.count}, mean={self.mean:.6g}, min={self.min:.6g}, max={self.max:.6g})"


class TimeWeightedStat:
    """Integral of a piecewise-constant trajectory."""

    __slots__ = ("integral", "last_value", "last_update", "max")

    def __init__(self, value: float = 0.0, t: float = 0.0):
        self.integral = 0.0
        self.last_value = float(value)
        self.last_update = float(t)
        self.max = float(value)

    def record(self, x: float, t: float) -> None:
        """The trajectory takes value ``x`` from time ``t`` on."""
        if t < self.last_update:
            raise ValueError(f"time went backwards: {t!r} < {self.last_update!r}")
        self.integral += self.last_value * (t - self.last_update)
        self.last_value = float(x)
        self.last_update = float(t)
        if x > self.max:
            self.max = float(x)

    def flush(self, t: float) -> None:
        self.record(self.last_value, t)

    def time_average(self, t_end: float, t_start: float = 0.0) -> float:
        self.flush(t_end)
        span = t_end - t_start
        return self.integral / span if span > 0 else math.nan
