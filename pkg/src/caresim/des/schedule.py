"""Piecewise-constant periodic schedules for resource capacity."""

from __future__ import annotations

import bisect
import math
from typing import Hashable, Sequence


class PeriodicSchedule:
    """A value that repeats every ``period`` hours.

    ``starts`` are segment start offsets within the period (the first must
    be 0); segment ``i`` covers ``[starts[i], starts[i+1])``. Each segment
    carries an integer value and an optional statistics label.
    """

    def __init__(
        self,
        period: float,
        starts: Sequence[float],
        values: Sequence[int],
        labels: Sequence[Hashable] | None = None,
    ):
        if period <= 0:
            raise ValueError("period must be positive")
        if not starts or starts[0] != 0:
            raise ValueError("first segment must start at offset 0")
        if any(b <= a for a, b in zip(starts, starts[1:])) or starts[-1] >= period:
            raise ValueError("segment starts must be strictly increasing within the period")
        if len(values) != len(starts):
            raise ValueError("one value per segment required")
        if any(v < 0 for v in values):
            raise ValueError("capacities must be non-negative")
        self.period = float(period)
        self.starts = [float(s) for s in starts]
        self.values = [int(v) for v in values]
        self.labels = list(labels) if labels is not None else [None] * len(starts)
        if len(self.labels) != len(starts):
            raise ValueError("one label per segment required")

    def _segment(self, t: float) -> int:
        return bisect.bisect_right(self.starts, t % self.period) - 1

    def value(self, t: float) -> int:
        return self.values[self._segment(t)]

    def label(self, t: float) -> Hashable:
        return self.labels[self._segment(t)]

    def max_value(self) -> int:
        return max(self.values)

    def breakpoints(self, horizon: float) -> list[float]:
        """Segment boundaries in ``(0, horizon]``."""
        out = []
        for k in range(int(math.ceil(horizon / self.period)) + 1):
            base = k * self.period
            for s in self.starts:
                t = base + s
                if 0 < t <= horizon:
                    out.append(t)
        return out


class ConstantSchedule(PeriodicSchedule):
    def __init__(self, value: int, label: Hashable = None):
        super().__init__(1.0, [0.0], [value], [label])

    def breakpoints(self, horizon: float) -> list[float]:
        return []
