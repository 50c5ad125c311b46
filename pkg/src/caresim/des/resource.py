"""Counted server pools with schedule-driven capacity and a FIFO queue.

Capacity decreases never preempt: units in service finish, and the deficit
drains as they release because grants require ``busy < capacity``.
"""

from __future__ import annotations

import math
from collections import defaultdict, deque
from typing import Any, Hashable, Optional

from .accumulators import TallyStat, TimeWeightedStat
from .schedule import ConstantSchedule, PeriodicSchedule


class ResourceError(RuntimeError):
    """Model logic error such as releasing an idle resource."""


class Resource:
    def __init__(self, name: str, schedule: PeriodicSchedule | int, t0: float = 0.0, label: Hashable = None):
        if isinstance(schedule, int):
            schedule = ConstantSchedule(schedule, label)
        self.name = name
        self.schedule = schedule
        self.capacity = schedule.value(t0)
        self.label = schedule.label(t0)
        self.busy = 0
        self.queue: deque[tuple[Any, float, Hashable]] = deque()
        self._last = float(t0)
        # utilization integrals, split by the schedule label in force
        self.busy_time: dict[Hashable, float] = defaultdict(float)
        self.capacity_time: dict[Hashable, float] = defaultdict(float)
        # queue statistics, split by the label at queue entry
        self.queue_wait: dict[Hashable, TallyStat] = defaultdict(TallyStat)
        self.max_queue_length: dict[Hashable, int] = defaultdict(int)
        self.requests: dict[Hashable, int] = defaultdict(int)
        self.queue_length = TimeWeightedStat(0.0, t0)
        self.grant_log: Optional[list] = None

    def __repr__(self) -> str:
        return f"Resource({self.name!r}, busy={self.busy}, capacity={self.capacity}, queued={len(self.queue)})"

    def effective_capacity(self, t: float) -> int:
        return self.schedule.value(t)

    def _accrue(self, now: float) -> None:
        dt = now - self._last
        if dt < 0:
            raise ResourceError(f"{self.name}: time went backwards")
        if dt > 0:
            cap = self.capacity
            self.busy_time[self.label] += min(self.busy, cap) * dt
            self.capacity_time[self.label] += cap * dt
        self._last = now

    def _grant_head(self, now: float) -> Any:
        entity, t_enq, label = self.queue.popleft()
        self.busy += 1
        self.queue_wait[label].record(now - t_enq)
        self.queue_length.record(len(self.queue), now)
        if self.grant_log is not None:
            self.grant_log.append(entity)
        return entity

    def seize(self, entity: Any, now: float) -> bool:
        """True if a unit was granted immediately, False if ``entity`` was queued."""
        self._accrue(now)
        self.requests[self.label] += 1
        if self.busy < self.capacity:
            self.busy += 1
            if self.grant_log is not None:
                self.grant_log.append(entity)
            return True
        self.queue.append((entity, now, self.label))
        n = len(self.queue)
        self.queue_length.record(n, now)
        if n > self.max_queue_length[self.label]:
            self.max_queue_length[self.label] = n
        return False

    def release(self, now: float) -> Any:
        """Free one unit; return the queued entity granted in its place, if any."""
        self._accrue(now)
        if self.busy <= 0:
            raise ResourceError(f"{self.name}: release with no unit busy")
        self.busy -= 1
        if self.queue and self.busy < self.capacity:
            return self._grant_head(now)
        return None

    def set_capacity(self, now: float, capacity: int, label: Hashable = None) -> list:
        """Apply a shift change; return entities granted because capacity rose."""
        self._accrue(now)
        self.capacity = int(capacity)
        self.label = label
        granted = []
        while self.queue and self.busy < self.capacity:
            granted.append(self._grant_head(now))
        return granted

    def withdraw_queue(self, now: float) -> list:
        """Empty the queue (e.g. handover to the resource now on duty).

        Returns ``(entity, enqueue_time)`` pairs in queue order.
        """
        self._accrue(now)
        out = []
        while self.queue:
            entity, t_enq, label = self.queue.popleft()
            self.queue_wait[label].record(now - t_enq)
            out.append((entity, t_enq))
        self.queue_length.record(0, now)
        return out

    def flush(self, now: float) -> None:
        self._accrue(now)
        self.queue_length.flush(now)

    def mean_queue_wait(self, label: Hashable = ...) -> float:
        """Average wait over all requests, zero waits included."""
        labels = list(self.requests) if label is ... else [label]
        n = sum(self.requests.get(k, 0) for k in labels)
        total = sum(self.queue_wait[k].sum for k in labels if k in self.queue_wait)
        return total / n if n else math.nan

    def utilization(self, label: Hashable = ...) -> float:
        """Busy fraction of on-duty capacity; NaN if never on duty."""
        if label is ...:
            busy = sum(self.busy_time.values())
            cap = sum(self.capacity_time.values())
        else:
            busy = self.busy_time.get(label, 0.0)
            cap = self.capacity_time.get(label, 0.0)
        return busy / cap if cap > 0 else math.nan
