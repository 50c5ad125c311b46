"""Future-event list and simulation clock.

Events are ordered by ``(time, seq)`` where ``seq`` is assigned at
scheduling time, so simultaneous events fire in insertion order.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Any, Callable, Optional


class SchedulingError(RuntimeError):
    """Raised when an event is scheduled in the past."""


@dataclass(frozen=True)
class Event:
    time: float
    seq: int
    action: Callable[..., Any]
    payload: Any = None


class EventCalendar:
    """Priority-ordered pending events plus the clock they drive."""

    def __init__(self, start: float = 0.0):
        if start < 0:
            raise ValueError("clock cannot start before t=0")
        self.now = float(start)
        self._heap: list[tuple[float, int, Callable[..., Any], Any]] = []
        self._seq = 0

    def __len__(self) -> int:
        return len(self._heap)

    def schedule(self, time: float, action: Callable[..., Any], payload: Any = None) -> int:
        """Insert an event and return its sequence number."""
        if time < self.now:
            raise SchedulingError(f"event at t={time!r} is before clock t={self.now!r}")
        seq = self._seq
        self._seq += 1
        heapq.heappush(self._heap, (float(time), seq, action, payload))
        return seq

    def peek_time(self) -> Optional[float]:
        return self._heap[0][0] if self._heap else None

    def advance(self) -> Optional[Event]:
        """Pop the earliest event and move the clock to it.

        Returns None once the calendar is empty (end of run).
        """
        if not self._heap:
            return None
        time, seq, action, payload = heapq.heappop(self._heap)
        self.now = time
        return Event(time, seq, action, payload)

    def run(self, until: float = float("inf"), observer: Optional[Callable[[Event], None]] = None) -> float:
        """Fire events in order until the calendar empties or the next event is past ``until``.

        The clock is left at ``until`` when the horizon is finite, so
        accumulators can be flushed there.
        """
        heap = self._heap
        while heap and heap[0][0] <= until:
            time, seq, action, payload = heapq.heappop(heap)
            self.now = time
            if observer is not None:
                observer(Event(time, seq, action, payload))
            action(payload)
        if until != float("inf"):
            self.now = max(self.now, until)
        return self.now
