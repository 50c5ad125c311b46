"""Generic discrete-event kernel (clock in hours)."""

from .accumulators import TallyStat, TimeWeightedStat
from .calendar import Event, EventCalendar, SchedulingError
from .resource import Resource, ResourceError
from .schedule import ConstantSchedule, PeriodicSchedule
from .streams import RandomStream, StreamFactory

__all__ = [
    "ConstantSchedule",
    "Event",
    "EventCalendar",
    "PeriodicSchedule",
    "RandomStream",
    "Resource",
    "ResourceError",
    "SchedulingError",
    "StreamFactory",
    "TallyStat",
    "TimeWeightedStat",
]
