"""Calendar classification, zone sampling and nurse-resource routing.

The clock origin t=0 is Monday 00:00. Evening is the half-open band
[21:00, 07:00) so it lines up with the call-count bands.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..des.schedule import PeriodicSchedule
from ..des.streams import RandomStream
from .tables import CareNetwork

HOURS_PER_WEEK = 168.0
WEEKEND_AFTER = 120.0
EVENING_FROM = 21.0
DAY_FROM = 7.0


class DayType(str, Enum):
    WEEKDAY = "weekday"
    WEEKEND = "weekend"


class Shift(str, Enum):
    DAY = "day"
    EVENING = "evening"


def classify_day_type(t: float) -> DayType:
    return DayType.WEEKEND if t % HOURS_PER_WEEK > WEEKEND_AFTER else DayType.WEEKDAY


def classify_shift(t: float) -> Shift:
    h = t % 24.0
    return Shift.EVENING if (h >= EVENING_FROM or h < DAY_FROM) else Shift.DAY


def zone_probabilities(network: CareNetwork) -> np.ndarray:
    w = np.array([z.weight for z in network.zones], dtype=float)
    return w / w.sum()


def assign_zone(network: CareNetwork, stream: RandomStream, size: int | None = None):
    """Zone id(s) drawn with probability proportional to the zone weights."""
    ids = stream.choice(len(network.zones), size=size, p=zone_probabilities(network)) + 1
    return ids if size is not None else int(ids)


@dataclass(frozen=True)
class ResourceLayout:
    """Index layout shared by both replication kernels.

    Care groups occupy ``0..Z-1`` (zone id - 1), night patrols ``Z..Z+P-1``
    and the call center is last.
    """

    names: tuple[str, ...]
    kinds: tuple[str, ...]
    group_of_zone: tuple[int, ...]
    patrol_of_zone: tuple[int, ...]
    call_center: int

    @classmethod
    def for_network(cls, network: CareNetwork) -> "ResourceLayout":
        nz = len(network.zones)
        names = [z.name for z in network.zones] + [p.name for p in network.patrols] + ["Call Center"]
        kinds = ["care_group"] * nz + ["night_patrol"] * len(network.patrols) + ["call_center"]
        patrol_idx = {p.id: nz + k for k, p in enumerate(network.patrols)}
        return cls(
            names=tuple(names),
            kinds=tuple(kinds),
            group_of_zone=tuple(range(nz)),
            patrol_of_zone=tuple(patrol_idx[network.patrol_of(z.id).id] for z in network.zones),
            call_center=len(names) - 1,
        )

    def __len__(self) -> int:
        return len(self.names)


@dataclass(frozen=True)
class Assignment:
    index: int
    name: str
    kind: str
    capacity: int


def select_resource(network: CareNetwork, zone_id: int, day_type: DayType, shift: Shift) -> Assignment:
    """Care group of the zone during the day, its night patrol in the evening."""
    if not 1 <= zone_id <= len(network.zones):
        raise ValueError(f"zone id {zone_id} out of range")
    layout = ResourceLayout.for_network(network)
    if shift is Shift.DAY:
        z = network.zones[zone_id - 1]
        cap = z.weekday_staff if day_type is DayType.WEEKDAY else z.weekend_staff
        idx = layout.group_of_zone[zone_id - 1]
        return Assignment(idx, z.name, "care_group", cap)
    p = network.patrol_of(zone_id)
    return Assignment(layout.patrol_of_zone[zone_id - 1], p.name, "night_patrol", p.units)


def _week_segments() -> tuple[list[float], list[Shift], list[DayType]]:
    starts, shifts, days = [], [], []
    for d in range(7):
        for s, e in ((0.0, DAY_FROM), (DAY_FROM, EVENING_FROM), (EVENING_FROM, 24.0)):
            t0 = d * 24.0 + s
            mid = d * 24.0 + (s + e) / 2
            starts.append(t0)
            shifts.append(classify_shift(mid))
            days.append(classify_day_type(mid))
    return starts, shifts, days


def capacity_schedules(network: CareNetwork) -> list[PeriodicSchedule]:
    """Weekly capacity schedule for every resource, in layout order.

    Care groups are on duty only on the day shift (zone headcount for the
    day type); patrols only in the evening; the call center always.
    Segments are labelled with their day type for split statistics.
    """
    starts, shifts, days = _week_segments()
    labels = [d.value for d in days]
    out = []
    for z in network.zones:
        vals = [
            0 if sh is Shift.EVENING else (z.weekday_staff if dt is DayType.WEEKDAY else z.weekend_staff)
            for sh, dt in zip(shifts, days)
        ]
        out.append(PeriodicSchedule(HOURS_PER_WEEK, starts, vals, labels))
    for p in network.patrols:
        vals = [p.units if sh is Shift.EVENING else 0 for sh in shifts]
        out.append(PeriodicSchedule(HOURS_PER_WEEK, starts, vals, labels))
    out.append(PeriodicSchedule(HOURS_PER_WEEK, starts, [network.service.call_center_capacity] * len(starts), labels))
    return out
