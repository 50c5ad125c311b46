"""Built-in Växjö data: care-group staffing, night-patrol coverage, call counts."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Zone:
    id: int
    name: str
    weekday_staff: int
    weekend_staff: int
    arrival_weight: float | None = None

    @property
    def weight(self) -> float:
        return float(self.weekday_staff if self.arrival_weight is None else self.arrival_weight)


@dataclass(frozen=True)
class NightPatrol:
    id: int
    name: str
    zone_ids: frozenset[int]
    units: int = 6


ZONES: tuple[Zone, ...] = (
    Zone(1, "Anna Trolle", 19, 11),
    Zone(2, "Dalbo", 12, 7),
    Zone(3, "Teleborg", 13, 9),
    Zone(4, "Rottne", 9, 9),
    Zone(5, "Centrum", 16, 8),
    Zone(6, "Söder", 10, 7),
    Zone(7, "Lammhult", 15, 6),
    Zone(8, "Lassaskog", 12, 7),
    Zone(9, "Öjaby", 10, 6),
    Zone(10, "Sandsbro", 10, 6),
    Zone(11, "Hovslund", 7, 6),
    Zone(12, "Borgmästaren", 9, 5),
    Zone(13, "Öster", 10, 6),
    Zone(14, "Öster Åryd", 5, 3),
    Zone(15, "Kinnevald", 9, 5),
    Zone(16, "Gemla", 5, 4),
    Zone(17, "Kvarngården", 10, 5),
    Zone(18, "Sjöliden", 9, 4),
)

PATROLS: tuple[NightPatrol, ...] = (
    NightPatrol(1, "North", frozenset({18, 4, 7})),
    NightPatrol(2, "East", frozenset({10, 11, 13, 14, 1})),
    NightPatrol(3, "South", frozenset({2, 6, 17, 3})),
    NightPatrol(4, "West", frozenset({5, 8, 12, 9, 16, 15})),
)

# (start_hour, end_hour, calls in November 2013)
MONTHLY_CALLS: tuple[tuple[float, float, int], ...] = (
    (7, 10, 1193),
    (10, 14, 1776),
    (14, 16, 860),
    (16, 21, 1750),
    (21, 7, 2284),
)

MONTH_DAYS = 30


@dataclass(frozen=True)
class ServiceTimes:
    """Delay parameters in minutes; call-center knobs are calibrated defaults."""

    transfer_min: float = 4.0
    transfer_max: float = 10.0
    assist_min: float = 10.0
    assist_max: float = 60.0
    # one operator: puts the waiting-time knee between +10% and +15% load
    operator_min: float = 1.5
    operator_max: float = 2.8
    contact_min: float = 1.0
    contact_max: float = 2.0
    call_center_capacity: int = 1

    def __post_init__(self):
        for lo, hi in (
            ("transfer_min", "transfer_max"),
            ("assist_min", "assist_max"),
            ("operator_min", "operator_max"),
            ("contact_min", "contact_max"),
        ):
            a, b = getattr(self, lo), getattr(self, hi)
            if not 0 < a <= b:
                raise ValueError(f"need 0 < {lo} <= {hi}, got {a}, {b}")
        if self.call_center_capacity < 1:
            raise ValueError("call_center_capacity must be at least 1")


@dataclass(frozen=True)
class CareNetwork:
    zones: tuple[Zone, ...] = ZONES
    patrols: tuple[NightPatrol, ...] = PATROLS
    service: ServiceTimes = field(default_factory=ServiceTimes)

    def __post_init__(self):
        ids = [z.id for z in self.zones]
        if ids != list(range(1, len(ids) + 1)):
            raise ValueError("zone ids must be 1..N in order")
        covered = sorted(i for p in self.patrols for i in p.zone_ids)
        if covered != ids:
            raise ValueError("night patrol zone sets must partition the zones")
        if any(z.weight < 0 for z in self.zones) or not sum(z.weight for z in self.zones) > 0:
            raise ValueError("zone arrival weights must be non-negative with a positive sum")
        if any(p.units < 1 for p in self.patrols):
            raise ValueError("patrol units must be positive")

    def patrol_of(self, zone_id: int) -> NightPatrol:
        for p in self.patrols:
            if zone_id in p.zone_ids:
                return p
        raise KeyError(zone_id)
