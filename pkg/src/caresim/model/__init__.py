"""Växjö care-alarm dispatch model."""

from .engine import CareModel, ReplicationSummary, run_replication
from .routing import DayType, Shift, classify_day_type, classify_shift, select_resource
from .tables import PATROLS, ZONES, CareNetwork, NightPatrol, ServiceTimes, Zone

__all__ = [
    "PATROLS",
    "ZONES",
    "CareModel",
    "CareNetwork",
    "DayType",
    "NightPatrol",
    "ReplicationSummary",
    "ServiceTimes",
    "Shift",
    "Zone",
    "classify_day_type",
    "classify_shift",
    "run_replication",
    "select_resource",
]
