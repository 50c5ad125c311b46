"""Replication driver: draws variates, runs a kernel, summarizes the run.

The compiled kernel is used when importable; set ``CARESIM_KERNEL=python``
(or pass ``kernel="python"``) to force the pure-Python path.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

import numpy as np

from ..arrivals import RateSchedule, calibrate_from_monthly_counts, generate_arrivals
from ..des.streams import StreamFactory
from . import pykernel
from .routing import ResourceLayout, capacity_schedules, zone_probabilities
from .tables import MONTH_DAYS, MONTHLY_CALLS, CareNetwork

try:
    from .._fastkernel import run_replication as _compiled_kernel
except ImportError:  # pragma: no cover - depends on the build
    _compiled_kernel = None

HAVE_COMPILED = _compiled_kernel is not None
DAY_TYPES = ("weekday", "weekend")
MINUTES = 60.0


def get_kernel(name: Optional[str] = None) -> Callable[..., dict]:
    name = name or os.environ.get("CARESIM_KERNEL", "auto")
    if name == "python":
        return pykernel.run_replication
    if name == "compiled":
        if _compiled_kernel is None:
            raise RuntimeError("compiled kernel is not available in this build")
        return _compiled_kernel
    if name == "auto":
        return _compiled_kernel or pykernel.run_replication
    raise ValueError(f"unknown kernel {name!r}")


def active_kernel_name(name: Optional[str] = None) -> str:
    k = get_kernel(name)
    return "python" if k is pykernel.run_replication else "compiled"


@dataclass(frozen=True)
class CareModel:
    """Everything a replication needs besides its random streams."""

    network: CareNetwork = field(default_factory=CareNetwork)
    rates: RateSchedule = field(
        default_factory=lambda: calibrate_from_monthly_counts(MONTHLY_CALLS, MONTH_DAYS)
    )
    horizon_days: float = MONTH_DAYS

    @property
    def horizon(self) -> float:
        return self.horizon_days * 24.0

    @property
    def layout(self) -> ResourceLayout:
        return ResourceLayout.for_network(self.network)


@dataclass
class ReplicationInputs:
    arrivals: np.ndarray
    zone: np.ndarray  # 0-based zone index
    operator: np.ndarray  # hours
    contact: np.ndarray
    transfer: np.ndarray
    assist: np.ndarray

    @property
    def cc_service(self) -> np.ndarray:
        return self.operator + self.contact


def draw_inputs(model: CareModel, streams: StreamFactory) -> ReplicationInputs:
    """Pre-draw every variate of one replication, one stream per family.

    Patient ``i`` always receives the ``i``-th draw of each family, so
    scenarios that share a seed share their random numbers.
    """
    svc = model.network.service
    arrivals = generate_arrivals(model.rates, model.horizon, streams("arrivals"))
    n = len(arrivals)
    zone = streams("zone").choice(len(model.network.zones), size=n, p=zone_probabilities(model.network))
    return ReplicationInputs(
        arrivals=arrivals,
        zone=np.asarray(zone, dtype=np.int64),
        operator=streams("operator").uniform(svc.operator_min, svc.operator_max, n) / MINUTES,
        contact=streams("contact").uniform(svc.contact_min, svc.contact_max, n) / MINUTES,
        transfer=streams("transfer").uniform(svc.transfer_min, svc.transfer_max, n) / MINUTES,
        assist=streams("assist").uniform(svc.assist_min, svc.assist_max, n) / MINUTES,
    )


@dataclass(frozen=True)
class ShiftTable:
    times: np.ndarray  # boundary times in (0, horizon)
    capacity: np.ndarray  # [boundary, resource]
    labels: np.ndarray  # day-type index in force after each boundary
    cap0: np.ndarray
    label0: int


def shift_table(model: CareModel) -> ShiftTable:
    scheds = capacity_schedules(model.network)
    horizon = model.horizon
    times = sorted({t for s in scheds for t in s.breakpoints(horizon) if t < horizon})
    cap = np.array([[s.value(t) for s in scheds] for t in times], dtype=np.int64).reshape(len(times), len(scheds))
    labels = np.array([DAY_TYPES.index(scheds[0].label(t)) for t in times], dtype=np.int64)
    return ShiftTable(
        times=np.array(times, dtype=float),
        capacity=cap,
        labels=labels,
        cap0=np.array([s.value(0.0) for s in scheds], dtype=np.int64),
        label0=DAY_TYPES.index(scheds[0].label(0.0)),
    )


def kernel_args(model: CareModel, inputs: ReplicationInputs, table: Optional[ShiftTable] = None) -> tuple:
    layout = model.layout
    table = table or shift_table(model)
    return (
        inputs.arrivals,
        inputs.zone,
        inputs.cc_service,
        inputs.transfer,
        inputs.assist,
        np.array(layout.group_of_zone, dtype=np.int64),
        np.array(layout.patrol_of_zone, dtype=np.int64),
        layout.call_center,
        model.horizon,
        table.times,
        table.capacity,
        table.labels,
        table.cap0,
        table.label0,
        list(layout.names),
    )


@dataclass
class ReplicationSummary:
    """Per-replication outputs. Times are in minutes; undefined values are None."""

    replication: int
    band_counts: dict[str, int]
    n_created: int
    n_served: int
    n_completed: int
    n_in_system: int
    evening_arrivals: int
    mean_call_center_time: Optional[float]
    mean_transfer_time: Optional[float]
    mean_total_wait: Optional[float]
    p95_total_wait: Optional[float]
    max_total_wait: Optional[float]
    mean_queue_wait: Optional[float]
    max_queue_wait: float
    mean_assistance_time: Optional[float]
    # keyed by (resource name, day type); day type "all" aggregates both.
    # Mean queue wait is over all requests, zero waits included.
    utilization: dict[tuple[str, str], Optional[float]]
    queue_wait_mean: dict[tuple[str, str], Optional[float]]
    queue_wait_max: dict[tuple[str, str], float]
    queue_len_max: dict[tuple[str, str], int]
    time_avg_queue_length: dict[str, float]
    max_queue_length: dict[str, int]
    trace: Any = field(default=None, repr=False, compare=False)


def band_counts(rates: RateSchedule, times: np.ndarray) -> dict[str, int]:
    hours = np.asarray(times) % 24.0
    out = {}
    for b in rates.bands:
        if b.start < b.end:
            m = (hours >= b.start) & (hours < b.end)
        else:
            m = (hours >= b.start) | (hours < b.end)
        out[b.key] = int(m.sum())
    return out


def summarize(model: CareModel, replication: int, inputs: ReplicationInputs, raw: dict) -> ReplicationSummary:
    layout = model.layout
    horizon = model.horizon
    t_call = inputs.arrivals
    served = ~np.isnan(raw["t_nurse"])
    cc_time = (raw["t_nurse"][served] - t_call[served]) * MINUTES
    transfer = inputs.transfer[served] * MINUTES
    total = cc_time + transfer
    qwait = (raw["t_nurse"][served] - raw["t_request"][served]) * MINUTES
    completed = ~np.isnan(raw["t_end"])
    hours = t_call % 24.0
    evening = int(((hours >= 21.0) | (hours < 7.0)).sum())

    def _mean(a):
        return float(a.mean()) if a.size else None

    util, qmean, qmax, qlen = {}, {}, {}, {}
    busy, cap = raw["busy_time"], raw["capacity_time"]
    for r, name in enumerate(layout.names):
        for j, dt in enumerate(DAY_TYPES):
            util[(name, dt)] = float(busy[r, j] / cap[r, j]) if cap[r, j] > 0 else None
            c = int(raw["requests"][r, j])
            qmean[(name, dt)] = float(raw["qwait_sum"][r, j] / c * MINUTES) if c else None
            qmax[(name, dt)] = float(raw["qwait_max"][r, j] * MINUTES)
            qlen[(name, dt)] = int(raw["qlen_max"][r, j])
        ctot = cap[r].sum()
        util[(name, "all")] = float(busy[r].sum() / ctot) if ctot > 0 else None
        c = int(raw["requests"][r].sum())
        qmean[(name, "all")] = float(raw["qwait_sum"][r].sum() / c * MINUTES) if c else None
        qmax[(name, "all")] = float(raw["qwait_max"][r].max() * MINUTES)
        qlen[(name, "all")] = int(raw["qlen_max"][r].max())

    nurse_rows = [r for r, k in enumerate(layout.kinds) if k != "call_center"]
    return ReplicationSummary(
        replication=replication,
        band_counts=band_counts(model.rates, t_call),
        n_created=int(raw["n_created"]),
        n_served=int(served.sum()),
        n_completed=int(completed.sum()),
        n_in_system=int(raw["n_created"]) - int(completed.sum()),
        evening_arrivals=evening,
        mean_call_center_time=_mean(cc_time),
        mean_transfer_time=_mean(transfer),
        mean_total_wait=_mean(total),
        p95_total_wait=float(np.percentile(total, 95)) if total.size else None,
        max_total_wait=float(total.max()) if total.size else None,
        mean_queue_wait=_mean(qwait),
        max_queue_wait=float(raw["qwait_max"][nurse_rows].max() * MINUTES) if nurse_rows else 0.0,
        mean_assistance_time=_mean(inputs.assist[served] * MINUTES),
        utilization=util,
        queue_wait_mean=qmean,
        queue_wait_max=qmax,
        queue_len_max=qlen,
        time_avg_queue_length={n: float(raw["qlen_integral"][r] / horizon) for r, n in enumerate(layout.names)},
        max_queue_length={n: int(raw["qlen_max"][r].max()) for r, n in enumerate(layout.names)},
    )


def run_replication(
    model: CareModel,
    replication: int,
    master_seed: int,
    kernel: Optional[str] = None,
    keep_trace: bool = False,
    table: Optional[ShiftTable] = None,
) -> ReplicationSummary:
    inputs = draw_inputs(model, StreamFactory(master_seed, replication))
    raw = get_kernel(kernel)(*kernel_args(model, inputs, table))
    summary = summarize(model, replication, inputs, raw)
    if keep_trace:
        summary.trace = {"inputs": inputs, "raw": raw}
    return summary
