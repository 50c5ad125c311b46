"""Trace invariants of one replication, shared by the unit and acceptance suites.

Each check returns a list of violation messages; empty means it holds.
"""

import numpy as np

from caresim.des.streams import StreamFactory
from caresim.model import pykernel
from caresim.model.engine import MINUTES, draw_inputs, kernel_args, shift_table, summarize

EVENING_FROM, DAY_FROM = 21.0, 7.0


class Trace:
    """Python-kernel run with per-event state probes."""

    def __init__(self, model, replication, seed):
        self.model = model
        self.inputs = draw_inputs(model, StreamFactory(seed, replication))
        self.table = shift_table(model)
        self.system = pykernel.CareSystem(*kernel_args(model, self.inputs, self.table))
        self.max_cap = np.vstack([self.table.cap0, self.table.capacity]).max(axis=0)
        self.times = []
        self.capacity_violations = []
        prev = [(0, c) for c in self.table.cap0]

        def probe(ev):
            self.times.append(ev.time)
            for r, res in enumerate(self.system.resources):
                busy, cap = res.busy, res.capacity
                if busy < 0 or busy > self.max_cap[r]:
                    self.capacity_violations.append(f"{res.name} busy={busy} at t={ev.time}")
                # above capacity only while draining after a decrease: busy may not grow
                if busy > cap and busy > prev[r][0]:
                    self.capacity_violations.append(f"{res.name} granted during drain at t={ev.time}")
                prev[r] = (busy, cap)

        self.raw = self.system.run(probe)
        self.summary = summarize(model, replication, self.inputs, self.raw)


def event_monotonicity(tr):
    d = np.diff(tr.times)
    return [] if np.all(d >= 0) else [f"{int((d < 0).sum())} backward steps"]


def capacity_bounds(tr):
    return tr.capacity_violations[:5]


def conservation(tr):
    s = tr.summary
    out = []
    if s.n_created != len(tr.inputs.arrivals):
        out.append(f"created {s.n_created} != arrivals {len(tr.inputs.arrivals)}")
    if s.n_created != s.n_completed + s.n_in_system:
        out.append("created != completed + in system")
    in_service = sum(r.busy for r in tr.system.resources)
    in_queue = sum(len(r.queue) for r in tr.system.resources)
    if s.n_in_system != in_service + in_queue:
        out.append(f"in system {s.n_in_system} != busy {in_service} + queued {in_queue}")
    return out


def _enqueue_time(t_request, routed_at_request, final):
    """When the patient joined the queue of the resource that served it."""
    if routed_at_request == final:
        return t_request
    h = t_request % 24.0
    day = t_request - h
    if DAY_FROM <= h < EVENING_FROM:
        return day + EVENING_FROM
    return day + DAY_FROM if h < DAY_FROM else day + 24.0 + DAY_FROM


def fifo(tr):
    raw, out = tr.raw, []
    grants = raw["t_cc_grant"]
    g = grants[~np.isnan(grants)]
    # one FIFO queue in front of the call center: grants follow call order
    if np.any(np.diff(g) < 0):
        out.append("call center served out of order")
    sysm = tr.system
    for r, res in enumerate(sysm.resources):
        if r == sysm.cc:
            continue
        rows = []
        for p in np.flatnonzero(raw["nurse_res"] == r):
            t_req = raw["t_request"][p]
            first = sysm.route(p, t_req)
            enq = _enqueue_time(t_req, first, r)
            if raw["t_nurse"][p] > enq:
                rows.append((enq, t_req, p, raw["t_nurse"][p]))
        rows.sort()
        served = [x[3] for x in rows]
        if any(b < a for a, b in zip(served, served[1:])):
            out.append(f"{res.name} served out of order")
    return out


def timestamp_order(tr):
    raw, t_call = tr.raw, tr.inputs.arrivals
    done = ~np.isnan(raw["t_end"])
    arrived = t_call[done] + tr.inputs.transfer[done]
    chain = [t_call[done], raw["t_cc_grant"][done], raw["t_request"][done], raw["t_nurse"][done],
             raw["t_nurse"][done] + tr.inputs.transfer[done], raw["t_end"][done]]
    bad = sum(int(np.sum(b < a)) for a, b in zip(chain, chain[1:]))
    out = [f"{bad} out-of-order timestamps"] if bad else []
    if np.any(arrived > raw["t_end"][done]):
        out.append("service ended before the nurse could arrive")
    # each served patient has exactly one nurse resource, never the call center
    served = ~np.isnan(raw["t_nurse"])
    if np.any(raw["nurse_res"][served] < 0) or np.any(raw["nurse_res"][served] == tr.system.cc):
        out.append("served patient without a nurse resource")
    return out


def utilization_range(tr):
    vals = [v for v in tr.summary.utilization.values() if v is not None]
    bad = [v for v in vals if not 0.0 <= v <= 1.0]
    return [f"utilization out of [0,1]: {bad[:3]}"] if bad else []


def transfer_range(tr):
    served = ~np.isnan(tr.raw["t_nurse"])
    x = tr.inputs.transfer[served] * MINUTES
    return [] if x.size == 0 or (x.min() >= 4.0 and x.max() <= 10.0) else [f"transfer [{x.min()}, {x.max()}]"]


def assist_range(tr):
    served = ~np.isnan(tr.raw["t_nurse"])
    x = tr.inputs.assist[served] * MINUTES
    return [] if x.size == 0 or (x.min() >= 10.0 and x.max() <= 60.0) else [f"assist [{x.min()}, {x.max()}]"]


CHECKS = {
    "event-time monotonicity": event_monotonicity,
    "entity conservation": conservation,
    "capacity bounds": capacity_bounds,
    "FIFO grant order": fifo,
    "timestamp ordering": timestamp_order,
    "utilization in [0,1]": utilization_range,
    "transfer in [4,10] min": transfer_range,
    "assistance in [10,60] min": assist_range,
}
