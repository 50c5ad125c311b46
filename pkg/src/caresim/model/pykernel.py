"""Pure-Python replication kernel built on the generic DES classes.

This is the reference path and the fallback when the compiled kernel is
unavailable. ``_fastkernel.pyx`` implements the same event logic, in the
same order, on flat arrays; the two must agree bit for bit.
"""

from __future__ import annotations

from typing import Callable, Optional

import numpy as np

from ..des.calendar import Event, EventCalendar
from ..des.resource import Resource

LABELS = ("weekday", "weekend")


class CareSystem:
    """One replication of the dispatch network driven by pre-drawn variates."""

    def __init__(
        self,
        arrivals,
        zone,
        cc_service,
        transfer,
        assist,
        group_of_zone,
        patrol_of_zone,
        call_center: int,
        horizon: float,
        bound_t,
        bound_cap,
        bound_label,
        cap0,
        label0: int,
        names: Optional[list[str]] = None,
    ):
        self.arrivals = [float(x) for x in arrivals]
        self.zone = [int(z) for z in zone]
        self.cc_service = [float(x) for x in cc_service]
        self.transfer = [float(x) for x in transfer]
        self.assist = [float(x) for x in assist]
        self.group_of_zone = [int(x) for x in group_of_zone]
        self.patrol_of_zone = [int(x) for x in patrol_of_zone]
        self.cc = int(call_center)
        self.horizon = float(horizon)
        self.bound_t = [float(x) for x in bound_t]
        self.bound_cap = np.asarray(bound_cap, dtype=np.int64).tolist()
        self.bound_label = [int(x) for x in bound_label]
        n_res = len(cap0)
        names = names or [f"r{i}" for i in range(n_res)]
        self.resources = [Resource(names[r], int(cap0[r]), 0.0, LABELS[label0]) for r in range(n_res)]
        self.calendar = EventCalendar()

        n = len(self.arrivals)
        self.t_cc_grant = [np.nan] * n
        self.t_request = [np.nan] * n
        self.t_nurse = [np.nan] * n
        self.t_end = [np.nan] * n
        self.nurse_res = [-1] * n
        self.routed_res = [-1] * n
        self.n_created = 0
        self.n_events = 0

    def route(self, p: int, now: float) -> int:
        h = now % 24.0
        if h >= 21.0 or h < 7.0:
            return self.patrol_of_zone[self.zone[p]]
        return self.group_of_zone[self.zone[p]]

    # event handlers ------------------------------------------------------

    def _on_arrival(self, p: int) -> None:
        cal = self.calendar
        now = cal.now
        self.n_created += 1
        if p + 1 < len(self.arrivals):
            cal.schedule(self.arrivals[p + 1], self._on_arrival, p + 1)
        if self.resources[self.cc].seize(p, now):
            self._start_call(p, now)

    def _start_call(self, p: int, now: float) -> None:
        self.t_cc_grant[p] = now
        self.calendar.schedule(now + self.cc_service[p], self._on_call_done, p)

    def _on_call_done(self, p: int) -> None:
        now = self.calendar.now
        self.t_request[p] = now
        g = self.resources[self.cc].release(now)
        if g is not None:
            self._start_call(g, now)
        r = self.route(p, now)
        self.routed_res[p] = r
        if self.resources[r].seize(p, now):
            self._start_nurse(p, r, now)

    def _start_nurse(self, p: int, r: int, now: float) -> None:
        self.t_nurse[p] = now
        self.nurse_res[p] = r
        self.calendar.schedule((now + self.transfer[p]) + self.assist[p], self._on_nurse_done, p)

    def _on_nurse_done(self, p: int) -> None:
        now = self.calendar.now
        self.t_end[p] = now
        r = self.nurse_res[p]
        g = self.resources[r].release(now)
        if g is not None:
            self._start_nurse(g, r, now)

    def _on_shift(self, k: int) -> None:
        now = self.calendar.now
        caps = self.bound_cap[k]
        label = LABELS[self.bound_label[k]]
        for r, res in enumerate(self.resources):
            for g in res.set_capacity(now, caps[r], label):
                if r == self.cc:
                    self._start_call(g, now)
                else:
                    self._start_nurse(g, r, now)
        # queued patients of a resource going off duty move to the one now on duty,
        # merged across queues in order of their original queue entry
        moved = []
        for r, res in enumerate(self.resources):
            if r == self.cc or caps[r] != 0 or not res.queue:
                continue
            moved.extend((t_enq, p) for p, t_enq in res.withdraw_queue(now))
        moved.sort()
        for _, p in moved:
            r2 = self.route(p, now)
            self.routed_res[p] = r2
            if self.resources[r2].seize(p, now):
                self._start_nurse(p, r2, now)

    # ---------------------------------------------------------------------

    def run(self, observer: Optional[Callable[[Event], None]] = None) -> dict:
        cal = self.calendar
        for k, t in enumerate(self.bound_t):
            cal.schedule(t, self._on_shift, k)
        if self.arrivals:
            cal.schedule(self.arrivals[0], self._on_arrival, 0)

        counter = [0]

        def _observe(ev: Event) -> None:
            counter[0] += 1
            if observer is not None:
                observer(ev)

        cal.run(self.horizon, _observe)
        self.n_events = counter[0]
        for res in self.resources:
            res.flush(self.horizon)
        return self.results()

    def results(self) -> dict:
        n_res = len(self.resources)
        busy = np.zeros((n_res, 2))
        cap = np.zeros((n_res, 2))
        qw_sum = np.zeros((n_res, 2))
        qw_count = np.zeros((n_res, 2), dtype=np.int64)
        qw_max = np.zeros((n_res, 2))
        qlen_max = np.zeros((n_res, 2), dtype=np.int64)
        requests = np.zeros((n_res, 2), dtype=np.int64)
        qlen_int = np.zeros(n_res)
        for r, res in enumerate(self.resources):
            for j, lab in enumerate(LABELS):
                busy[r, j] = res.busy_time.get(lab, 0.0)
                cap[r, j] = res.capacity_time.get(lab, 0.0)
                tally = res.queue_wait.get(lab)
                if tally is not None and tally.count:
                    qw_sum[r, j] = tally.sum
                    qw_count[r, j] = tally.count
                    qw_max[r, j] = tally.max
                qlen_max[r, j] = res.max_queue_length.get(lab, 0)
                requests[r, j] = res.requests.get(lab, 0)
            qlen_int[r] = res.queue_length.integral
        return {
            "t_cc_grant": np.array(self.t_cc_grant, dtype=float),
            "t_request": np.array(self.t_request, dtype=float),
            "t_nurse": np.array(self.t_nurse, dtype=float),
            "t_end": np.array(self.t_end, dtype=float),
            "nurse_res": np.array(self.nurse_res, dtype=np.int64),
            "routed_res": np.array(self.routed_res, dtype=np.int64),
            "n_created": self.n_created,
            "n_events": self.n_events,
            "busy_time": busy,
            "capacity_time": cap,
            "qwait_sum": qw_sum,
            "qwait_count": qw_count,
            "qwait_max": qw_max,
            "qlen_max": qlen_max,
            "requests": requests,
            "qlen_integral": qlen_int,
        }


def run_replication(*args, observer=None, **kwargs) -> dict:
    return CareSystem(*args, **kwargs).run(observer)
