# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled replication kernel.

Same state machine as ``model.pykernel.CareSystem`` on flat arrays: a
binary heap keyed by (time, seq), intrusive FIFO queues via a per-patient
``next`` link, and per-(resource, day-type) accumulators. Floating-point
operations happen in the same order as the Python kernel.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport fmod

cnp.import_array()

DEF EV_SHIFT = 0
DEF EV_ARRIVAL = 1
DEF EV_CALL_DONE = 2
DEF EV_NURSE_DONE = 3


cdef struct Heap:
    double *time
    long long *seq
    int *kind
    long long *arg
    Py_ssize_t size
    long long next_seq


cdef inline bint _less(Heap *h, Py_ssize_t a, Py_ssize_t b) noexcept nogil:
    if h.time[a] < h.time[b]:
        return True
    if h.time[a] > h.time[b]:
        return False
    return h.seq[a] < h.seq[b]


cdef inline void _swap(Heap *h, Py_ssize_t a, Py_ssize_t b) noexcept nogil:
    cdef double t = h.time[a]
    cdef long long s = h.seq[a]
    cdef int k = h.kind[a]
    cdef long long g = h.arg[a]
    h.time[a] = h.time[b]; h.seq[a] = h.seq[b]; h.kind[a] = h.kind[b]; h.arg[a] = h.arg[b]
    h.time[b] = t; h.seq[b] = s; h.kind[b] = k; h.arg[b] = g


cdef inline void _push(Heap *h, double t, int kind, long long arg) noexcept nogil:
    cdef Py_ssize_t i = h.size
    cdef Py_ssize_t parent
    h.time[i] = t
    h.seq[i] = h.next_seq
    h.kind[i] = kind
    h.arg[i] = arg
    h.next_seq += 1
    h.size += 1
    while i > 0:
        parent = (i - 1) >> 1
        if _less(h, i, parent):
            _swap(h, i, parent)
            i = parent
        else:
            break


cdef inline void _pop(Heap *h) noexcept nogil:
    cdef Py_ssize_t i = 0, l, r, m
    h.size -= 1
    if h.size == 0:
        return
    h.time[0] = h.time[h.size]; h.seq[0] = h.seq[h.size]
    h.kind[0] = h.kind[h.size]; h.arg[0] = h.arg[h.size]
    while True:
        l = 2 * i + 1
        r = l + 1
        m = i
        if l < h.size and _less(h, l, m):
            m = l
        if r < h.size and _less(h, r, m):
            m = r
        if m == i:
            break
        _swap(h, i, m)
        i = m


cdef class _State:
    cdef Heap heap
    cdef double now
    cdef int n_res, cc
    cdef Py_ssize_t n
    # resources
    cdef long long[::1] busy, cap, label, qhead, qtail, qlen, qlen_prev
    cdef double[::1] last, qlen_last_t, qlen_int
    cdef double[:, ::1] busy_time, cap_time, qw_sum, qw_max
    cdef long long[:, ::1] qw_count, qlen_max, requests
    # patients
    cdef long long[::1] qnext, q_label, zone, nurse_res, routed_res
    cdef double[::1] q_enter, arrivals, cc_service, transfer, assist
    cdef double[::1] t_cc_grant, t_request, t_nurse, t_end
    cdef long long[::1] group_of_zone, patrol_of_zone

    cdef inline void accrue(self, int r) noexcept nogil:
        cdef double dt = self.now - self.last[r]
        cdef long long c, b
        if dt > 0:
            c = self.cap[r]
            b = self.busy[r]
            if c < b:
                b = c
            self.busy_time[r, self.label[r]] += <double>b * dt
            self.cap_time[r, self.label[r]] += <double>c * dt
        self.last[r] = self.now

    cdef inline void qlen_record(self, int r) noexcept nogil:
        self.qlen_int[r] += <double>self.qlen_prev[r] * (self.now - self.qlen_last_t[r])
        self.qlen_last_t[r] = self.now

    cdef inline void tally_wait(self, int r, long long lab, double w) noexcept nogil:
        self.qw_sum[r, lab] += w
        self.qw_count[r, lab] += 1
        if w > self.qw_max[r, lab]:
            self.qw_max[r, lab] = w

    cdef inline long long grant_head(self, int r) noexcept nogil:
        cdef long long p = self.qhead[r]
        self.qhead[r] = self.qnext[p]
        if self.qhead[r] < 0:
            self.qtail[r] = -1
        self.qlen[r] -= 1
        self.busy[r] += 1
        self.tally_wait(r, self.q_label[p], self.now - self.q_enter[p])
        self.qlen_record(r)
        self.qlen_prev[r] = self.qlen[r]
        return p

    cdef inline bint seize(self, int r, long long p) noexcept nogil:
        self.accrue(r)
        self.requests[r, self.label[r]] += 1
        if self.busy[r] < self.cap[r]:
            self.busy[r] += 1
            return True
        self.qnext[p] = -1
        if self.qtail[r] >= 0:
            self.qnext[self.qtail[r]] = p
        else:
            self.qhead[r] = p
        self.qtail[r] = p
        self.q_enter[p] = self.now
        self.q_label[p] = self.label[r]
        self.qlen[r] += 1
        self.qlen_record(r)
        self.qlen_prev[r] = self.qlen[r]
        if self.qlen[r] > self.qlen_max[r, self.label[r]]:
            self.qlen_max[r, self.label[r]] = self.qlen[r]
        return False

    cdef inline long long release(self, int r) except -2:
        self.accrue(r)
        if self.busy[r] <= 0:
            raise RuntimeError("release with no unit busy")
        self.busy[r] -= 1
        if self.qlen[r] > 0 and self.busy[r] < self.cap[r]:
            return self.grant_head(r)
        return -1

    cdef inline int route(self, long long p) noexcept nogil:
        cdef double h = fmod(self.now, 24.0)
        if h >= 21.0 or h < 7.0:
            return <int>self.patrol_of_zone[self.zone[p]]
        return <int>self.group_of_zone[self.zone[p]]

    cdef inline void start_call(self, long long p) noexcept nogil:
        self.t_cc_grant[p] = self.now
        _push(&self.heap, self.now + self.cc_service[p], EV_CALL_DONE, p)

    cdef inline void start_nurse(self, long long p, int r) noexcept nogil:
        self.t_nurse[p] = self.now
        self.nurse_res[p] = r
        _push(&self.heap, (self.now + self.transfer[p]) + self.assist[p], EV_NURSE_DONE, p)


def run_replication(arrivals, zone, cc_service, transfer, assist,
                    group_of_zone, patrol_of_zone, int call_center, double horizon,
                    bound_t, bound_cap, bound_label, cap0, int label0, names=None):
    cdef _State s = _State()
    cdef Py_ssize_t n = len(arrivals)
    cdef Py_ssize_t nb = len(bound_t)
    cdef int n_res = len(cap0)
    cdef int r, r2
    cdef Py_ssize_t k
    cdef long long p, g, head, n_created = 0, n_events = 0
    cdef int kind
    cdef double t
    cdef long long lab

    s.n = n
    s.n_res = n_res
    s.cc = call_center
    s.now = 0.0
    s.arrivals = np.ascontiguousarray(arrivals, dtype=np.float64)
    s.zone = np.ascontiguousarray(zone, dtype=np.int64)
    s.cc_service = np.ascontiguousarray(cc_service, dtype=np.float64)
    s.transfer = np.ascontiguousarray(transfer, dtype=np.float64)
    s.assist = np.ascontiguousarray(assist, dtype=np.float64)
    s.group_of_zone = np.ascontiguousarray(group_of_zone, dtype=np.int64)
    s.patrol_of_zone = np.ascontiguousarray(patrol_of_zone, dtype=np.int64)
    cdef double[::1] bt = np.ascontiguousarray(bound_t, dtype=np.float64)
    cdef long long[:, ::1] bcap = np.ascontiguousarray(np.reshape(bound_cap, (nb, n_res)), dtype=np.int64)
    cdef long long[::1] blab = np.ascontiguousarray(bound_label, dtype=np.int64)

    s.busy = np.zeros(n_res, dtype=np.int64)
    s.cap = np.ascontiguousarray(cap0, dtype=np.int64).copy()
    s.label = np.full(n_res, label0, dtype=np.int64)
    s.qhead = np.full(n_res, -1, dtype=np.int64)
    s.qtail = np.full(n_res, -1, dtype=np.int64)
    s.qlen = np.zeros(n_res, dtype=np.int64)
    s.qlen_prev = np.zeros(n_res, dtype=np.int64)
    s.last = np.zeros(n_res)
    s.qlen_last_t = np.zeros(n_res)
    s.qlen_int = np.zeros(n_res)
    busy_time = np.zeros((n_res, 2)); s.busy_time = busy_time
    cap_time = np.zeros((n_res, 2)); s.cap_time = cap_time
    qw_sum = np.zeros((n_res, 2)); s.qw_sum = qw_sum
    qw_max = np.zeros((n_res, 2)); s.qw_max = qw_max
    qw_count = np.zeros((n_res, 2), dtype=np.int64); s.qw_count = qw_count
    qlen_max = np.zeros((n_res, 2), dtype=np.int64); s.qlen_max = qlen_max
    requests = np.zeros((n_res, 2), dtype=np.int64); s.requests = requests
    qlen_int = np.asarray(s.qlen_int)

    s.qnext = np.full(max(n, 1), -1, dtype=np.int64)
    s.q_label = np.zeros(max(n, 1), dtype=np.int64)
    s.q_enter = np.zeros(max(n, 1))
    t_cc_grant = np.full(n, np.nan); s.t_cc_grant = t_cc_grant
    t_request = np.full(n, np.nan); s.t_request = t_request
    t_nurse = np.full(n, np.nan); s.t_nurse = t_nurse
    t_end = np.full(n, np.nan); s.t_end = t_end
    nurse_res = np.full(n, -1, dtype=np.int64); s.nurse_res = nurse_res
    routed_res = np.full(n, -1, dtype=np.int64); s.routed_res = routed_res

    cdef Py_ssize_t cap_heap = 2 * n + nb + 4
    h_time = np.empty(cap_heap)
    h_seq = np.empty(cap_heap, dtype=np.int64)
    h_kind = np.empty(cap_heap, dtype=np.int32)
    h_arg = np.empty(cap_heap, dtype=np.int64)
    cdef double[::1] vt = h_time
    cdef long long[::1] vs = h_seq
    cdef int[::1] vk = h_kind
    cdef long long[::1] va = h_arg
    s.heap.time = &vt[0]
    s.heap.seq = &vs[0]
    s.heap.kind = &vk[0]
    s.heap.arg = &va[0]
    s.heap.size = 0
    s.heap.next_seq = 0

    for k in range(nb):
        _push(&s.heap, bt[k], EV_SHIFT, k)
    if n > 0:
        _push(&s.heap, s.arrivals[0], EV_ARRIVAL, 0)

    while s.heap.size > 0 and s.heap.time[0] <= horizon:
        t = s.heap.time[0]
        kind = s.heap.kind[0]
        p = s.heap.arg[0]
        _pop(&s.heap)
        s.now = t
        n_events += 1

        if kind == EV_ARRIVAL:
            n_created += 1
            if p + 1 < n:
                _push(&s.heap, s.arrivals[p + 1], EV_ARRIVAL, p + 1)
            if s.seize(s.cc, p):
                s.start_call(p)

        elif kind == EV_CALL_DONE:
            s.t_request[p] = s.now
            g = s.release(s.cc)
            if g >= 0:
                s.start_call(g)
            r = s.route(p)
            s.routed_res[p] = r
            if s.seize(r, p):
                s.start_nurse(p, r)

        elif kind == EV_NURSE_DONE:
            s.t_end[p] = s.now
            r = <int>s.nurse_res[p]
            g = s.release(r)
            if g >= 0:
                s.start_nurse(g, r)

        else:  # EV_SHIFT
            k = p
            lab = blab[k]
            for r in range(n_res):
                s.accrue(r)
                s.cap[r] = bcap[k, r]
                s.label[r] = lab
                while s.qlen[r] > 0 and s.busy[r] < s.cap[r]:
                    g = s.grant_head(r)
                    if r == s.cc:
                        s.start_call(g)
                    else:
                        s.start_nurse(g, r)
            # off duty with patients waiting: hand them to the resource now on duty,
            # merged across queues in order of their original queue entry
            moved = []
            for r in range(n_res):
                if r == s.cc or bcap[k, r] != 0 or s.qlen[r] == 0:
                    continue
                s.accrue(r)
                head = s.qhead[r]
                s.qhead[r] = -1
                s.qtail[r] = -1
                s.qlen[r] = 0
                g = head
                while g >= 0:
                    s.tally_wait(r, s.q_label[g], s.now - s.q_enter[g])
                    moved.append((s.q_enter[g], g))
                    g = s.qnext[g]
                s.qlen_record(r)
                s.qlen_prev[r] = 0
            if moved:
                moved.sort()
                for _, g in moved:
                    r2 = s.route(g)
                    s.routed_res[g] = r2
                    if s.seize(r2, g):
                        s.start_nurse(g, r2)

    for r in range(n_res):
        s.now = horizon
        s.accrue(r)
        s.qlen_record(r)

    return {
        "t_cc_grant": t_cc_grant,
        "t_request": t_request,
        "t_nurse": t_nurse,
        "t_end": t_end,
        "nurse_res": nurse_res,
        "routed_res": routed_res,
        "n_created": int(n_created),
        "n_events": int(n_events),
        "busy_time": busy_time,
        "capacity_time": cap_time,
        "qwait_sum": qw_sum,
        "qwait_max": qw_max,
        "qwait_count": qw_count,
        "qlen_max": qlen_max,
        "requests": requests,
        "qlen_integral": qlen_int,
    }
