import math

import pytest

from caresim.des import PeriodicSchedule, Resource, ResourceError


def test_seize_idle_then_busy():
    r = Resource("r", 1)
    assert r.seize("P1", 0.0) is True
    assert r.seize("P2", 0.0) is False
    assert [e for e, *_ in r.queue] == ["P2"]


def test_off_shift_always_enqueues():
    sched = PeriodicSchedule(24.0, [0.0, 7.0, 21.0], [0, 3, 0])
    r = Resource("day", sched, t0=2.0)
    assert r.capacity == 0 and r.busy == 0
    assert r.seize("P1", 2.0) is False


def test_release_hands_over_to_head():
    r = Resource("r", 1)
    r.seize("P1", 0.0)
    r.seize("P2", 1.0)
    assert r.release(4.0) == "P2"
    assert r.busy == 1
    assert r.queue_wait[None].sum == pytest.approx(3.0)


def test_release_empty_queue():
    r = Resource("r", 1)
    r.seize("P1", 0.0)
    assert r.release(1.0) is None
    assert r.busy == 0


def test_release_idle_is_an_error():
    with pytest.raises(ResourceError):
        Resource("r", 1).release(0.0)


def test_capacity_drop_drains_without_preemption():
    r = Resource("r", 2)
    r.seize("P1", 0.0)
    r.seize("P2", 0.0)
    assert r.set_capacity(1.0, 1) == []
    r.seize("P3", 1.0)
    assert r.release(2.0) is None  # busy 2 -> 1, still at capacity
    assert r.busy == 1 and len(r.queue) == 1
    assert r.release(3.0) == "P3"


def test_capacity_rise_grants_queue():
    r = Resource("r", 0)
    for p in ("A", "B", "C"):
        r.seize(p, 0.0)
    assert r.set_capacity(1.0, 2) == ["A", "B"]


def test_fifo_grants():
    r = Resource("r", 1)
    r.grant_log = []
    for i in range(6):
        r.seize(i, float(i))
    for t in range(6):
        r.release(10.0 + t)
    assert r.grant_log == list(range(6))


def test_effective_capacity_follows_schedule():
    sched = PeriodicSchedule(24.0, [0.0, 7.0, 21.0], [0, 12, 0])
    r = Resource("Dalbo", sched)
    assert [r.effective_capacity(t) for t in (6.9, 7.0, 20.9, 21.0, 31.0)] == [0, 12, 12, 0, 12]


def test_utilization_examples():
    r = Resource("full", 1)
    r.seize("P", 0.0)
    r.flush(10.0)
    assert r.utilization() == pytest.approx(1.0)

    idle = Resource("idle", 1)
    idle.flush(10.0)
    assert idle.utilization() == 0.0

    part = Resource("patrol", 1)
    part.seize("P", 0.0)
    part.release(8.3)
    part.flush(10.0)
    assert part.utilization() == pytest.approx(0.83)


def test_utilization_undefined_when_never_on_duty():
    r = Resource("r", 0)
    r.flush(5.0)
    assert math.isnan(r.utilization())


def test_busy_integral_bounded_by_capacity_integral():
    r = Resource("r", 2)
    for p in range(4):
        r.seize(p, 0.0)
    r.set_capacity(1.0, 1)
    r.release(2.0)
    r.release(3.0)
    r.flush(5.0)
    assert sum(r.busy_time.values()) <= sum(r.capacity_time.values())


def test_mean_queue_wait_counts_zero_waits():
    r = Resource("r", 1)
    r.seize("P1", 0.0)
    r.seize("P2", 0.0)
    r.release(10.0)
    assert r.mean_queue_wait() == pytest.approx(5.0)
