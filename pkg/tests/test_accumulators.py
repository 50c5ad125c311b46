import pytest

from caresim.des import TallyStat, TimeWeightedStat


def test_tally():
    s = TallyStat()
    for x in (2, 4):
        s.record(x)
    assert (s.count, s.mean, s.min, s.max) == (2, 3, 2, 4)
    assert s.variance == pytest.approx(2.0)


def test_time_weighted_step():
    s = TimeWeightedStat(1.0, 0.0)
    s.record(0.0, 5.0)
    assert s.time_average(10.0) == pytest.approx(0.5)


def test_time_weighted_staircase():
    s = TimeWeightedStat(0.0, 0.0)
    for k in range(1, 10):
        s.record(k, float(k))
    assert s.time_average(10.0) == pytest.approx(4.5)
    assert s.max == 9


def test_time_weighted_rejects_regression():
    s = TimeWeightedStat(0.0, 0.0)
    s.record(1.0, 2.0)
    with pytest.raises(ValueError):
        s.record(2.0, 1.0)
