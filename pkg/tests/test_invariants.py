import numpy as np
import pytest

from caresim.des.streams import StreamFactory
from caresim.model import CareModel, CareNetwork, pykernel
from caresim.model.engine import draw_inputs, kernel_args, summarize
from caresim.model.routing import ResourceLayout
from invariants import CHECKS, Trace
from scenarios import models

MODELS = models()


@pytest.fixture(scope="module", params=list(MODELS))
def trace(request):
    return Trace(MODELS[request.param], replication=0, seed=17)


@pytest.mark.parametrize("check", list(CHECKS))
def test_invariant(trace, check):
    assert CHECKS[check](trace) == []


def test_stressed_run_exercises_queues_and_handover():
    tr = Trace(MODELS["stressed"], replication=0, seed=17)
    raw = tr.raw
    assert raw["qwait_max"][:22].max() > 0
    served = np.flatnonzero(~np.isnan(raw["t_nurse"]))
    first_choice = np.array([tr.system.route(p, raw["t_request"][p]) for p in served])
    assert np.any(first_choice != raw["nurse_res"][served])  # someone was handed over


def test_idle_patient_total_is_handling_plus_transfer():
    """A lone call meets no queue: total = operator + contact + transfer."""
    model = CareModel()
    inputs = draw_inputs(model, StreamFactory(1, 0))
    for f in ("arrivals", "zone", "operator", "contact", "transfer", "assist"):
        setattr(inputs, f, getattr(inputs, f)[:1])
    inputs.arrivals = np.array([10.0])
    raw = pykernel.run_replication(*kernel_args(model, inputs))
    s = summarize(model, 0, inputs, raw)
    expect = (inputs.operator[0] + inputs.contact[0] + inputs.transfer[0]) * 60
    assert s.mean_total_wait == pytest.approx(expect)


def test_evening_calls_go_to_their_patrol():
    tr = Trace(MODELS["baseline"], replication=1, seed=3)
    layout = ResourceLayout.for_network(CareNetwork())
    raw = tr.raw
    h = raw["t_request"] % 24
    evening = (~np.isnan(raw["t_nurse"])) & ((h >= 21) | (h < 7)) & (raw["t_nurse"] == raw["t_request"])
    want = np.array(layout.patrol_of_zone)[tr.inputs.zone[evening]]
    assert np.array_equal(raw["nurse_res"][evening], want)


def test_mean_transfer_time_is_seven(baseline):
    vals = [s.mean_transfer_time for s in baseline.summaries]
    assert np.mean(vals) == pytest.approx(7.0, rel=0.02)


def test_evening_fraction(baseline):
    f = np.array([s.evening_arrivals / s.n_created for s in baseline.summaries])
    se = f.std(ddof=1) / np.sqrt(len(f))
    assert abs(f.mean() - 2284 / 7863) < 3 * se
