"""What-if experiments: load sweeps and waiting/utilization/queue reports."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Mapping, Optional, Sequence

import numpy as np

from .arrivals import scale_rates
from .model.engine import DAY_TYPES, CareModel, ReplicationSummary
from .model.tables import MONTHLY_CALLS
from .stats import confidence_interval, run_replications

DEFAULT_SEED = 1
DEFAULT_MULTIPLIERS = (1.0, 1.05, 1.10, 1.15)

SWEEP_COLUMNS = ("multiplier", "call_center_min", "transfer_min", "total_wait_min", "p95_total_wait_min", "max_total_wait_min")
UTILIZATION_COLUMNS = ("resource", "day_type", "utilization")
QUEUE_COLUMNS = ("resource", "day_type", "mean_queue_wait_min", "max_queue_wait_min", "max_queue_len")
SUMMARY_COLUMNS = ("metric", "mean", "half_width", "lower", "upper", "n")


def default_real_counts() -> dict[str, int]:
    return {f"{int(s):02d}-{int(e):02d}": c for s, e, c in MONTHLY_CALLS}


@dataclass(frozen=True)
class Scenario:
    model: CareModel = field(default_factory=CareModel)
    replications: int = 100
    arrival_multiplier: float = 1.0
    master_seed: int = DEFAULT_SEED
    multipliers: tuple[float, ...] = DEFAULT_MULTIPLIERS
    threshold_minutes: float = 25.0
    real_band_counts: Mapping[str, float] = field(default_factory=default_real_counts)
    level: float = 0.95
    workers: int = 1
    kernel: Optional[str] = None

    def __post_init__(self):
        if self.model.horizon_days < 1:
            raise ValueError("horizon must be at least one day")
        if self.replications < 2:
            raise ValueError("at least two replications are required")
        if not self.arrival_multiplier > 0:
            raise ValueError("arrival multiplier must be positive")

    def scaled_model(self, multiplier: Optional[float] = None) -> CareModel:
        m = self.arrival_multiplier if multiplier is None else multiplier
        return replace(self.model, rates=scale_rates(self.model.rates, m))


def _mean(values) -> Optional[float]:
    vals = [v for v in values if v is not None]
    return float(np.mean(vals)) if vals else None


@dataclass
class ScenarioResult:
    scenario: Scenario
    multiplier: float
    summaries: list[ReplicationSummary]

    @property
    def model(self) -> CareModel:
        return self.scenario.model

    def waiting_row(self) -> dict:
        s = self.summaries
        return {
            "multiplier": self.multiplier,
            "call_center_min": _mean(x.mean_call_center_time for x in s),
            "transfer_min": _mean(x.mean_transfer_time for x in s),
            "total_wait_min": _mean(x.mean_total_wait for x in s),
            "p95_total_wait_min": _mean(x.p95_total_wait for x in s),
            "max_total_wait_min": _mean(x.max_total_wait for x in s),
        }

    def utilization_report(self) -> list[dict]:
        """Care groups split by day type, then night patrols over all duty time."""
        layout = self.model.layout
        rows = []
        for name, kind in zip(layout.names, layout.kinds):
            if kind == "care_group":
                for dt in DAY_TYPES:
                    rows.append({"resource": name, "day_type": dt,
                                 "utilization": _mean(x.utilization[(name, dt)] for x in self.summaries)})
        for name, kind in zip(layout.names, layout.kinds):
            if kind == "night_patrol":
                rows.append({"resource": name, "day_type": "all",
                             "utilization": _mean(x.utilization[(name, "all")] for x in self.summaries)})
        return rows

    def queue_report(self) -> list[dict]:
        """Per resource and day type; maxima are averaged over replications."""
        rows = []
        for name in self.model.layout.names:
            for dt in DAY_TYPES:
                key = (name, dt)
                rows.append({
                    "resource": name,
                    "day_type": dt,
                    "mean_queue_wait_min": _mean(x.queue_wait_mean[key] for x in self.summaries),
                    "max_queue_wait_min": _mean(x.queue_wait_max[key] for x in self.summaries),
                    "max_queue_len": _mean(x.queue_len_max[key] for x in self.summaries),
                })
        return rows

    def summary_table(self) -> list[dict]:
        s = self.summaries
        level = self.scenario.level
        metrics: list[tuple[str, list]] = [("arrivals_total", [sum(x.band_counts.values()) for x in s])]
        metrics += [(f"arrivals[{b}]", [x.band_counts[b] for x in s]) for b in s[0].band_counts]
        metrics += [
            ("evening_fraction", [x.evening_arrivals / x.n_created if x.n_created else None for x in s]),
            ("completed", [x.n_completed for x in s]),
            ("in_system_at_end", [x.n_in_system for x in s]),
            ("call_center_min", [x.mean_call_center_time for x in s]),
            ("transfer_min", [x.mean_transfer_time for x in s]),
            ("total_wait_min", [x.mean_total_wait for x in s]),
            ("p95_total_wait_min", [x.p95_total_wait for x in s]),
            ("max_total_wait_min", [x.max_total_wait for x in s]),
            ("nurse_queue_wait_min", [x.mean_queue_wait for x in s]),
            ("max_queue_wait_min", [x.max_queue_wait for x in s]),
            ("assistance_min", [x.mean_assistance_time for x in s]),
        ]
        metrics += [(f"time_avg_queue_len[{n}]", [x.time_avg_queue_length[n] for x in s]) for n in self.model.layout.names]
        metrics += [(f"utilization[{n}]", [x.utilization[(n, "all")] for x in s]) for n in self.model.layout.names]
        rows = []
        for name, vals in metrics:
            vals = [v for v in vals if v is not None]
            if len(vals) >= 2:
                ci = confidence_interval(vals, level)
                rows.append({"metric": name, "mean": ci.mean, "half_width": ci.half_width,
                             "lower": ci.lower, "upper": ci.upper, "n": ci.n})
            else:
                m = float(vals[0]) if vals else None
                rows.append({"metric": name, "mean": m, "half_width": None, "lower": None, "upper": None, "n": len(vals)})
        return rows


def run_scenario(scenario: Scenario, multiplier: Optional[float] = None) -> ScenarioResult:
    m = scenario.arrival_multiplier if multiplier is None else multiplier
    summaries = run_replications(
        scenario.scaled_model(m), scenario.replications, scenario.master_seed,
        kernel=scenario.kernel, workers=scenario.workers,
    )
    return ScenarioResult(scenario, m, summaries)


@dataclass
class SweepReport:
    rows: list[dict]
    threshold_minutes: float
    metric: str = "total_wait_min"

    @property
    def knee_multiplier(self) -> Optional[float]:
        """Smallest multiplier whose mean total wait exceeds the threshold."""
        for r in self.rows:
            v = r[self.metric]
            if v is not None and v > self.threshold_minutes:
                return r["multiplier"]
        return None


def run_sweep(base: Scenario, multipliers: Optional[Sequence[float]] = None) -> SweepReport:
    """One replication set per multiplier, all on the same streams.

    Each sweep multiplier scales the base scenario's own arrival multiplier.
    """
    mults = list(base.multipliers if multipliers is None else multipliers)
    if not mults:
        raise ValueError("multiplier list is empty")
    if any(not m > 0 for m in mults):
        raise ValueError("multipliers must be positive")
    if any(b < a for a, b in zip(mults, mults[1:])):
        raise ValueError("multipliers must be sorted ascending")
    rows = []
    for m in mults:
        row = run_scenario(base, base.arrival_multiplier * m).waiting_row()
        row["multiplier"] = m
        rows.append(row)
    return SweepReport(rows, base.threshold_minutes)


# rendering ------------------------------------------------------------------

def format_value(v, column: str = "") -> str:
    """Machine format: full-precision repr, empty cell for undefined."""
    if v is None or (isinstance(v, float) and math.isnan(v)):
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _text_value(v, column: str) -> str:
    if v is None or (isinstance(v, float) and math.isnan(v)):
        return "-"
    if column == "utilization":
        return f"{round(100 * v)}%"
    if column == "multiplier":
        return f"{v:.2f}"
    if isinstance(v, float):
        return f"{v:.2f}"
    return str(v)


def render_csv(rows: Sequence[Mapping], columns: Sequence[str]) -> str:
    import csv
    import io

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([format_value(r.get(c), c) for c in columns])
    return buf.getvalue()


def render_text(rows: Sequence[Mapping], columns: Sequence[str], title: str = "") -> str:
    cells = [[_text_value(r.get(c), c) for c in columns] for r in rows]
    widths = [max([len(c)] + [len(row[i]) for row in cells]) for i, c in enumerate(columns)]
    left = {i for i, c in enumerate(columns) if c in ("resource", "day_type", "metric", "band")}

    def line(vals):
        return "  ".join(v.ljust(w) if i in left else v.rjust(w) for i, (v, w) in enumerate(zip(vals, widths))).rstrip()

    out = [title] if title else []
    out.append(line(list(columns)))
    out.append("  ".join("-" * w for w in widths))
    out.extend(line(r) for r in cells)
    return "\n".join(out) + "\n"
