"""Replication runs, Student-t confidence intervals and count validation."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

import numpy as np
from scipy import stats as _sps

from .model.engine import CareModel, ReplicationSummary, run_replication, shift_table

TOTAL = "total"


@dataclass(frozen=True)
class ConfidenceInterval:
    mean: float
    half_width: float
    level: float
    n: int

    @property
    def lower(self) -> float:
        return self.mean - self.half_width

    @property
    def upper(self) -> float:
        return self.mean + self.half_width

    def __contains__(self, x: float) -> bool:
        return self.lower <= x <= self.upper


def t_quantile(p: float, df: int) -> float:
    return float(_sps.t.ppf(p, df))


def confidence_interval(samples: Sequence[float], level: float = 0.95) -> ConfidenceInterval:
    """Student-t interval for the mean of ``samples``."""
    x = np.asarray(samples, dtype=float)
    n = x.size
    if n < 2:
        raise ValueError("need at least two samples for a confidence interval")
    if not 0 < level < 1:
        raise ValueError("level must be in (0, 1)")
    mean = float(x.mean())
    s = float(x.std(ddof=1))
    hw = t_quantile(1 - (1 - level) / 2, n - 1) * s / math.sqrt(n) if s > 0 else 0.0
    return ConfidenceInterval(mean, hw, level, n)


def _one(args) -> ReplicationSummary:
    model, rep, seed, kernel, table = args
    return run_replication(model, rep, seed, kernel=kernel, table=table)


def run_replications(
    model: CareModel,
    n: int,
    master_seed: int,
    kernel: Optional[str] = None,
    workers: int = 1,
) -> list[ReplicationSummary]:
    """``n`` independent replications; replication ``i`` uses streams (seed, i).

    With ``workers > 1`` replications run in separate processes; the result
    list is always in replication order.
    """
    if n < 2:
        raise ValueError("at least two replications are required")
    table = shift_table(model)
    jobs = [(model, i, master_seed, kernel, table) for i in range(n)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_one, jobs, chunksize=max(1, n // (4 * workers))))
    return [_one(j) for j in jobs]


@dataclass(frozen=True)
class ValidationRow:
    band: str
    real: float
    mean: float
    lower: float
    upper: float

    @property
    def passed(self) -> bool:
        return self.lower <= self.real <= self.upper


def validate(
    real_band_counts: Mapping[str, float],
    summaries: Sequence[ReplicationSummary],
    level: float = 0.95,
) -> list[ValidationRow]:
    """Check each real band count (and their total) against the replication CI."""
    if not summaries:
        raise ValueError("no replications to validate against")
    bands = list(summaries[0].band_counts)
    if set(real_band_counts) - {TOTAL} != set(bands):
        raise ValueError(f"band mismatch: real {sorted(real_band_counts)} vs simulated {bands}")
    rows = []
    for b in bands:
        ci = confidence_interval([s.band_counts[b] for s in summaries], level)
        rows.append(ValidationRow(b, float(real_band_counts[b]), ci.mean, ci.lower, ci.upper))
    real_total = float(real_band_counts.get(TOTAL, sum(real_band_counts[b] for b in bands)))
    ci = confidence_interval([sum(s.band_counts.values()) for s in summaries], level)
    rows.append(ValidationRow(TOTAL, real_total, ci.mean, ci.lower, ci.upper))
    return rows


def lag1_autocorrelation(x: Sequence[float]) -> float:
    a = np.asarray(x, dtype=float) - np.mean(x)
    denom = float(a @ a)
    return float(a[:-1] @ a[1:] / denom) if denom > 0 else 0.0
