"""Command line: ``caresim {run,validate,sweep}``.

Exit codes: 0 success (or validation pass), 1 validation failure,
2 configuration error.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import tempfile
from pathlib import Path
from typing import Optional, Sequence

from .config import ConfigError, build_scenario, dump_config, load_config, with_overrides
from .model.engine import active_kernel_name
from .scenario import (
    QUEUE_COLUMNS,
    SUMMARY_COLUMNS,
    SWEEP_COLUMNS,
    UTILIZATION_COLUMNS,
    render_csv,
    render_text,
    run_scenario,
    run_sweep,
)
from .stats import validate

log = logging.getLogger("caresim")

EXIT_OK, EXIT_VALIDATION_FAIL, EXIT_CONFIG = 0, 1, 2
VALIDATION_COLUMNS = ("band", "real", "mean", "lower", "upper", "pass")


def _write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


class Reports:
    """Collects tables, then writes them all in one go at the end."""

    def __init__(self, out: Optional[str], fmt: str):
        self.out = Path(out) if out else None
        self.fmt = fmt
        self.tables: list[tuple[str, list, Sequence[str], str]] = []

    def add(self, name: str, rows, columns, title: str = "") -> str:
        self.tables.append((name, rows, columns, title))
        return render_text(rows, columns, title)

    def write(self) -> list[Path]:
        if self.out is None:
            return []
        written = []
        for name, rows, columns, title in self.tables:
            if self.fmt == "csv":
                path, text = self.out / f"{name}.csv", render_csv(rows, columns)
            else:
                path, text = self.out / f"{name}.txt", render_text(rows, columns, title)
            _write_atomic(path, text)
            written.append(path)
        return written


def _scenario(args):
    cfg = load_config(args.config)
    overrides = {
        "master_seed": args.seed,
        "replications": args.reps,
        "multiplier": args.multiplier,
        "workers": args.workers,
        "kernel": args.kernel,
    }
    return with_overrides(cfg, overrides), build_scenario(cfg, overrides)


def cmd_run(args) -> int:
    cfg, sc = _scenario(args)
    result = run_scenario(sc)
    reports = Reports(args.out, args.format)
    print(reports.add("waiting", [result.waiting_row()], SWEEP_COLUMNS, "Waiting times (minutes)"))
    print(reports.add("utilization", result.utilization_report(), UTILIZATION_COLUMNS, "Resource utilization"))
    reports.add("queues", result.queue_report(), QUEUE_COLUMNS, "Queue statistics")
    reports.add("summary", result.summary_table(), SUMMARY_COLUMNS, f"Replication summary ({sc.level:.0%} CI)")
    if reports.out is not None:
        _write_atomic(reports.out / "config.effective.yaml", dump_config(cfg))
    for p in reports.write():
        log.info("wrote %s", p)
    return EXIT_OK


def cmd_validate(args) -> int:
    _, sc = _scenario(args)
    result = run_scenario(sc)
    rows = validate(sc.real_band_counts, result.summaries, sc.level)
    table = [
        {"band": r.band, "real": r.real, "mean": r.mean, "lower": r.lower, "upper": r.upper,
         "pass": "yes" if r.passed else "no"}
        for r in rows
    ]
    reports = Reports(args.out, args.format)
    ok = all(r.passed for r in rows)
    title = f"Monthly calls: real vs {sc.level:.0%} CI over {sc.replications} replications"
    print(reports.add("validation", table, VALIDATION_COLUMNS, title))
    print("PASS" if ok else "FAIL")
    reports.write()
    return EXIT_OK if ok else EXIT_VALIDATION_FAIL


def cmd_sweep(args) -> int:
    _, sc = _scenario(args)
    report = run_sweep(sc)
    reports = Reports(args.out, args.format)
    print(reports.add("sweep", report.rows, SWEEP_COLUMNS, "Waiting times by arrival multiplier (minutes)"))
    knee = report.knee_multiplier
    if knee is None:
        print(f"no multiplier exceeds {report.threshold_minutes:g} min")
    else:
        print(f"knee: multiplier {knee:g} exceeds {report.threshold_minutes:g} min")
    reports.write()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="scenario YAML (defaults reproduce the built-in model)")
    common.add_argument("--seed", type=int, help="master seed")
    common.add_argument("--reps", type=int, help="number of replications")
    common.add_argument("--multiplier", type=float, help="arrival-rate multiplier")
    common.add_argument("--out", metavar="DIR", help="directory for report files")
    common.add_argument("--format", choices=("csv", "text"), default="csv", help="report file format")
    common.add_argument("--workers", type=int, help="parallel worker processes")
    common.add_argument("--kernel", choices=("auto", "compiled", "python"), help="replication kernel")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="caresim", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("run", parents=[common], help="run one scenario and write all reports").set_defaults(func=cmd_run)
    sub.add_parser("validate", parents=[common], help="check real monthly counts against simulated CIs").set_defaults(func=cmd_validate)
    sub.add_parser("sweep", parents=[common], help="waiting times across arrival multipliers").set_defaults(func=cmd_sweep)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    log.info("kernel: %s", active_kernel_name(args.kernel))
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
