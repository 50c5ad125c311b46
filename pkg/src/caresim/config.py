"""Scenario configuration documents (YAML).

Every omitted field falls back to the built-in Växjö model. Schema errors
are reported with the line of the offending node.
"""

from __future__ import annotations

import copy
from dataclasses import asdict
from pathlib import Path
from typing import Optional

import jsonschema
import yaml

from .arrivals import Band, ScheduleError, calibrate_from_monthly_counts
from .model.engine import CareModel
from .model.tables import MONTH_DAYS, MONTHLY_CALLS, PATROLS, ZONES, CareNetwork, NightPatrol, ServiceTimes, Zone
from .scenario import DEFAULT_MULTIPLIERS, DEFAULT_SEED, Scenario


class ConfigError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None, source: str = "<config>"):
        self.line = line
        self.source = source
        where = f"{source}:{line}" if line is not None else source
        super().__init__(f"{where}: {message}")


def default_config() -> dict:
    return {
        "month": {"days": MONTH_DAYS},
        "arrivals": {
            "bands": [{"start_hour": s, "end_hour": e, "calls_per_month": c} for s, e, c in MONTHLY_CALLS],
            "multiplier": 1.0,
        },
        "zones": [
            {"id": z.id, "name": z.name, "weekday_staff": z.weekday_staff, "weekend_staff": z.weekend_staff}
            for z in ZONES
        ],
        "patrols": [{"name": p.name, "zone_ids": sorted(p.zone_ids), "units": p.units} for p in PATROLS],
        "service_times": asdict(ServiceTimes()),
        "experiment": {
            "replications": 100,
            "master_seed": DEFAULT_SEED,
            "multipliers": list(DEFAULT_MULTIPLIERS),
            "threshold_minutes": 25.0,
            "level": 0.95,
            "workers": 1,
        },
        "validation": {"real_band_counts": None},
    }


_pos = {"type": "number", "exclusiveMinimum": 0}
_int_pos = {"type": "integer", "minimum": 1}

SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "month": {"type": "object", "additionalProperties": False,
                  "properties": {"days": {"type": "integer", "minimum": 28}}},
        "arrivals": {
            "type": "object", "additionalProperties": False,
            "properties": {
                "bands": {"type": "array", "minItems": 1, "items": {
                    "type": "object", "additionalProperties": False,
                    "required": ["start_hour", "end_hour", "calls_per_month"],
                    "properties": {
                        "start_hour": {"type": "number", "minimum": 0, "exclusiveMaximum": 24},
                        "end_hour": {"type": "number", "minimum": 0, "maximum": 24},
                        "calls_per_month": {"type": "number", "minimum": 0},
                    }}},
                "multiplier": _pos,
            },
        },
        "zones": {"type": "array", "minItems": 1, "items": {
            "type": "object", "additionalProperties": False,
            "required": ["id", "name", "weekday_staff", "weekend_staff"],
            "properties": {
                "id": _int_pos, "name": {"type": "string"},
                "weekday_staff": _int_pos, "weekend_staff": _int_pos,
                "arrival_weight": {"type": "number", "minimum": 0},
            }}},
        "patrols": {"type": "array", "minItems": 1, "items": {
            "type": "object", "additionalProperties": False,
            "required": ["name", "zone_ids"],
            "properties": {
                "name": {"type": "string"},
                "zone_ids": {"type": "array", "minItems": 1, "items": _int_pos},
                "units": _int_pos,
            }}},
        "service_times": {
            "type": "object", "additionalProperties": False,
            "properties": {
                **{k: _pos for k in ("transfer_min", "transfer_max", "assist_min", "assist_max",
                                     "operator_min", "operator_max", "contact_min", "contact_max")},
                "call_center_capacity": _int_pos,
            },
        },
        "experiment": {
            "type": "object", "additionalProperties": False,
            "properties": {
                "replications": {"type": "integer", "minimum": 2},
                "master_seed": {"type": "integer", "minimum": 0},
                "multipliers": {"type": "array", "minItems": 1, "items": _pos},
                "threshold_minutes": {"type": "number", "minimum": 0},
                "level": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
                "workers": _int_pos,
            },
        },
        "validation": {
            "type": "object", "additionalProperties": False,
            "properties": {
                "real_band_counts": {"type": ["object", "null"],
                                     "additionalProperties": {"type": "number", "minimum": 0}},
            },
        },
    },
}


def _line_map(node: yaml.Node, path: tuple = (), out: Optional[dict] = None) -> dict:
    out = {} if out is None else out
    out.setdefault(path, node.start_mark.line + 1)
    if isinstance(node, yaml.MappingNode):
        for k, v in node.value:
            out.setdefault(path + (k.value,), k.start_mark.line + 1)
            _line_map(v, path + (k.value,), out)
    elif isinstance(node, yaml.SequenceNode):
        for i, v in enumerate(node.value):
            _line_map(v, path + (i,), out)
    return out


def _line_for(lines: dict, path) -> Optional[int]:
    path = tuple(path)
    while path not in lines and path:
        path = path[:-1]
    return lines.get(path)


def _merge(base: dict, override: dict) -> dict:
    out = copy.deepcopy(base)
    for k, v in override.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = _merge(out[k], v)
        else:
            out[k] = copy.deepcopy(v)
    return out


def parse_config(text: str, source: str = "<config>") -> dict:
    """Parse, schema-check and merge with defaults; returns the effective config."""
    try:
        node = yaml.compose(text)
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise ConfigError(f"not valid YAML: {getattr(exc, 'problem', exc)}", mark.line + 1 if mark else None, source) from None
    if data is None:
        data, lines = {}, {}
    else:
        lines = _line_map(node)
    if not isinstance(data, dict):
        raise ConfigError("top level must be a mapping", 1, source)
    errors = sorted(jsonschema.Draft202012Validator(SCHEMA).iter_errors(data), key=lambda e: [str(x) for x in e.absolute_path])
    if errors:
        e = errors[0]
        dotted = ".".join(str(p) for p in e.absolute_path) or "<root>"
        raise ConfigError(f"{dotted}: {e.message}", _line_for(lines, e.absolute_path), source)
    cfg = _merge(default_config(), data)
    cfg["_lines"] = lines
    cfg["_source"] = source
    build_scenario(cfg)  # semantic checks
    return cfg


def load_config(path: Optional[str | Path]) -> dict:
    if path is None:
        return parse_config("", "<defaults>")
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc.strerror}", None, str(p)) from None
    return parse_config(text, str(p))


def effective_document(cfg: dict) -> dict:
    """The merged config without bookkeeping keys, with defaults filled in."""
    doc = {k: copy.deepcopy(v) for k, v in cfg.items() if not k.startswith("_")}
    if doc["validation"]["real_band_counts"] is None:
        doc["validation"]["real_band_counts"] = _band_counts_from_arrivals(doc)
    return doc


def dump_config(cfg: dict) -> str:
    return yaml.safe_dump(effective_document(cfg), sort_keys=False, allow_unicode=True)


def with_overrides(cfg: dict, overrides: dict) -> dict:
    """Copy of ``cfg`` with CLI overrides written into the document."""
    out = copy.deepcopy(cfg)
    exp = out["experiment"]
    for key in ("master_seed", "replications", "workers"):
        if overrides.get(key) is not None:
            exp[key] = overrides[key]
    if overrides.get("multiplier") is not None:
        out["arrivals"]["multiplier"] = overrides["multiplier"]
    return out


def _band_counts_from_arrivals(cfg: dict) -> dict:
    """Real counts default to the counts the arrival rates were calibrated on."""
    return {
        Band(float(b["start_hour"]), float(b["end_hour"]), 0.0).key: b["calls_per_month"]
        for b in cfg["arrivals"]["bands"]
    }


def build_scenario(cfg: dict, overrides: Optional[dict] = None) -> Scenario:
    """Scenario from an effective config, applying CLI overrides (seed, reps, multiplier)."""
    overrides = overrides or {}
    lines = cfg.get("_lines", {})
    source = cfg.get("_source", "<config>")

    def fail(msg, path):
        raise ConfigError(msg, _line_for(lines, path), source)

    days = cfg["month"]["days"]
    try:
        rates = calibrate_from_monthly_counts(
            [(b["start_hour"], b["end_hour"], b["calls_per_month"]) for b in cfg["arrivals"]["bands"]], days
        )
    except ScheduleError as exc:
        fail(f"arrivals.bands: {exc}", ("arrivals", "bands"))
    try:
        zones = tuple(Zone(z["id"], z["name"], z["weekday_staff"], z["weekend_staff"], z.get("arrival_weight"))
                      for z in cfg["zones"])
        patrols = tuple(NightPatrol(i + 1, p["name"], frozenset(p["zone_ids"]), p.get("units", 6))
                        for i, p in enumerate(cfg["patrols"]))
    except (TypeError, ValueError) as exc:
        fail(str(exc), ("zones",))
    if sum(len(p["zone_ids"]) for p in cfg["patrols"]) != len({i for p in cfg["patrols"] for i in p["zone_ids"]}):
        fail("patrols: a zone is assigned to more than one patrol", ("patrols",))
    try:
        service = ServiceTimes(**cfg["service_times"])
    except ValueError as exc:
        fail(f"service_times: {exc}", ("service_times",))
    try:
        network = CareNetwork(zones, patrols, service)
    except ValueError as exc:
        fail(str(exc), ("patrols",) if "patrol" in str(exc) else ("zones",))

    exp = cfg["experiment"]
    real = cfg["validation"]["real_band_counts"]
    if real is None:
        real = _band_counts_from_arrivals(cfg)
    elif set(real) - {"total"} != set(rates.band_keys()):
        fail(f"validation.real_band_counts keys must be {rates.band_keys()} (plus optional 'total')",
             ("validation", "real_band_counts"))

    def pick(key, default):
        v = overrides.get(key)
        return default if v is None else v

    reps = pick("replications", exp["replications"])
    if reps < 2:
        raise ConfigError("replications must be at least 2 (a confidence interval needs two samples)", None, "--reps")
    mult = pick("multiplier", cfg["arrivals"]["multiplier"])
    if not mult > 0:
        raise ConfigError("multiplier must be positive", None, "--multiplier")
    seed = pick("master_seed", exp["master_seed"])
    if seed < 0:
        raise ConfigError("seed must be non-negative", None, "--seed")
    workers = pick("workers", exp["workers"])
    if workers < 1:
        raise ConfigError("workers must be at least 1", None, "--workers")
    return Scenario(
        model=CareModel(network=network, rates=rates, horizon_days=days),
        replications=reps,
        arrival_multiplier=mult,
        master_seed=seed,
        multipliers=tuple(exp["multipliers"]),
        threshold_minutes=exp["threshold_minutes"],
        real_band_counts=dict(real),
        level=exp["level"],
        workers=workers,
        kernel=overrides.get("kernel"),
    )
