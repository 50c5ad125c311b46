import pytest
import yaml

from caresim.config import ConfigError, build_scenario, default_config, dump_config, load_config, parse_config
from caresim.model.engine import CareModel
from oracles import STAFF


def test_empty_document_is_the_builtin_model():
    sc = build_scenario(parse_config(""))
    assert sc.replications == 100
    assert sc.model == CareModel()
    assert [(z.name, z.weekday_staff, z.weekend_staff) for z in sc.model.network.zones] == [
        (n, wd, we) for n, (wd, we) in STAFF.items()
    ]


def test_missing_zones_fall_back_to_defaults():
    cfg = parse_config("experiment:\n  replications: 5\n")
    assert cfg["zones"] == default_config()["zones"]
    assert cfg["experiment"]["replications"] == 5


def test_schema_error_names_the_line():
    text = "month:\n  days: 30\nexperiment:\n  replications: 10\n  threshold_minutes: soon\n"
    with pytest.raises(ConfigError) as exc:
        parse_config(text, "scenario.yaml")
    assert exc.value.line == 5
    assert str(exc.value).startswith("scenario.yaml:5:")
    assert "threshold_minutes" in str(exc.value)


def test_unknown_key_rejected():
    with pytest.raises(ConfigError) as exc:
        parse_config("experiment:\n  replicas: 10\n")
    assert exc.value.line == 1 or exc.value.line == 2


def test_semantic_errors_are_anchored():
    text = "arrivals:\n  bands:\n    - {start_hour: 0, end_hour: 12, calls_per_month: 10}\n"
    with pytest.raises(ConfigError) as exc:
        parse_config(text)
    assert exc.value.line == 2
    with pytest.raises(ConfigError):
        parse_config("experiment:\n  replications: 1\n")
    with pytest.raises(ConfigError):
        parse_config("patrols:\n  - {name: All, zone_ids: [1, 2]}\n")


def test_bad_yaml_and_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        parse_config("a: [1, 2\n")
    with pytest.raises(ConfigError):
        load_config(tmp_path / "nope.yaml")
    with pytest.raises(ConfigError):
        parse_config("- 1\n- 2\n")


def test_dump_round_trip():
    cfg = parse_config("experiment:\n  master_seed: 9\n")
    again = parse_config(dump_config(cfg))
    assert dump_config(again) == dump_config(cfg)
    doc = yaml.safe_load(dump_config(cfg))
    assert doc["validation"]["real_band_counts"]["21-07"] == 2284
