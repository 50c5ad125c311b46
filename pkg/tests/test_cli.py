import filecmp

import pytest
import yaml

from caresim.cli import main

FAST = ["--reps", "5"]


def _run(tmp_path, name, *args):
    out = tmp_path / name
    code = main(["run", "--out", str(out), *args])
    return code, out


def _write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(yaml.safe_dump(doc), encoding="utf-8")
    return str(p)


def test_run_writes_all_reports(tmp_path, capsys):
    code, out = _run(tmp_path, "a", *FAST, "--seed", "42")
    assert code == 0
    names = sorted(p.name for p in out.iterdir())
    assert names == ["config.effective.yaml", "queues.csv", "summary.csv", "utilization.csv", "waiting.csv"]
    header = (out / "waiting.csv").read_text().splitlines()[0]
    assert header == "multiplier,call_center_min,transfer_min,total_wait_min,p95_total_wait_min,max_total_wait_min"
    assert "Resource utilization" in capsys.readouterr().out


def test_reruns_are_byte_identical_and_seed_matters(tmp_path):
    _, a = _run(tmp_path, "a", *FAST, "--seed", "42")
    _, b = _run(tmp_path, "b", *FAST, "--seed", "42")
    _, c = _run(tmp_path, "c", *FAST, "--seed", "43")
    names = ["waiting.csv", "utilization.csv", "queues.csv", "summary.csv"]
    assert filecmp.cmpfiles(a, b, names, shallow=False)[0] == names
    assert (a / "waiting.csv").read_bytes() != (c / "waiting.csv").read_bytes()


def test_effective_config_round_trip(tmp_path):
    _, a = _run(tmp_path, "a", *FAST, "--seed", "8", "--multiplier", "1.1")
    code, b = _run(tmp_path, "b", "--config", str(a / "config.effective.yaml"))
    assert code == 0
    for name in ("waiting.csv", "utilization.csv", "queues.csv", "summary.csv"):
        assert (a / name).read_bytes() == (b / name).read_bytes(), name


def test_multiplier_override_scales_load(tmp_path):
    _, a = _run(tmp_path, "a", *FAST)
    _, b = _run(tmp_path, "b", *FAST, "--multiplier", "1.10")
    assert (a / "waiting.csv").read_text() != (b / "waiting.csv").read_text()
    doc = yaml.safe_load((b / "config.effective.yaml").read_text())
    assert doc["arrivals"]["multiplier"] == 1.10


def test_text_format(tmp_path):
    _, out = _run(tmp_path, "t", *FAST, "--format", "text")
    assert (out / "utilization.txt").read_text().splitlines()[0] == "Resource utilization"


def test_validate_default_passes(tmp_path, capsys):
    assert main(["validate", "--out", str(tmp_path)]) == 0
    text = capsys.readouterr().out
    assert text.strip().endswith("PASS")
    rows = (tmp_path / "validation.csv").read_text().splitlines()
    assert rows[0] == "band,real,mean,lower,upper,pass" and len(rows) == 7


def test_validate_perturbed_counts_fail(tmp_path, capsys):
    real = {"07-10": 1193, "10-14": 1776, "14-16": 860, "16-21": 1750, "21-07": 2284}
    cfg = _write(tmp_path, "c.yaml", {"validation": {"real_band_counts": {k: v * 1.5 for k, v in real.items()}}})
    assert main(["validate", "--config", cfg, *FAST]) == 1
    assert capsys.readouterr().out.strip().endswith("FAIL")


@pytest.mark.parametrize("args", [
    ["--reps", "1"],
    ["--reps", "0"],
    ["--multiplier", "0"],
    ["--seed", "-1"],
])
def test_bad_overrides_exit_2(args, capsys):
    assert main(["validate", *args]) == 2
    assert "config error" in capsys.readouterr().err


def test_config_errors_exit_2(tmp_path, capsys):
    assert main(["run", "--config", str(tmp_path / "missing.yaml")]) == 2
    cfg = _write(tmp_path, "r1.yaml", {"experiment": {"replications": 1}})
    assert main(["validate", "--config", cfg]) == 2
    bad = tmp_path / "bad.yaml"
    bad.write_text("experiment:\n  replications: 10\n  level: 2\n")
    assert main(["run", "--config", str(bad)]) == 2
    assert f"{bad}:3:" in capsys.readouterr().err


def test_sweep_default_four_rows_with_knee(tmp_path, capsys):
    assert main(["sweep", "--out", str(tmp_path), *FAST]) == 0
    assert len((tmp_path / "sweep.csv").read_text().splitlines()) == 1 + 4
    assert "knee: multiplier 1.15" in capsys.readouterr().out


def test_sweep_single_multiplier(tmp_path, capsys):
    cfg = _write(tmp_path, "one.yaml", {"experiment": {"multipliers": [1.0], "replications": 5}})
    assert main(["sweep", "--config", cfg, "--out", str(tmp_path / "o")]) == 0
    assert len((tmp_path / "o" / "sweep.csv").read_text().splitlines()) == 2
    assert "no multiplier exceeds 25 min" in capsys.readouterr().out


def test_sweep_zero_threshold(tmp_path, capsys):
    cfg = _write(tmp_path, "z.yaml", {"experiment": {"threshold_minutes": 0, "replications": 5}})
    assert main(["sweep", "--config", cfg]) == 0
    assert "knee: multiplier 1 exceeds 0 min" in capsys.readouterr().out


def test_python_kernel_flag(tmp_path):
    _, a = _run(tmp_path, "a", "--reps", "2", "--kernel", "python")
    _, b = _run(tmp_path, "b", "--reps", "2", "--kernel", "auto")
    assert (a / "summary.csv").read_bytes() == (b / "summary.csv").read_bytes()
