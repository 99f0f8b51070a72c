"""Command-line interface: scenarios, configs, outputs, exit codes."""

import json
import math

import numpy as np
import pytest

from qsgeom.cli import ConfigError, list_scenarios, load_config, main

ALL_SCENARIOS = [
    "ah-mass", "cobordism", "embed-steiner", "monotone-path-sandwich",
    "prop51-corpus", "qs-collar", "ricci-path", "schwarzschild-by",
    "spin-bound", "stability-2d",
]


# ------------------------------------------------------------
# listing and argument errors
# ------------------------------------------------------------

def test_list_scenarios_sorted():
    assert list_scenarios() == ALL_SCENARIOS


def test_list_flag(capsys):
    assert main(["--list"]) == 0
    out = capsys.readouterr().out.strip().splitlines()
    assert out == ALL_SCENARIOS


def test_missing_scenario_is_usage_error(capsys):
    assert main([]) == 2


def test_unknown_scenario_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["no-such-scenario"])
    assert exc.value.code == 2


def test_bad_tolerance_exits_2(tmp_path):
    assert main(["qs-collar", "--out", str(tmp_path), "--tol", "-1"]) == 2
    assert main(["qs-collar", "--out", str(tmp_path), "--grid-n", "4"]) == 2


def test_missing_config_exits_2(tmp_path):
    assert main(["qs-collar", "--out", str(tmp_path),
                 "--config", str(tmp_path / "absent.cfg")]) == 2


# ------------------------------------------------------------
# config parsing
# ------------------------------------------------------------

def test_load_config_params(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("[params]\ndelta = 0.2\nstations = 129\n")
    params, metric = load_config(cfg)
    assert params["delta"] == "0.2"
    assert metric is None


def test_load_config_inline_profile(tmp_path):
    n = 257
    x = np.linspace(0.0, math.pi, n)
    rows = {"x": x, "f": np.ones(n), "h": np.sin(x)}
    body = "[profile]\n" + "\n".join(
        f"{k} = " + " ".join(f"{v:.17g}" for v in arr)
        for k, arr in rows.items())
    cfg = tmp_path / "p.cfg"
    cfg.write_text(body + "\n")
    params, metric = load_config(cfg)
    assert metric is not None
    assert metric.d == 2
    assert metric.area() == pytest.approx(4.0 * math.pi, rel=1e-8)


def test_load_config_bad_profile(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("[profile]\nx = 0 1 2\nf = 1 1 1\nh = 0 1\n")
    with pytest.raises(ConfigError):
        load_config(cfg)
    cfg.write_text("[profile]\nx = 0 1 2\nf = 1 1 1\n")
    with pytest.raises(ConfigError):
        load_config(cfg)
    cfg.write_text("[params]\nmetric = no-such-preset\n")
    with pytest.raises(ConfigError):
        load_config(cfg)


# ------------------------------------------------------------
# scenario runs
# ------------------------------------------------------------

@pytest.mark.parametrize("scenario", [
    "qs-collar", "ah-mass", "schwarzschild-by", "cobordism", "spin-bound",
    "embed-steiner", "stability-2d", "ricci-path",
    "monotone-path-sandwich",
])
def test_scenario_runs_and_writes_outputs(scenario, tmp_path, capsys):
    code = main([scenario, "--out", str(tmp_path)])
    out = capsys.readouterr().out
    assert code == 0
    assert "[PASS]" in out
    assert "[FAIL]" not in out
    summary = tmp_path / f"{scenario}-summary.json"
    assert summary.exists()
    payload = json.loads(summary.read_text())
    assert payload["scenario"] == scenario
    assert payload["checks"] and all(c["passed"]
                                     for c in payload["checks"])
    for table in payload["tables"]:
        assert (tmp_path / f"{scenario}-{table}.csv").exists()
        assert (tmp_path / f"{scenario}-{table}.png").exists()


def test_prop51_corpus_runs(tmp_path):
    # the heaviest scenario; a reduced grid keeps it quick
    code = main(["prop51-corpus", "--out", str(tmp_path),
                 "--grid-n", "64"])
    assert code == 0
    assert (tmp_path / "prop51-corpus-summary.json").exists()


def test_unreachable_tolerance_exits_1(tmp_path, capsys):
    code = main(["qs-collar", "--out", str(tmp_path), "--tol", "1e-300"])
    out = capsys.readouterr().out
    assert code == 1
    assert "[FAIL]" in out


def test_numerical_failure_exits_3(tmp_path, capsys):
    # eps far above the admissibility threshold aborts the solve
    cfg = tmp_path / "c.cfg"
    cfg.write_text("[params]\neps = 0.9\n")
    code = main(["cobordism", "--out", str(tmp_path),
                 "--config", str(cfg)])
    assert code == 3
    payload = json.loads((tmp_path / "cobordism-summary.json").read_text())
    assert "error" in payload


def test_config_overrides_take_effect(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("[params]\nm = 0.5\n")
    assert main(["schwarzschild-by", "--out", str(tmp_path),
                 "--config", str(cfg)]) == 0
    payload = json.loads(
        (tmp_path / "schwarzschild-by-summary.json").read_text())
    assert payload["params"]["m"] == "0.5"


def test_csv_output_deterministic(tmp_path):
    out1 = tmp_path / "run1"
    out2 = tmp_path / "run2"
    assert main(["qs-collar", "--out", str(out1)]) == 0
    assert main(["qs-collar", "--out", str(out2)]) == 0
    for f1 in sorted(out1.glob("*.csv")):
        f2 = out2 / f1.name
        assert f1.read_bytes() == f2.read_bytes()


def test_csv_has_full_precision_header(tmp_path):
    assert main(["qs-collar", "--out", str(tmp_path)]) == 0
    lines = (tmp_path / "qs-collar-lapse.csv").read_text().splitlines()
    assert lines[0] == "theta,u_final"
    first = lines[1].split(",")
    assert len(first) == 2
    float(first[0]); float(first[1])
