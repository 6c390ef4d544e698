"""Config-driven CLI: artifacts, exit codes, and byte reproducibility."""
import json
import math
from pathlib import Path

import pytest

from noisycomp.cli import main

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def run(subcommand, config, out, extra=()):
    return main([subcommand, "--config", str(config), "--out", str(out),
                 *extra])


def test_capacity_subcommand_matches_oracle(tmp_path):
    assert run("capacity", CONFIGS / "capacity_and_bsc.json", tmp_path) == 0
    doc = json.loads((tmp_path / "capacity_report.json").read_text())
    assert doc["value_nats"] == pytest.approx(1.1366188185143922, abs=1e-6)
    assert len(doc["argmax"]) == 4
    assert len(doc["config_sha256"]) == 16
    csv = (tmp_path / "capacity_report.csv").read_text()
    assert csv.startswith("# config_sha256=")
    assert f"seed={doc['seed']}" in csv.splitlines()[0]


def test_feinstein_subcommand_verifies(tmp_path):
    assert run("feinstein", CONFIGS / "feinstein_and_bsc_n6.json", tmp_path) == 0
    rep = json.loads((tmp_path / "feinstein_report.json").read_text())
    assert rep["verified"] is True and rep["violations"] == []
    code = json.loads((tmp_path / "feinstein_code.json").read_text())
    assert rep["m"] == len(code["entries"]) > 0


def test_simulate_subcommand_runs(tmp_path):
    assert run("simulate", CONFIGS / "simulate_and_bsc.json", tmp_path) == 0
    rep = json.loads((tmp_path / "simulate_report.json").read_text())
    assert rep["trials"] == 2000
    assert 0.0 <= rep["p_hat"] <= 1.0


def test_circuit_subcommand_reports_blowup(tmp_path):
    assert run("circuit", CONFIGS / "circuit_majority.json", tmp_path) == 0
    rep = json.loads((tmp_path / "circuit_report.json").read_text())
    assert len(rep["kernel_matrix"]) == 8
    lo, hi = rep["blowup"]["bounds"]
    assert lo < rep["blowup"]["lambda"] <= hi


def test_bits_flag_adds_converted_column(tmp_path):
    assert run("capacity", CONFIGS / "capacity_bijective_bsc.json", tmp_path,
               ["--bits"]) == 0
    doc = json.loads((tmp_path / "capacity_report.json").read_text())
    assert doc["value_bits"] == pytest.approx(doc["value_nats"] / math.log(2),
                                              abs=1e-6)


def test_zero_trials_is_schema_error(tmp_path):
    cfg = json.loads((CONFIGS / "simulate_and_bsc.json").read_text())
    cfg["simulate"]["trials"] = 0
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(cfg))
    assert run("simulate", bad, tmp_path) == 2


def test_missing_field_reports_path(tmp_path, capsys):
    cfg = json.loads((CONFIGS / "capacity_and_bsc.json").read_text())
    del cfg["instance"]["f"]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(cfg))
    assert run("capacity", bad, tmp_path) == 2
    assert "instance.f" in capsys.readouterr().err


def test_enumeration_limit_exit_code(tmp_path):
    cfg = json.loads((CONFIGS / "feinstein_and_bsc_n6.json").read_text())
    # a Markov source forces dense enumeration, which overflows at n = 14
    cfg["instance"]["source"] = {
        "kind": "markov",
        "initial": [0.25, 0.25, 0.25, 0.25],
        "transition": [[0.7, 0.1, 0.1, 0.1], [0.1, 0.7, 0.1, 0.1],
                       [0.1, 0.1, 0.7, 0.1], [0.1, 0.1, 0.1, 0.7]]}
    cfg["feinstein"]["n"] = 14
    bad = tmp_path / "big.json"
    bad.write_text(json.dumps(cfg))
    assert run("feinstein", bad, tmp_path) == 3


def test_repeat_invocations_byte_identical(tmp_path):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    for out in (out1, out2):
        assert run("simulate", CONFIGS / "simulate_and_bsc.json", out,
                   ["--seed", "11"]) == 0
    for name in ("simulate_report.json", "simulate_report.csv"):
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()
