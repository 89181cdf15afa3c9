"""Config parsing, scenario execution, output files, and the CLI."""

import hashlib
import json
from pathlib import Path

import pytest

from edgegame.cli import main
from edgegame.experiments import (
    ConfigError,
    ScenarioSpec,
    parse_config,
    run_scenario,
    validate_params,
)


def sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


# --- parsing -----------------------------------------------------------------


def test_parse_minimal_scenario_fills_defaults():
    specs = parse_config("[scenario a]\nkind = protocol2\nseed = 1\n")
    assert len(specs) == 1
    spec = specs[0]
    assert spec.name == "a"
    assert spec.kind == "protocol2"
    assert spec.params["n"] == 20
    assert spec.params["horizon"] == 20
    assert spec.params["c"] == 0.8
    assert spec.params["seed"] == 1


def test_parse_empty_file():
    assert parse_config("") == []
    assert parse_config("# only a comment\n\n") == []


def test_parse_unknown_kind():
    with pytest.raises(ConfigError, match="protocol9"):
        parse_config("[scenario a]\nkind = protocol9\n")


def test_parse_unknown_key_names_line():
    with pytest.raises(ConfigError, match="line 3"):
        parse_config("[scenario a]\nkind = protocol2\nbogus = 1\n")


def test_parse_type_mismatch_names_line():
    with pytest.raises(ConfigError, match="line 3"):
        parse_config("[scenario a]\nkind = protocol2\nn = not_a_number\n")


def test_parse_missing_kind():
    with pytest.raises(ConfigError, match="missing 'kind'"):
        parse_config("[scenario a]\nseed = 2\n")


def test_parse_duplicate_scenario_name():
    text = "[scenario a]\nkind = nash\n[scenario a]\nkind = nash\n"
    with pytest.raises(ConfigError, match="duplicate scenario name"):
        parse_config(text)


def test_parse_duplicate_key():
    with pytest.raises(ConfigError, match="duplicate key"):
        parse_config("[scenario a]\nkind = nash\nc = 0.8\nc = 0.9\n")


def test_parse_key_outside_section():
    with pytest.raises(ConfigError, match="line 1"):
        parse_config("kind = nash\n")


def test_parse_matrix_and_lists():
    text = (
        "[scenario m]\n"
        "kind = protocol3\n"
        "c_states = 0.6,0.8,1.0\n"
        "transition = 0.2,0.8,0;0,0.5,0.5;1,0,0\n"
        "holding_time = 50\n"
    )
    spec = parse_config(text)[0]
    assert spec.params["c_states"] == (0.6, 0.8, 1.0)
    assert spec.params["transition"] == ((0.2, 0.8, 0.0), (0.0, 0.5, 0.5), (1.0, 0.0, 0.0))


def test_validate_params_rejects_unknown_kind():
    with pytest.raises(ConfigError):
        validate_params("nonsense", {})


# --- scenario execution ----------------------------------------------------------


def test_nash_scenario_summary(tmp_path):
    spec = ScenarioSpec(name="eq", kind="nash", params={"c": 0.8, "seed": 0})
    summary = run_scenario(spec, tmp_path)
    assert summary.final_p_r == 0.75
    assert summary.reference_p == 0.75
    data = json.loads((tmp_path / "eq.summary.json").read_text())
    assert data["extras"]["regime"] == "integration"
    assert "wall" not in json.dumps(data)  # timings never reach the files
    # interval table converges to the reference
    lines = (tmp_path / "eq.csv").read_text().splitlines()
    last = lines[-1].split(",")
    assert abs(float(last[1]) - 0.75) < 1e-9
    assert abs(float(last[2]) - 0.75) < 1e-9


def test_protocol1_scenario(tmp_path):
    spec = ScenarioSpec(
        name="p1", kind="protocol1", params={"n": 10, "horizon": 10, "seed": 3}
    )
    summary = run_scenario(spec, tmp_path)
    assert (summary.final_p_r, summary.final_p_b) == (1.0, 1.0)
    assert summary.final_segregation == 1.0
    assert summary.reference_p == 1.0


def test_protocol2_scenario_max_deviation(tmp_path):
    spec = ScenarioSpec(
        name="p2", kind="protocol2", params={"n": 20, "horizon": 20, "c": 0.8, "seed": 5}
    )
    summary = run_scenario(spec, tmp_path)
    assert summary.reference_p == 0.75
    assert summary.max_deviation is not None and summary.max_deviation <= 1e-3


def test_sweep_scenario_reference_column(tmp_path):
    spec = ScenarioSpec(
        name="sweep",
        kind="sweep_c",
        params={
            "n": 10,
            "horizon": 12,
            "c_grid": (2.0 / 3.0, 0.8, 0.9, 1.0),
            "seeds": 3,
            "seed": 0,
        },
    )
    run_scenario(spec, tmp_path)
    rows = (tmp_path / "sweep.csv").read_text().splitlines()[1:]
    assert len(rows) == 4
    for row in rows:
        c, _seg, nash_p = (float(x) for x in row.split(","))
        # the file carries 9 significant digits
        assert nash_p == float(format(1.0 / (3.0 * c) + 1.0 / 3.0, ".9g"))


def test_opinion_scenario_writes_trace(tmp_path):
    spec = ScenarioSpec(
        name="op",
        kind="opinion",
        params={
            "n_agents": 50,
            "radius": 0.25,
            "learning_rate": 0.05,
            "exploration": 0.1,
            "c": 0.9,
            "with_recommender": True,
            "horizon": 500,
            "record_every": 100,
            "seed": 1,
        },
    )
    summary = run_scenario(spec, tmp_path)
    assert (tmp_path / "op.csv").exists()
    assert summary.final_segregation is not None
    assert "tail_mean_segregation" in summary.extras


def test_verify_myopic_scenario(tmp_path):
    spec = ScenarioSpec(
        name="vm",
        kind="verify_myopic",
        params={
            "c_states": (0.6, 0.9),
            "transition": ((0.5, 0.5), (0.5, 0.5)),
            "holding_time": 1,
            "initial_state": 0,
            "gamma": 0.9,
            "grid": 201,
            "horizon": 50,
            "seed": 0,
        },
    )
    summary = run_scenario(spec, tmp_path)
    assert abs(summary.extras["gap"]) <= 1e-3 * abs(summary.extras["dp_value"])
    rows = (tmp_path / "vm.csv").read_text().splitlines()
    assert rows[0] == "state,c,myopic_action"
    assert len(rows) == 3


def test_bench_scenario_rows(tmp_path):
    spec = ScenarioSpec(
        name="bench",
        kind="bench",
        params={"sizes": (30, 60), "p": 0.75, "repeats": 2, "c": 0.8, "seed": 0},
    )
    summary = run_scenario(spec, tmp_path)
    rows = (tmp_path / "bench.csv").read_text().splitlines()
    assert rows[0] == "n,seconds,recommended,accepted"
    assert len(rows) == 3
    assert len(summary.extras["ratios"]) == 1


def test_scenario_rerun_is_hash_identical(tmp_path):
    for name, kind, params in [
        ("p2", "protocol2", {"n": 10, "horizon": 10, "c": 0.8, "seed": 7}),
        ("eq", "nash", {"c": 0.9, "seed": 0}),
        (
            "op",
            "opinion",
            {
                "n_agents": 40,
                "radius": 0.2,
                "learning_rate": 0.05,
                "exploration": 0.1,
                "c": 0.9,
                "with_recommender": True,
                "horizon": 1000,
                "record_every": 100,
                "seed": 2,
            },
        ),
    ]:
        out_a = tmp_path / f"{name}_a"
        out_b = tmp_path / f"{name}_b"
        spec = ScenarioSpec(name=name, kind=kind, params=params)
        sum_a = run_scenario(spec, out_a)
        sum_b = run_scenario(spec, out_b)
        for fname in sum_a.files:
            assert sha256(out_a / fname) == sha256(out_b / fname), (name, fname)
        assert sum_b.files == sum_a.files


# --- CLI ---------------------------------------------------------------------


def test_cli_nash(tmp_path, capsys):
    code = main(["nash", "--c", "0.8", "--out-dir", str(tmp_path)])
    assert code == 0
    out = capsys.readouterr().out
    assert "reference=0.75" in out
    assert (tmp_path / "nash.summary.json").exists()


def test_cli_run_config(tmp_path, capsys):
    cfg = tmp_path / "scenarios.txt"
    cfg.write_text(
        "[scenario demo]\nkind = protocol2\nseed = 1\nhorizon = 12\nn = 10\n"
        "\n[scenario eq]\nkind = nash\nc = 0.7\n"
    )
    code = main(["run", str(cfg), "--out-dir", str(tmp_path / "out")])
    assert code == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 2
    assert (tmp_path / "out" / "demo.csv").exists()
    assert (tmp_path / "out" / "eq.summary.json").exists()


def test_cli_threads_flag(tmp_path, capsys):
    cfg = tmp_path / "scenarios.txt"
    cfg.write_text(
        "[scenario a]\nkind = nash\nc = 0.8\n[scenario b]\nkind = nash\nc = 0.9\n"
    )
    code = main(["run", str(cfg), "--out-dir", str(tmp_path / "out"), "--threads", "2"])
    assert code == 0
    assert (tmp_path / "out" / "a.summary.json").exists()
    assert (tmp_path / "out" / "b.summary.json").exists()


def test_cli_config_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("[scenario x]\nkind = protocol9\n")
    assert main(["run", str(bad)]) == 2
    assert "config error" in capsys.readouterr().err


def test_cli_missing_config_is_config_error(tmp_path):
    assert main(["run", str(tmp_path / "nope.txt")]) == 2


def test_cli_bad_flag_value_is_config_error(tmp_path, capsys):
    code = main(["protocol2", "--n", "abc", "--out-dir", str(tmp_path)])
    assert code == 2


def test_cli_env_var_out_dir(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("EDGEGAME_OUT_DIR", str(tmp_path / "env_out"))
    code = main(["nash", "--c", "0.8"])
    assert code == 0
    assert (tmp_path / "env_out" / "nash.summary.json").exists()


def test_cli_flag_wins_over_env(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("EDGEGAME_OUT_DIR", str(tmp_path / "env_out"))
    code = main(["nash", "--c", "0.8", "--out-dir", str(tmp_path / "flag_out")])
    assert code == 0
    assert (tmp_path / "flag_out" / "nash.summary.json").exists()
    assert not (tmp_path / "env_out").exists()
