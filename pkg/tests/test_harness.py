import csv
import subprocess
import sys

import numpy as np
import pytest

from pushfront.cli import main
from pushfront.errors import ConfigError
from pushfront.harness import (CATALOG, SCHEMA_LINE, Criterion, ExperimentConfig, ExperimentReport, emit_report,
                               list_experiments, load_config, run_experiment)


def read_rows(path):
    lines = path.read_text().splitlines()
    assert lines[0] == SCHEMA_LINE
    return list(csv.DictReader(lines[1:]))


@pytest.fixture(scope="module")
def e2_twice(tmp_path_factory):
    a, b = tmp_path_factory.mktemp("a"), tmp_path_factory.mktemp("b")
    return run_experiment(ExperimentConfig.default("E2", out=a)), a, b, run_experiment(ExperimentConfig.default("E2", out=b))


# ------------------------------------------------------------------ config

def test_defaults_valid():
    for eid in list(CATALOG) + ["sim1d", "sim2d", "frontdyn"]:
        ExperimentConfig.default(eid)


def test_config_rejects_bad_values():
    with pytest.raises(ConfigError):
        ExperimentConfig.default("E4", nz=-5)
    with pytest.raises(ConfigError):
        ExperimentConfig.default("E1", nonsense=1)
    with pytest.raises(ConfigError):
        ExperimentConfig.default("E9")
    with pytest.raises(ConfigError):
        ExperimentConfig.default("sim1d", min_speed="maybe")
    with pytest.raises(ConfigError):
        ExperimentConfig.default("E3", z_lo=10, z_hi=-10)
    with pytest.raises(ConfigError):
        ExperimentConfig.default("frontdyn", dt=-1)
    assert ExperimentConfig.default("frontdyn", dt=0).params["dt"] == 0.0


def test_config_coercion():
    cfg = ExperimentConfig.default("E2", nus="3, 5", dz="0.002")
    assert cfg.params["nus"] == [3.0, 5.0] and cfg.params["dz"] == 0.002
    assert ExperimentConfig.default("sim1d", min_speed="no").params["min_speed"] is False


def test_digest_tracks_params():
    a, b = ExperimentConfig.default("E1"), ExperimentConfig.default("E1")
    assert a.digest == b.digest and len(a.digest) == 16
    assert ExperimentConfig.default("E1", tol=1e-8).digest != a.digest


def test_load_config(tmp_path):
    ini = tmp_path / "c.ini"
    ini.write_text("[experiment]\nid = E4\nout = somewhere\n\n[E4]\nq0 = 0.01\nnz = 401\n")
    cfg = load_config(ini)
    assert cfg.experiment == "E4" and cfg.params["q0"] == 0.01 and cfg.params["nz"] == 401
    assert str(cfg.out) == "somewhere"
    ini.write_text("[experiment]\nid = E4\n\n[E5]\nT = 3\n")
    with pytest.raises(ConfigError):
        load_config(ini)
    ini.write_text("[E4]\nnz = -5\n")
    with pytest.raises(ConfigError):
        load_config(ini, experiment="E4")
    ini.write_text("[experiment]\ncolour = red\n")
    with pytest.raises(ConfigError):
        load_config(ini)
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.ini", experiment="E1")


# ------------------------------------------------------------------ reports

def test_emit_report_requires_criteria(tmp_path):
    with pytest.raises(ValueError):
        emit_report(ExperimentReport("E1", [], 0.0, {}), tmp_path)


def test_emit_single_criterion(tmp_path):
    rep = ExperimentReport("E1", [Criterion("only", 1.5, "== 1.5", 0.0, True)], 0.1, {"config_hash": "x"})
    emit_report(rep, tmp_path)
    rows = read_rows(tmp_path / "report.csv")
    assert rows == [{"criterion": "only", "measured": "1.5", "target": "== 1.5", "tol": "0.0", "pass": "true"}]
    assert "result: PASS" in (tmp_path / "report.txt").read_text()


def test_mixed_report_fails(tmp_path):
    rep = ExperimentReport("E2", [Criterion("a", 0, "", 0, True), Criterion("b", 1, "", 0, False)], 0.0, {})
    assert not rep.passed
    emit_report(rep, tmp_path)
    assert [r["pass"] for r in read_rows(tmp_path / "report.csv")] == ["true", "false"]
    assert "result: FAIL" in (tmp_path / "report.txt").read_text()


def test_list_experiments():
    items = list_experiments()
    ids = [i for i, _ in items]
    assert len(items) == 7 and len(set(ids)) == 7 and ids == [f"E{k}" for k in range(1, 8)]
    assert "supersolution families" in dict(items)["E4"]


def test_rerun_is_byte_identical(e2_twice):
    first, a, b, second = e2_twice
    assert first.passed and second.passed
    names = sorted(p.name for p in a.glob("*.csv"))
    assert names == sorted(p.name for p in b.glob("*.csv")) and "report.csv" in names
    for n in names:
        assert (a / n).read_bytes() == (b / n).read_bytes()
    assert first.provenance == second.provenance


def test_failing_threshold_is_reported():
    rep = run_experiment(ExperimentConfig.default("E2", nus="4", bound=1e-30))
    assert not rep.passed
    assert [c.name for c in rep.criteria] == ["sup_diff_nu_4"]


def test_pipeline_error_becomes_failed_criterion():
    # no closed-form front exists for nu <= 2
    rep = run_experiment(ExperimentConfig.default("E2", nus="1.5"))
    assert not rep.passed
    assert [c.name for c in rep.criteria] == ["pipeline"] and rep.criteria[0].measured == "ValueError"


def test_e1_reports_both_speeds(tmp_path):
    rep = run_experiment(ExperimentConfig.default("E1", out=tmp_path))
    rows = {r["criterion"]: r for r in read_rows(tmp_path / "report.csv")}
    assert float(rows["kpp_min_speed"]["measured"]) == pytest.approx(2.0, abs=1e-8)
    assert float(rows["hr4_min_speed"]["measured"]) == pytest.approx(3 / np.sqrt(2), abs=1e-8)
    assert rep.passed


# ---------------------------------------------------------------------- CLI

def test_cli_list(capsys):
    assert main(["list"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert len(out) == 7 and out[0].startswith("E1")


def test_cli_profile(tmp_path, capsys):
    path = tmp_path / "p.csv"
    assert main(["profile", "--nu", "4", "--min-speed", "--output", str(path)]) == 0
    rows = read_rows(path)
    assert set(rows[0]) == {"z", "phi", "phi_prime"}
    z = np.array([float(r["z"]) for r in rows])
    phi = np.array([float(r["phi"]) for r in rows])
    assert np.max(np.abs(phi - 1 / (1 + np.exp(np.sqrt(2) * z)))) <= 1e-6


def test_cli_minspeed(capsys):
    assert main(["minspeed", "--reaction", "kpp"]) == 0
    out = capsys.readouterr().out
    c = float(out.split("c*=")[1].split()[0])
    assert c == pytest.approx(2.0, abs=1e-8) and "class=pulled" in out


def test_cli_sim1d(tmp_path):
    assert main(["--out", str(tmp_path), "sim1d", "--set", "T=2", "--set", "nz=601", "--set", "u0=profile"]) == 0
    trace = read_rows(tmp_path / "trace.csv")
    # samples at t = 1, 2; dz = 0.2 so the discrete drift is below dz^2 T
    assert len(trace) == 2 and abs(float(trace[-1]["xi"])) <= 0.2**2 * 2
    assert len(read_rows(tmp_path / "final_state.csv")) >= 601


def test_cli_sim2d(tmp_path):
    args = ["--out", str(tmp_path), "sim2d", "--set", "nx=8", "--set", "T=2", "--set", "dz=0.05"]
    assert main(args) == 0
    assert {"t", "x", "gamma"} == set(read_rows(tmp_path / "levelset.csv")[0])
    assert len(read_rows(tmp_path / "diagnostics.csv")) == 3


def test_cli_frontdyn(tmp_path):
    assert main(["--out", str(tmp_path), "frontdyn", "--set", "T=2", "--set", "nx=16"]) == 0
    for name in ("graph.csv", "graph_semilinear.csv", "compare.csv"):
        assert read_rows(tmp_path / name)


def test_cli_verify(tmp_path, capsys):
    assert main(["--out", str(tmp_path), "verify-comparison", "exponential", "--residual-csv"]) == 0
    assert "expected=super" in capsys.readouterr().out
    assert read_rows(tmp_path / "residual.csv")
    with pytest.raises(SystemExit):
        main(["verify-comparison", "rothe"])


def test_cli_experiment_exit_codes(tmp_path, capsys):
    assert main(["--out", str(tmp_path / "ok"), "experiment", "E2"]) == 0
    assert capsys.readouterr().out.count("PASS E2") == 3
    ini = tmp_path / "bad.ini"
    ini.write_text("[E2]\nbound = 1e-30\n")
    assert main(["--config", str(ini), "--out", str(tmp_path / "bad"), "experiment", "E2"]) == 1
    assert "FAIL E2" in capsys.readouterr().out


def test_cli_config_errors(tmp_path):
    ini = tmp_path / "c.ini"
    ini.write_text("[E2]\nnonsense = 1\n")
    assert main(["--config", str(ini), "experiment", "E2"]) == 2
    assert main(["--config", str(ini), "list"]) == 2
    assert main(["sim1d", "--set", "nz=-5"]) == 2
    assert main(["--threads", "0", "list"]) == 2


def test_cli_seedless_subprocess():
    # --seedless patches the RNG modules, so run it out of process
    out = subprocess.run([sys.executable, "-m", "pushfront", "--seedless", "minspeed", "--reaction", "kpp"],
                         capture_output=True, text=True, check=True)
    assert "c*=" in out.stdout
    code = ("from pushfront.cli import main, _forbid_rng\nimport numpy as np\n_forbid_rng()\n"
            "try:\n    np.random.default_rng(0)\nexcept RuntimeError:\n    print('refused')\n")
    assert subprocess.run([sys.executable, "-c", code], capture_output=True, text=True).stdout.strip() == "refused"
