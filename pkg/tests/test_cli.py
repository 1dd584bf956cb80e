import json
import subprocess
import sys

import pytest

from pacstl import cli
from pacstl.errors import NumericalError


def _cfg(tmp_path, name, data):
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return str(p)


@pytest.fixture(scope="module")
def tube_dir(tube_banks, tmp_path_factory):
    d = tmp_path_factory.mktemp("tubes")
    for v, tubes in tube_banks.items():
        for i, t in enumerate(tubes, 1):
            t.save(d / f"{v}_ellipsoid_U{i}.json")
    return d


def test_entry_point_help():
    r = subprocess.run([sys.executable, "-m", "pacstl.cli", "--help"], capture_output=True, text=True)
    assert r.returncode == 0 and "run-scenario" in r.stdout


def test_unknown_config_key_exits_2(tmp_path, capsys):
    code = cli.main(["run-scenario", "--config", _cfg(tmp_path, "c.json", {"sedes": 3}), "--out", str(tmp_path)])
    assert code == 2 and "unknown config keys" in capsys.readouterr().err


def test_unreadable_config_exits_2(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert cli.main(["duffing", "--config", str(bad), "--out", str(tmp_path)]) == 2


def test_missing_tube_names_bucket(tmp_path, capsys):
    code = cli.main(["run-scenario", "--config", _cfg(tmp_path, "c.json", {"tube_dir": str(tmp_path / "none")}),
                     "--out", str(tmp_path / "o")])
    assert code == 2 and "bucket U1" in capsys.readouterr().err


def test_zero_seeds_gives_empty_summary(tmp_path):
    out = tmp_path / "o"
    assert cli.main(["run-scenario", "--config", _cfg(tmp_path, "c.json", {"seeds": 0}), "--out", str(out)]) == 0
    summary = json.loads((out / "scenario_summary.json").read_text())
    assert summary["n_runs"] == 0 and summary["mean_t_e"] is None


def test_run_scenario_reproducible_from_snapshot(tmp_path, tube_dir):
    cfg = {"tube_dir": str(tube_dir), "seeds": 2, "max_time": 12.0, "scenario": "in_between", "pairing": "S-S"}
    a, b = tmp_path / "a", tmp_path / "b"
    assert cli.main(["run-scenario", "--config", _cfg(tmp_path, "c.json", cfg), "--out", str(a)]) == 0
    assert cli.main(["run-scenario", "--config", str(a / "config.json"), "--out", str(b)]) == 0
    sa = json.loads((a / "scenario_summary.json").read_text())
    sb = json.loads((b / "scenario_summary.json").read_text())
    assert sa == sb and set(sa) >= {"head_on", "crossing"}
    assert cli.main(["validate", str(a)]) == 0


def test_snapshot_for_other_command_rejected(tmp_path):
    snap = _cfg(tmp_path, "snap.json", {"command": "duffing", "N": 10})
    assert cli.main(["fit-tube", "--config", snap, "--out", str(tmp_path)]) == 2


def test_fit_tube_writes_files_and_check_fails_on_small_sample(tmp_path):
    cfg = _cfg(tmp_path, "c.json", {"buckets": [2], "N": 200, "M": 200, "vessel": "S"})
    out = tmp_path / "o"
    assert cli.main(["fit-tube", "--config", cfg, "--out", str(out), "--check"]) == 4
    assert (out / "S_ellipsoid_U2.json").exists()
    assert cli.main(["validate", str(out)]) == 0


def test_fit_tube_rejects_bad_bucket(tmp_path):
    cfg = _cfg(tmp_path, "c.json", {"buckets": [7], "N": 10, "M": 10})
    assert cli.main(["fit-tube", "--config", cfg, "--out", str(tmp_path)]) == 2


def test_eval_builtin_and_formula(tmp_path, tube_dir):
    ego = [[5.0 - 0.15 * k, -1.0, 3.14159, -0.3, 0.0] for k in range(6)]
    base = {"tube": str(tube_dir / "L_ellipsoid_U1.json"), "ego": ego, "other_pose": [-2.5, 1.5, -0.45]}
    out = tmp_path / "o"
    assert cli.main(["eval", "--config", _cfg(tmp_path, "c.json", base), "--out", str(out), "--mode", "tube"]) == 0
    rep = json.loads((out / "eval.json").read_text())
    assert rep["mode"] == "tube" and rep["interval"][0] <= rep["interval"][1]
    formula = dict(base, spec="(G 0 2.5 time_horizon)")
    assert cli.main(["eval", "--config", _cfg(tmp_path, "f.json", formula), "--out", str(out)]) == 0
    unknown = dict(base, spec="(G 0 1 speed)")
    assert cli.main(["eval", "--config", _cfg(tmp_path, "u.json", unknown), "--out", str(out)]) == 2
    assert cli.main(["eval", "--out", str(out)]) == 2


def test_validate_flags_bad_files(tmp_path):
    bad = tmp_path / "x.json"
    bad.write_text(json.dumps({"sets": [], "eps_tube": 2.0}))
    assert cli.main(["validate", str(bad)]) == 2
    odd = tmp_path / "y.csv"
    odd.write_text("a,b\n1,2\n")
    assert cli.main(["validate", str(odd)]) == 2


def test_numerical_failure_exits_3(tmp_path, monkeypatch):
    def boom(cfg, out):
        raise NumericalError("singular")

    monkeypatch.setitem(cli.COMMANDS, "duffing", boom)
    assert cli.main(["duffing", "--out", str(tmp_path)]) == 3


def test_duffing_small_run_outputs(tmp_path):
    cfg = _cfg(tmp_path, "c.json", {"N": 150, "M": 150, "refine_iters": 5, "boundary_points": 20})
    out = tmp_path / "o"
    assert cli.main(["duffing", "--config", cfg, "--out", str(out)]) == 0
    rep = json.loads((out / "duffing_report.json").read_text())
    assert set(rep) >= {"ellipsoid", "zonotope_four", "zonotope_identity"}
    assert cli.main(["validate", str(out)]) == 0
