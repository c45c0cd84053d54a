import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from symqual import io
from symqual.catalog import entry
from symqual.cli import build_parser, main
from symqual.layouts import concentric_circles

SNAPSHOTS = Path(__file__).parent / "snapshots"
SUBCOMMANDS = ["sq", "sqg", "detect", "layout", "generate", "perturb", "experiment"]


@pytest.fixture
def coxeter_files(tmp_path):
    e = entry("coxeter")
    grp = e.group()
    files = {
        "graph": tmp_path / "g.json",
        "group": tmp_path / "grp.json",
        "automorphism": tmp_path / "a.json",
        "drawing": tmp_path / "d.json",
    }
    files["graph"].write_text(io.dumps(e.graph))
    files["group"].write_text(io.dumps(grp))
    files["automorphism"].write_text(io.dumps(grp.rotation_generator()))
    files["drawing"].write_text(io.dumps(concentric_circles(e.graph, grp)))
    return files


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("cmd", ["main"] + SUBCOMMANDS)
def test_help_snapshot(cmd, monkeypatch, capsys):
    monkeypatch.setenv("COLUMNS", "100")
    argv = ["--help"] if cmd == "main" else [cmd, "--help"]
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 0
    assert capsys.readouterr().out == (SNAPSHOTS / f"help_{cmd}.txt").read_text()


@pytest.mark.parametrize("cmd", SUBCOMMANDS)
def test_help_lists_every_flag(cmd, monkeypatch, capsys):
    monkeypatch.setenv("COLUMNS", "100")
    parser = build_parser()
    sub = parser._subparsers._group_actions[0].choices[cmd]
    with pytest.raises(SystemExit):
        main([cmd, "--help"])
    text = capsys.readouterr().out
    for action in sub._actions:
        for flag in action.option_strings:
            assert flag in text


def test_sq_on_concentric(coxeter_files, capsys):
    f = coxeter_files
    code, out, _ = run(["sq", "--graph", f["graph"], "--drawing", f["drawing"],
                        "--automorphism", f["automorphism"]], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["sq1"] == 1.0 and rep["sq2"] == 1.0


def test_sq_formula_filter(coxeter_files, capsys):
    f = coxeter_files
    code, out, _ = run(["sq", "--graph", f["graph"], "--drawing", f["drawing"],
                        "--automorphism", f["automorphism"], "--formula", "sq1"], capsys)
    rep = json.loads(out)
    assert "sq1" in rep and "sq2" not in rep and "sq2_unclamped" not in rep


def test_detect_reports_order7(coxeter_files, capsys):
    f = coxeter_files
    code, out, _ = run(["detect", "--graph", f["graph"], "--drawing", f["drawing"]], capsys)
    assert code == 0 and json.loads(out)["rotation"]["order"] == 7


def test_detect_none(coxeter_files, tmp_path, capsys):
    f = coxeter_files
    d = json.loads(f["drawing"].read_text())
    d["positions"][0] = [3.0, 0.1]
    p = tmp_path / "bent.json"
    p.write_text(json.dumps(d))
    code, out, _ = run(["detect", "--graph", f["graph"], "--drawing", p], capsys)
    assert code == 0 and out.strip() == "none"


def test_sqg_mismatch_exits_one(coxeter_files, tmp_path, capsys):
    other = entry("petersen")
    p = tmp_path / "pg.json"
    p.write_text(io.dumps(other.group()))
    f = coxeter_files
    code, _, err = run(["sqg", "--graph", f["graph"], "--drawing", f["drawing"], "--group", p], capsys)
    assert code == 1
    assert "petersen" in err and "coxeter" in err


def test_sqg_full_group(coxeter_files, capsys):
    f = coxeter_files
    code, out, _ = run(["sqg", "--graph", f["graph"], "--drawing", f["drawing"], "--group", f["group"]], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["sqg1"] == 1.0 and rep["sqg2"] == 1.0 and rep["weight"] == 42


def test_unknown_flag_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["sq", "--bogus"])
    assert exc.value.code == 2


def test_missing_file_exits_one(tmp_path, capsys):
    code, _, err = run(["detect", "--graph", tmp_path / "nope.json", "--drawing", tmp_path / "x.json"], capsys)
    assert code == 1 and "cannot read" in err


def test_layout_tutte_and_output_file(coxeter_files, tmp_path, capsys):
    e = entry("petersen")
    g = tmp_path / "p.json"
    g.write_text(io.dumps(e.graph))
    out = tmp_path / "tutte.json"
    code, _, _ = run(["layout", "--graph", g, "--algo", "tutte", "--outer-face", *e.tutte_outer_face,
                      "-o", out], capsys)
    d = json.loads(out.read_text())
    assert code == 0 and len(d["positions"]) == 10


def test_generate_families(capsys):
    code, out, _ = run(["generate", "--family", "c", "--k", "12", "--m", "3", "--seed", "7"], capsys)
    obj = json.loads(out)
    assert obj["graph"]["name"] == "c12x3" and obj["group"]["order"] == 12
    code, out, _ = run(["generate", "--family", "axial", "--orbits", "7"], capsys)
    assert json.loads(out)["group"]["kind"] == "axial2"
    code, out, _ = run(["generate", "--family", "catalog", "--name", "petersen", "--group-label", "D5"], capsys)
    assert json.loads(out)["group"]["order"] == 10
    code, _, err = run(["generate", "--family", "catalog"], capsys)
    assert code == 1 and "petersen" in err


def test_perturb_is_deterministic(coxeter_files, capsys):
    f = coxeter_files
    argv = ["perturb", "--graph", f["graph"], "--drawing", f["drawing"], "--automorphism",
            f["automorphism"], "--step", "3", "--seed", "5"]
    _, a, _ = run(argv, capsys)
    _, b, _ = run(argv, capsys)
    assert a == b
    assert json.loads(a)["positions"] != json.loads(f["drawing"].read_text())["positions"]
    code, _, _ = run(argv[:-4] + ["--step", "11"], capsys)
    assert code == 1


def test_numbers_have_nine_significant_digits(coxeter_files, tmp_path, capsys):
    f = coxeter_files
    argv = ["perturb", "--graph", f["graph"], "--drawing", f["drawing"], "--automorphism",
            f["automorphism"], "--step", "10", "-o", tmp_path / "p.json"]
    run(argv, capsys)
    code, out, _ = run(["sq", "--graph", f["graph"], "--drawing", tmp_path / "p.json",
                        "--automorphism", f["automorphism"]], capsys)
    rep = json.loads(out)
    assert len(repr(rep["sq1"]).replace("0.", "").lstrip("0")) <= 9
    assert rep["sq1"] < 1


def test_eps_env_var(coxeter_files, monkeypatch, capsys):
    monkeypatch.setenv("SYMQUAL_EPS", "0.5")
    f = coxeter_files
    bent = json.loads(f["drawing"].read_text())
    bent["positions"][0][0] += 0.05
    f["drawing"].write_text(json.dumps(bent))
    argv = ["sq", "--graph", f["graph"], "--drawing", f["drawing"], "--automorphism", f["automorphism"]]
    _, out, _ = run(argv, capsys)
    assert json.loads(out)["sq1"] == 1.0
    _, out, _ = run(argv + ["--eps", "1e-6"], capsys)
    assert json.loads(out)["sq1"] < 1.0


def test_experiment_writes_files(tmp_path, capsys):
    code, out, _ = run(["experiment", "exp1", "--out", tmp_path, "--steps", "3"], capsys)
    assert code == 0
    assert (tmp_path / "exp1" / "coxeter.csv").exists()
    assert (tmp_path / "exp1" / "coxeter.svg").exists()
    assert out.splitlines()[0].split()[:2] == ["table", "label"]


def test_module_entry_point_exit_codes(coxeter_files):
    env = dict(os.environ, COLUMNS="100")
    f = coxeter_files
    ok = subprocess.run([sys.executable, "-m", "symqual", "detect", "--graph", str(f["graph"]),
                         "--drawing", str(f["drawing"])], capture_output=True, text=True, env=env)
    assert ok.returncode == 0
    usage = subprocess.run([sys.executable, "-m", "symqual", "frobnicate"], capture_output=True, text=True, env=env)
    assert usage.returncode == 2 and "invalid choice" in usage.stderr
