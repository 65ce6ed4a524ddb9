import json

import pytest

from tiasmc.cli import main, template_reduction

GHZ = """OPENQASM 2.0;
include "qelib1.inc";
qreg q[3];
creg c[3];
h q[0];
cx q[0],q[1];
cx q[1],q[2];
rz(pi/3) q[2];
measure q -> c;
"""


@pytest.fixture
def ghz(tmp_path):
    path = tmp_path / "ghz.qasm"
    path.write_text(GHZ)
    return path


def test_compile_run_verify(ghz, tmp_path, capsys):
    out = tmp_path / "ghz.tiasm"
    stats = tmp_path / "stats.json"
    assert main(["compile", str(ghz), "-o", str(out), "--stats", str(stats)]) == 0
    assert out.read_text().startswith("QUANTUM_REGISTER 3\n")
    d = json.loads(stats.read_text())
    assert d["rxx_count"] == 2 and d["strategy"] == "simulate(n_g=7)[jd,co,ss,ps]"
    assert main(["verify", str(ghz), str(out)]) == 0
    assert "equivalent" in capsys.readouterr().out

    result = tmp_path / "run.json"
    assert main(["run", str(out), "--shots", "50", "--seed", "3", "--json", str(result),
                 "--capture-state"]) == 0
    printed = capsys.readouterr().out.splitlines()
    assert set(printed[:50]) <= {"000", "111"}
    assert json.loads(result.read_text())["moves"] > 0


@pytest.mark.parametrize("mode,heur", [("random-gate", "none"), ("random-path", "jd,co"), ("simulate", "all")])
def test_compile_modes(ghz, tmp_path, mode, heur):
    out = tmp_path / "o.tiasm"
    assert main(["compile", str(ghz), "-o", str(out), "--mode", mode, "--heuristics", heur,
                 "--ng", "3", "--np", "4", "--seed", "2"]) == 0
    assert main(["verify", str(ghz), str(out)]) == 0


def test_verify_detects_wrong_program(ghz, tmp_path, capsys):
    out = tmp_path / "ghz.tiasm"
    main(["compile", str(ghz), "-o", str(out)])
    text = out.read_text().replace("RXX 1.57079632679", "RXX 1.2", 1)
    out.write_text(text)
    assert main(["verify", str(ghz), str(out)]) == 1
    assert "NOT equivalent" in capsys.readouterr().out


def test_run_reports_illegal_program(tmp_path, capsys):
    prog = tmp_path / "bad.tiasm"
    prog.write_text("QUANTUM_REGISTER 1\nRXX 0.5\n")
    assert main(["run", str(prog)]) == 1
    assert "RxxArity at instruction 1" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    ["compile", "missing.qasm", "-o", "x.tiasm"],
    ["compile", "{ghz}", "-o", "{tmp}/x.tiasm", "--heuristics", "fast"],
    ["run", "{tmp}/syntax.tiasm"],
    ["frobnicate"],
    [],
])
def test_usage_errors_exit_2(argv, ghz, tmp_path):
    (tmp_path / "syntax.tiasm").write_text("QUANTUM_REGISTER 1\nJUMP\n")
    argv = [a.format(ghz=ghz, tmp=tmp_path) for a in argv]
    assert main(argv) == 2


def test_bad_qasm_exit_2(tmp_path, capsys):
    src = tmp_path / "bad.qasm"
    src.write_text("OPENQASM 2.0; qreg q[1]; reset q[0];")
    assert main(["compile", str(src), "-o", str(tmp_path / "x.tiasm")]) == 2
    assert "Unsupported" in capsys.readouterr().err


def test_bench_writes_reports(tmp_path, capsys):
    ds = tmp_path / "ds.json"
    ds.write_text(json.dumps({"num_circuits": 3, "qubit_range": [2, 8]}))
    csv_path, json_path = tmp_path / "r.csv", tmp_path / "r.json"
    assert main(["bench", "--dataset", str(ds), "--matrix", "ng-sweep", "--csv", str(csv_path),
                 "--json", str(json_path)]) == 0
    assert len(csv_path.read_text().splitlines()) == 1 + 3 * 5
    assert len(json.loads(json_path.read_text())["summary"]) == 5
    assert "simulate(n_g=10)" in capsys.readouterr().out


def test_bench_custom_matrix(tmp_path):
    m = tmp_path / "m.json"
    m.write_text(json.dumps([{"mode": "random-gate", "n_g": 1, "rng_seed": 4}]))
    out = tmp_path / "r.csv"
    assert main(["bench", "--matrix", str(m), "--circuits", "2", "--csv", str(out)]) == 0
    assert out.read_text().count("random-gate[none]") == 2


def test_opt_stats(capsys):
    assert main(["opt-stats", "--seeds", "3"]) == 0
    text = capsys.readouterr().out
    assert "template off" in text and "residual" in text
    r = template_reduction(3)
    assert r["template_residual"] <= r["template_strict"] <= r["template_off"]
