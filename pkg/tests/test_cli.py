import csv
import json
import math
import subprocess
import sys

import pytest

from thermo_opt.cli import main

from conftest import MODELS


def run(tmp_path, *argv):
    out = tmp_path / "out"
    code = main([*argv, "--out-dir", str(out)])
    return code, out


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_zerotemp_log3(tmp_path):
    code, out = run(tmp_path, "zerotemp", str(MODELS / "scalar_log3.json"))
    assert code == 0
    rows = read_csv(out / "zerotemp.csv")
    assert rows[0] == ["t", "pressure", "bracket_width", "energy", "entropy_rate", "tail_mass",
                       "top_cylinder", "top_weight"]
    assert float(rows[-1][3]) == pytest.approx(math.log(3), abs=1e-3)
    mx = json.loads((out / "maximiser.json").read_text())
    assert mx["schema_version"] == 1


def test_pressure_csv(tmp_path):
    code, out = run(tmp_path, "pressure", str(MODELS / "scalar_log3.json"))
    assert code == 0
    rows = read_csv(out / "pressure.csv")
    assert rows[0] == ["t", "n", "log_Z_n", "p_n", "bracket_lo", "bracket_hi", "point"]
    last = [r for r in rows[1:] if r[0] == rows[1][0]][-1]
    assert float(last[-1]) == pytest.approx(math.log(4), abs=1e-8)


def test_gibbs_and_jsr(tmp_path):
    code, out = run(tmp_path, "gibbs", str(MODELS / "positive_pair.json"))
    assert code == 0
    cert = json.loads((out / "certificate.json").read_text())
    assert cert["schema_version"] == 1
    assert read_csv(out / "weights.csv")[0] == ["t", "word", "weight"]
    code, out = run(tmp_path, "jsr", str(MODELS / "positive_pair.json"))
    assert code == 0
    body = json.loads((out / "jsr.json").read_text())
    assert body["verdict"] == "PASS"
    assert body["thermo"]["value"] == pytest.approx((3 + math.sqrt(5)) / 2, abs=2e-2)


def test_lyap(tmp_path):
    code, out = run(tmp_path, "lyap", str(MODELS / "repeller_diag.json"))
    assert code == 0
    body = json.loads((out / "lyap.json").read_text())
    assert body["alpha"] == pytest.approx(math.log(4), abs=1e-3)


@pytest.mark.parametrize("name", ["scalar_log3", "positive_pair", "golden_mean", "countable_geometric"])
def test_verify_passes(tmp_path, name):
    code, out = run(tmp_path, "verify", str(MODELS / (name + ".json")))
    body = json.loads((out / "verify.json").read_text())
    assert code == 0, body["failed"]
    assert body["result"] == "PASS"


def test_verify_corrupted(tmp_path):
    code, out = run(tmp_path, "verify", str(MODELS / "corrupted_measure.json"))
    assert code == 1
    body = json.loads((out / "verify.json").read_text())
    assert any(n.startswith("gibbs_certificate") for n in body["failed"])


def test_exit_codes(tmp_path, capsys):
    assert main(["pressure", str(MODELS / "bad_transition.json")]) == 2
    assert "ZeroRowOrColumn" in capsys.readouterr().err
    assert main(["pressure", str(MODELS / "non_mixing.json")]) == 3
    assert "NotMixing" in capsys.readouterr().err
    assert main(["lyap", str(MODELS / "repeller_rotation.json")]) == 3
    assert "NotAlmostAdditive" in capsys.readouterr().err
    assert main(["pressure", str(tmp_path / "missing.json")]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"shift": {"type": "full", "k": 2}, "potential": {"type": "scalar", "weights": [0, 1]},
                               "schedule": [2, 1]}))
    assert main(["pressure", str(bad)]) == 2


@pytest.mark.parametrize("cmd", ["pressure", "zerotemp", "jsr", "gibbs"])
def test_deterministic(tmp_path, cmd):
    model = str(MODELS / "positive_pair.json")
    a = tmp_path / "a"
    b = tmp_path / "b"
    c = tmp_path / "c"
    assert main([cmd, model, "--out-dir", str(a), "--threads", "1"]) == 0
    assert main([cmd, model, "--out-dir", str(b), "--threads", "1"]) == 0
    assert main([cmd, model, "--out-dir", str(c), "--threads", "4"]) == 0
    for f in a.iterdir():
        assert f.read_bytes() == (b / f.name).read_bytes() == (c / f.name).read_bytes()


def test_stdout_and_module_entry():
    r = subprocess.run([sys.executable, "-m", "thermo_opt", "pressure", str(MODELS / "scalar_log3.json")],
                       capture_output=True, text=True)
    assert r.returncode == 0
    assert r.stdout.startswith("t,n,log_Z_n")
    r = subprocess.run([sys.executable, "-m", "thermo_opt", "--help"], capture_output=True, text=True)
    assert "zerotemp.csv" in r.stdout
