from __future__ import annotations

import csv
import json
import subprocess
import sys

import pytest

from freelukacs.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip().startswith("{") else out), err


def test_law_mp(capsys):
    code, doc, _ = run(capsys, "law", "mp", "--lambda", "2", "--alpha", "1", "--k", "8")
    assert code == 0 and doc["schema"] == 1
    assert doc["moments"][:4] == ["2", "6", "22", "90"]
    assert doc["cumulants"] == ["2"] * 8
    assert doc["atoms"] == []


def test_law_mp_with_atom(capsys):
    code, doc, _ = run(capsys, "law", "mp", "--lambda", "1/2", "--mode", "float", "--k", "2")
    assert code == 0
    assert doc["atoms"] == [{"location": 0.0, "weight": 0.5}]
    assert doc["moments"] == [0.5, 0.75]


def test_law_fb_arcsine(capsys):
    code, doc, _ = run(capsys, "law", "fb", "--sigma", "1", "--theta", "1", "--samples", "11")
    assert code == 0
    assert doc["atoms"] == [] and doc["moments"][:2] == ["1/2", "3/8"]
    assert len(doc["density"]["x"]) == 11


def test_law_fb_outside_region(capsys):
    code, out, err = run(capsys, "law", "fb", "--sigma", "0.5", "--theta", "0.4")
    assert code == 2 and out == ""
    assert '"ratio_total": "-9"' in err


def test_law_fb_negative_parameters(capsys):
    code, doc, _ = run(capsys, "law", "fb", "--sigma", "-3", "--theta", "1", "--k", "3")
    assert code == 0 and "note" in doc and "density" not in doc


def test_law_csv(tmp_path, capsys):
    out = tmp_path / "mp.csv"
    assert main(["law", "mp", "--lambda", "2", "--format", "csv", "--samples", "5", "--out", str(out)]) == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 5 and set(rows[0]) == {"x", "density"}


def test_forward_pass(capsys):
    code, doc, _ = run(capsys, "forward", "--sigma", "1", "--theta", "1", "--alpha", "1", "--k", "6")
    assert code == 0 and doc["passed"]
    assert doc["regression"]["c1"] == "1" and doc["regression"]["c2"] == "2"


def test_forward_constants(capsys):
    code, doc, _ = run(capsys, "forward", "--sigma", "2", "--theta", "3", "--alpha", "1/2", "--k", "4")
    assert code == 0
    assert doc["regression"]["c1"] == "3/2" and doc["regression"]["c2"] == "3"


def test_forward_negative_control(capsys):
    code, doc, _ = run(capsys, "forward", "--sigma", "1", "--theta", "1", "--alpha", "1", "--lambda", "2.5")
    assert code == 1 and not doc["passed"]
    assert doc["certificate"]["violations"]


def test_inverse(capsys):
    code, doc, _ = run(capsys, "inverse", "--c1", "1", "--c2", "2", "--beta0", "2", "--alpha1", "1")
    assert code == 0
    assert doc["laws"] == {"V": "MP(2, 1)", "U": "fb(1, 1)"}
    assert set(doc["solution"]["transforms"]) == {"r_V", "psi_VU", "S_VU", "S_V", "S_U"}


def test_inverse_degenerate(capsys):
    code, _, err = run(capsys, "inverse", "--c1", "1", "--c2", "1")
    assert code == 2 and "c2 > c1^2" in err


def test_roundtrip(capsys):
    code, doc, _ = run(capsys, "roundtrip", "--sigma", "2", "--theta", "3", "--alpha", "0.5")
    assert code == 0 and doc["exact_match"] and doc["forward_passed"]
    assert doc["recovered"] == {"sigma": "2", "theta": "3", "alpha": "1/2", "lambda": "5"}


def test_roundtrip_float_perturbed(capsys):
    code, doc, _ = run(capsys, "roundtrip", "--sigma", "1", "--theta", "1", "--mode", "float",
                       "--perturb-gamma0", "0.001")
    assert code == 1
    assert doc["deviations"]["theta"] > 0


def test_simulate_word(capsys):
    code, doc, _ = run(capsys, "simulate", "--n", "100", "--reps", "20", "--word", "VUVU", "--seed", "7")
    assert code == 0
    est = doc["estimates"][0]
    assert est["word"] == "VUVU" and abs(est["mean"] - 2.0) < 0.05
    assert doc["parameters"]["seed"] == 7


def test_simulate_records_generated_seed(capsys):
    code, doc, _ = run(capsys, "simulate", "--n", "20", "--reps", "10", "--word", "UV",
                       "--ks-threshold", "1", "--z-threshold", "100")
    assert code == 0 and isinstance(doc["parameters"]["seed"], int)


def test_simulate_deterministic(capsys):
    args = ["simulate", "--n", "30", "--reps", "10", "--word", "UV", "--seed", "3"]
    _, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args)
    assert a["estimates"] == b["estimates"]


def test_simulate_inadmissible(capsys):
    code, _, err = run(capsys, "simulate", "--n", "10", "--sigma", "0.02", "--theta", "0.02")
    assert code == 2 and "N - 1" in err


def test_output_dir_env(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("FREELUKACS_OUTPUT_DIR", str(tmp_path))
    assert main(["inverse", "--c1", "2", "--c2", "6", "--beta0", "4", "--alpha1", "2"]) == 0
    doc = json.loads((tmp_path / "inverse.json").read_text())
    assert doc["solution"]["lambda"] == "4"


def test_bad_number(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["law", "mp", "--lambda", "two"])
    assert exc.value.code == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "freelukacs", "law", "mp", "--lambda", "1", "--k", "3"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["moments"] == ["1", "2", "5"]
