import csv
import io
import json
import math
import subprocess
import sys
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from diracsu11.cli import main

S = math.sqrt(0.75)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_spectrum_csv(capsys):
    code, out, _ = run(capsys, "spectrum", "--gamma", "0.5", "--k", "-1", "--n-max", "1")
    assert code == 0
    assert out.splitlines()[0] == "n,N,s,xi,E_over_m,E"
    table = rows(out)
    assert [r["E_over_m"] for r in table] == ["0.866025404", "0.965925826"]
    assert "\r" not in out and out.endswith("\n")


def test_spectrum_near_critical(capsys):
    code, out, _ = run(capsys, "spectrum", "--gamma", "0.999", "--k", "-1", "--n-max", "0")
    assert code == 0
    assert float(rows(out)[0]["E_over_m"]) == pytest.approx(math.sqrt(1 - 0.999**2), rel=1e-8)


def test_spectrum_positive_k_starts_at_n1(capsys):
    _, out, _ = run(capsys, "spectrum", "--k", "2", "--n-max", "3")
    assert [r["n"] for r in rows(out)] == ["1", "2", "3"]


def test_spectrum_json_and_mass(capsys):
    code, out, _ = run(capsys, "spectrum", "--format", "json", "--mass", "2", "--n-max", "2")
    payload = json.loads(out)
    assert code == 0 and len(payload["levels"]) == 3
    lv = payload["levels"][0]
    assert lv["E"] == pytest.approx(2 * lv["E_over_m"], rel=1e-8)


@pytest.mark.parametrize(
    "argv",
    [
        ["spectrum", "--gamma", "1.5", "--k", "-1"],
        ["spectrum", "--k", "0"],
        ["spectrum", "--format", "svg"],
        ["wavefunction", "--k", "1", "--n", "0"],
        ["wavefunction", "--samples", "1"],
        ["verify", "--gamma", "2.0"],
        ["diagram", "--gamma", "1.0"],
        ["diagram", "--format", "json"],
    ],
)
def test_invalid_input_exits_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == "" and err.startswith("error:")


def test_wavefunction_ground_state_upper_is_null(capsys):
    code, out, _ = run(capsys, "wavefunction", "--n", "0", "--samples", "50")
    assert code == 0
    table = rows(out)
    assert list(table[0]) == ["rho", "F1", "F2"]
    assert all(float(r["F1"]) == 0.0 for r in table)
    assert any(float(r["F2"]) != 0.0 for r in table)


def test_wavefunction_small_rho_power(capsys):
    _, out, _ = run(capsys, "wavefunction", "--n", "1", "--rho-max", "1e-4", "--samples", "11",
                    "--component", "lower")
    table = rows(out)
    assert list(table[0]) == ["rho", "F2"]
    rho = np.array([float(r["rho"]) for r in table[1:]])
    f2 = np.array([float(r["F2"]) for r in table[1:]])
    slope = np.polyfit(np.log(rho), np.log(f2), 1)[0]
    assert slope == pytest.approx(S, rel=1e-2)


def test_wavefunction_n1_single_node(capsys):
    _, out, _ = run(capsys, "wavefunction", "--n", "1", "--rho-max", "40", "--samples", "2000")
    f2 = np.array([float(r["F2"]) for r in rows(out)])
    f2 = f2[np.abs(f2) > 1e-12]
    assert np.count_nonzero(np.diff(np.sign(f2))) == 1


def test_outputs_are_deterministic(capsys):
    for argv in (["spectrum", "--n-max", "4"], ["wavefunction", "--n", "2"], ["diagram"],
                 ["verify", "--n-max", "2"]):
        _, first, _ = run(capsys, *argv)
        _, second, _ = run(capsys, *argv)
        assert first == second and first


def test_out_path(capsys, tmp_path):
    path = tmp_path / "levels.csv"
    code, out, _ = run(capsys, "spectrum", "--out", str(path))
    assert code == 0 and out == ""
    assert path.read_text().startswith("n,N,s,xi,E_over_m,E\n")


def test_verify_defaults(capsys):
    code, out, _ = run(capsys, "verify")
    report = json.loads(out)
    assert code == 0 and report["passed"] is True
    assert set(report) == {"version", "parameters", "entries", "passed"}
    assert isinstance(report["version"], str)
    keys = set()
    for e in report["entries"]:
        assert set(e) == {"check_name", "parameters", "measured_error", "tolerance", "passed"}
        assert isinstance(e["measured_error"], (int, float))
        keys.add((e["check_name"], json.dumps(e["parameters"], sort_keys=True)))
    assert len(keys) == len(report["entries"])


def test_verify_perturbed_exits_1(capsys):
    code, out, err = run(capsys, "verify", "--perturb")
    assert code == 1 and json.loads(out)["passed"] is False
    assert "verification failed" in err


def test_perturb_flag_is_hidden(capsys):
    with pytest.raises(SystemExit):
        main(["verify", "--help"])
    assert "--perturb" not in capsys.readouterr().out


def test_diagram_svg(capsys):
    code, out, _ = run(capsys, "diagram", "--gamma", "0.5", "--k-max", "2", "--N-max", "3")
    assert code == 0
    root = ET.fromstring(out.encode())
    ns = "{http://www.w3.org/2000/svg}"
    levels = [el for el in root.iter(f"{ns}line") if el.get("class") == "level"]
    keys = {(int(el.get("data-k")), int(el.get("data-N"))) for el in levels}
    assert keys == {(-1, 1), (-1, 2), (-1, 3), (1, 2), (1, 3), (-2, 2), (-2, 3), (2, 3)}
    for el in levels:
        dashed = el.get("data-dashed") == "true"
        assert dashed == (el.get("data-n") == "0")
        assert ("stroke-dasharray" in el.attrib) == dashed
    arrows = {el.get("data-label") for el in root.iter(f"{ns}line") if el.get("class") == "arrow"}
    assert {"Sigma+", "Sigma-", "Xi+", "Xi-", "A+", "A-"} <= arrows


def test_diagram_csv(capsys):
    code, out, _ = run(capsys, "diagram", "--format", "csv", "--k-max", "1", "--N-max", "1")
    assert code == 0
    assert rows(out) == [{"k": "-1", "n": "0", "N": "1", "E_over_m": "0.866025404", "dashed": "true"}]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "diracsu11", "spectrum", "--n-max", "0"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and "0.866025404" in proc.stdout
    proc = subprocess.run([sys.executable, "-m", "diracsu11", "spectrum", "--gamma", "1.5"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 2 and proc.stderr
