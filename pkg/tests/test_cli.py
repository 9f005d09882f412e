"""Command-line front end: artifacts, determinism, exit codes."""

import json
import shutil
import subprocess

import numpy as np
import numpy.testing as npt
import pytest

from conftest import greedy_match_dev
from epscan import model
from epscan.cli import run


def read_csv(path):
    headers = {}
    rows = []
    columns = None
    for line in path.read_text().splitlines():
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition("=")
            headers[key] = value
            continue
        if columns is None:
            columns = line.split(",")
            continue
        rows.append(line.split(","))
    return headers, columns, rows


def test_spectrum_free_limit(tmp_path, base_params):
    out = tmp_path / "spectrum.csv"
    code = run(["spectrum", "--gamma-over-omega", "0", "--g-over-omega", "0",
                "--output", str(out)])
    assert code == 0
    headers, columns, rows = read_csv(out)
    assert columns == ["sweep_value", "level_index", "re_e", "im_e", "parity_index"]
    assert len(rows) == base_params.dim
    assert "np.float64" not in out.read_text()
    npt.assert_allclose(float(headers["delta"]), np.sin(np.pi / 40.0))
    got = np.array([float(r[2]) + 1j * float(r[3]) for r in rows])
    d = model.single_qubit_data(base_params)
    want = [s1 * d.lam + s2 * np.conj(d.lam) + n * base_params.omega_r
            for n in range(base_params.n_max + 1) for s1 in (1, -1) for s2 in (1, -1)]
    assert greedy_match_dev(got, want) < 1e-10


def test_spectrum_json_format(tmp_path):
    out = tmp_path / "spectrum.json"
    code = run(["spectrum", "--gamma-over-omega", "0.005", "--g-over-omega", "0.1",
                "--format", "json", "--output", str(out)])
    assert code == 0
    payload = json.loads(out.read_text())
    assert set(payload) >= {"params", "columns", "rows"}
    assert payload["params"]["n_max"] == 7
    assert len(payload["rows"]) == 32


def test_byte_determinism(tmp_path):
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    argv = ["spectrum", "--gamma-over-omega", "0.005", "--g-over-omega", "0.1"]
    assert run(argv + ["--output", str(out1)]) == 0
    assert run(argv + ["--output", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_sweep_with_ep2_report(tmp_path):
    out = tmp_path / "sweep.csv"
    code = run(["sweep", "--gamma-over-omega", "0.004", "--sweep-min", "0.1",
                "--sweep-max", "0.16", "--points", "121", "--detect-ep2",
                "--output", str(out)])
    assert code == 0
    headers, columns, rows = read_csv(out)
    assert columns == ["sweep_value", "level_index", "re_e", "im_e", "parity_index"]
    assert len(rows) == 121 * 32
    assert headers["sweep_param"] == "g"
    ep2 = tmp_path / "sweep_ep2.csv"
    headers2, columns2, rows2 = read_csv(ep2)
    assert columns2 == ["sweep_value_lo", "sweep_value_hi", "parity_a", "parity_b"]
    assert len(rows2) == 8
    for row in rows2:
        assert int(row[2]) * int(row[3]) == -1
        assert 0.1 <= float(row[0]) <= float(row[1]) <= 0.16


def test_ep3_report(tmp_path, capsys):
    out = tmp_path / "ep3.json"
    code = run(["ep3", "--omega-r-ratio", "1.07", "--theta-frac", "40",
                "--output", str(out)])
    assert code == 0
    captured = capsys.readouterr()
    assert "EP3: g_cr/omega=0.137043" in captured.out
    payload = json.loads(out.read_text())
    npt.assert_allclose(payload["g_cr"], 0.1375, rtol=0.01)
    npt.assert_allclose(payload["gamma_cr"], 7.65e-3, rtol=0.01)
    assert payload["rank_ok"] is True
    assert payload["residual"] < 1e-10
    assert payload["params"]["omega_r"] == 1.07


def test_compare_deviation_onset(tmp_path):
    out = tmp_path / "compare.csv"
    code = run(["compare", "--gamma-over-omega", "0.005", "--g-max", "0.4",
                "--g-points", "41", "--output", str(out)])
    assert code == 0
    headers, columns, rows = read_csv(out)
    assert columns[:4] == ["g_over_omega", "level_index", "re_e_ed", "im_e_ed"]
    dev = {}
    for row in rows:
        g = float(row[0])
        d = abs(float(row[2]) - float(row[4]))
        dev[g] = max(dev.get(g, 0.0), d)
    gs = sorted(dev)
    exceeding = [g for g in gs if dev[g] > 1e-2]
    assert exceeding and 0.12 <= exceeding[0] <= 0.2
    below = [g for g in gs if g <= 0.12]
    assert all(dev[g] < 1e-2 for g in below)


def test_phase_diagram_artifact(tmp_path):
    out = tmp_path / "phase.csv"
    code = run(["phase-diagram", "--grid", "31x21", "--output", str(out)])
    assert code == 0
    headers, columns, rows = read_csv(out)
    assert columns == ["g_over_omega", "gamma_over_omega", "max_im_e",
                       "min_level_dist", "class"]
    assert len(rows) == 31 * 21
    assert headers["grid"] == "31x21"
    classes = {row[4] for row in rows}
    assert classes <= {"three-real", "one-real-pair", "ep2", "ep3"}
    assert "one-real-pair" in classes


def test_config_file_with_flag_override(tmp_path):
    config = tmp_path / "config.json"
    config.write_text(json.dumps(
        {"omega": 1.0, "theta": np.pi / 40.0, "gamma": 0.012, "n_max": 4}))
    out = tmp_path / "spectrum.csv"
    code = run(["spectrum", "--config", str(config), "--gamma-over-omega", "0.005",
                "--output", str(out)])
    assert code == 0
    headers, _, rows = read_csv(out)
    assert float(headers["gamma"]) == 0.005
    assert headers["n_max"] == "4"
    assert len(rows) == 20


def test_usage_errors_exit_one(tmp_path):
    assert run(["spectrum", "--no-such-flag"]) == 1
    assert run(["spectrum", "--delta", "0.1", "--theta-frac", "40"]) == 1
    assert run(["spectrum", "--theta-frac", "40", "--theta-rad", "0.1"]) == 1
    assert run(["sweep", "--points", "1"]) == 1
    assert run(["sweep", "--sweep-min", "0.3", "--sweep-max", "0.1"]) == 1
    assert run(["phase-diagram", "--grid", "bogus"]) == 1
    assert run(["ep3", "--initial-g", "0.1"]) == 1
    assert run(["compare", "--g-points", "1"]) == 1


def test_domain_errors_exit_two(tmp_path):
    assert run(["spectrum", "--gamma-over-omega", "-0.1",
                "--output", str(tmp_path / "x.csv")]) == 2
    assert run(["ep3", "--theta-rad", "1e-6",
                "--output", str(tmp_path / "y.json")]) == 2
    config = tmp_path / "bad.json"
    config.write_text(json.dumps({"omega": 1.0, "theta": 0.1, "bogus": 2}))
    assert run(["spectrum", "--config", str(config),
                "--output", str(tmp_path / "z.csv")]) == 2


@pytest.mark.skipif(shutil.which("epscan") is None, reason="entry point not installed")
def test_console_entry_point():
    proc = subprocess.run(["epscan", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "spectrum" in proc.stdout
    proc = subprocess.run(["epscan"], capture_output=True, text=True)
    assert proc.returncode == 1
