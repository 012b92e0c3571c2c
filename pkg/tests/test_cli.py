import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from hybridoms.cli import run
from hybridoms.params import SystemParams, derive_params
from hybridoms.peaks import find_peaks
from hybridoms.presets import get_preset


def _read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], np.array(rows[1:], dtype=object)


def _columns(path):
    header, body = _read_csv(path)
    return header, [np.array(body[:, k], dtype=float) for k in range(len(header))]


def test_ladder(tmp_path):
    out = tmp_path / "ladder.csv"
    assert run(["ladder", "--preset", "fig2", "--n-max", "2", "--out", str(out)]) == 0
    header, body = _read_csv(out)
    assert header == ["m", "n", "xi", "energy"]
    assert len(body) == 10
    assert float(body[0, 3]) == pytest.approx(-0.5)
    assert list(body[1, :3]) == ["0", "1", "+"]


def test_overlaps(tmp_path):
    out = tmp_path / "o.csv"
    assert run(["overlaps", "--preset", "fig2", "--n-trunc", "3", "--out", str(out)]) == 0
    header, body = _read_csv(out)
    assert header == ["row_n", "row_xi", "col_n", "col_xi", "value"]
    assert len(body) == 49
    assert float(body[0, 4]) == pytest.approx(0.485876, abs=1e-6)


def test_excitation_maxima(tmp_path):
    out = tmp_path / "a.csv"
    assert run(["excitation", "--preset", "fig2", "--out", str(out)]) == 0
    header, (x, y) = _columns(out)
    assert header == ["delta_k", "excitation"]
    p = get_preset("fig2").params
    d = derive_params(p)
    found = [pk.position for pk in find_peaks(x, y, rel_height=0.01)]
    targets = [-d.delta1 - d.delta2, -d.delta1 + 1 - p.lam, -d.delta1 + 1 + p.lam,
               -d.delta1 + 2 - np.sqrt(2) * p.lam, -d.delta1 + 2 + np.sqrt(2) * p.lam]
    for t in targets:
        assert min(abs(f - t) for f in found) < p.kappa / 10


def test_excitation_window_flag(tmp_path):
    out = tmp_path / "w.csv"
    assert run(["excitation", "--preset", "fig3", "--window", "-1.5,-1.4,11", "--out", str(out)]) == 0
    _, (x, _) = _columns(out)
    assert len(x) == 11 and x[0] == -1.5


def _band_weight(x, y, centre, half):
    m = np.abs(x - centre) <= half
    return np.trapezoid(y[m], x[m])


def _doublet_ratio(tmp_path, name):
    out = tmp_path / f"{name}.csv"
    assert run(["transmit", "--preset", name, "--out", str(out)]) == 0
    _, (x, y) = _columns(out)
    p = get_preset(name).params
    d = derive_params(p)
    main = -d.delta1 - d.delta2
    return _band_weight(x, y, main - p.omega_b, p.lam + 5 * p.kappa) / _band_weight(x, y, main, 5 * p.kappa)


@pytest.mark.filterwarnings("ignore::hybridoms.pulse.NormalizationWarning")
def test_transmit_weak_coupling_contrast(tmp_path):
    strong = _doublet_ratio(tmp_path, "fig4ac")
    weak = _doublet_ratio(tmp_path, "fig5")
    assert weak < strong / 10


@pytest.mark.filterwarnings("ignore::hybridoms.pulse.NormalizationWarning")
def test_transmit_rho_and_initial(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    win = "-1.66,-1.62,201"
    assert run(["transmit", "--preset", "fig6", "--rho", "0,0,1", "--window", win, "--out", str(a)]) == 0
    assert run(["transmit", "--preset", "fig6", "--initial", "0g", "--window", win, "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.filterwarnings("ignore::hybridoms.pulse.NormalizationWarning")
def test_transmit_json_amplitudes(tmp_path):
    out = tmp_path / "s.csv"
    amps = json.dumps({"0g": 0.6, "1+": [0, 0.8]})
    assert run(["transmit", "--preset", "fig4ac", "--initial", amps, "--window", "-1.2,-0.2,101",
                "--out", str(out)]) == 0


def test_transmit_rejects_both_initial_forms(tmp_path):
    assert run(["transmit", "--rho", "0,0,1", "--initial", "0g", "--out", str(tmp_path / "x.csv")]) == 1


def test_lindblad(tmp_path):
    out = tmp_path / "l.csv"
    args = ["lindblad", "--g", "0.5", "--lambda", "0.05", "--gamma-a", "1e-4", "--gamma-b", "1e-5", "--trunc", "3,12", "--window", "-0.26,-0.24,3",
            "--out", str(out)]
    assert run(args) == 0
    header, (x, n) = _columns(out)
    assert header == ["delta_l", "mean_photon_number"]
    assert np.all(n > 0)


def test_lindblad_bad_truncation_is_validation_error(tmp_path):
    out = tmp_path / "l.csv"
    assert run(["lindblad", "--preset", "fig2", "--trunc", "3,5", "--window", "0,1,2", "--out", str(out)]) == 1
    assert not out.exists()


def test_lindblad_degenerate_steady_state_is_numerical_failure(tmp_path):
    out = tmp_path / "l.csv"
    args = ["lindblad", "--g", "0", "--lambda", "0", "--gamma-a", "0", "--gamma-b", "0", "--trunc", "2,2",
            "--window", "0,0.1,2", "--out", str(out)]
    assert run(args) == 2
    assert not out.exists()


def test_tomography_round_trip(tmp_path):
    probs, rho = tmp_path / "probs.json", tmp_path / "rho.json"
    assert run(["tomography", "simulate", "--preset", "fig6", "--rho", "0.6,0.4,0.3", "--out", str(probs)]) == 0
    p = json.loads(probs.read_text())["p"]
    assert np.array(p) == pytest.approx(np.array([[0.6541, 0.3459], [0.8028, 0.1972], [0.7037, 0.2963]]), abs=5e-3)
    assert run(["tomography", "reconstruct", "--probs", str(probs), "--truth", "0.6,0.4,0.3", "--out", str(rho)]) == 0
    data = json.loads(rho.read_text())
    assert len(data["rho"]) == 4 and data["fidelity"] > 0.9999
    assert complex(*data["rho"][1]) == pytest.approx(0.3028 - 0.2037j, abs=5e-3)


def test_tomography_simulate_uses_preset_state(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(["tomography", "simulate", "--preset", "fig6", "--out", str(a)]) == 0
    assert run(["tomography", "simulate", "--preset", "fig6", "--rho", "0.6,0.4,0.3", "--out", str(b)]) == 0
    assert a.read_text() == b.read_text()


def test_tomography_reconstruct_bad_file(tmp_path):
    bad = tmp_path / "p.json"
    bad.write_text('{"q": 1}')
    assert run(["tomography", "reconstruct", "--probs", str(bad)]) == 1


def test_deterministic_output(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert run(["excitation", "--preset", "fig3", "--out", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert all(len(v) <= 19 for line in a.read_text().splitlines()[1:] for v in line.split(","))


def test_malformed_config(tmp_path):
    cfg, out = tmp_path / "cfg.json", tmp_path / "out.csv"
    cfg.write_text('{"omega_c": 10.0, "g": ')
    assert run(["excitation", "--config", str(cfg), "--out", str(out)]) == 1
    assert not out.exists()


def test_incomplete_config(tmp_path):
    cfg, out = tmp_path / "cfg.json", tmp_path / "out.csv"
    cfg.write_text(json.dumps({"g": 1.2}))
    assert run(["ladder", "--config", str(cfg), "--out", str(out)]) == 1
    assert not out.exists()


def test_unknown_flag(capsys):
    assert run(["ladder", "--frobnicate"]) == 1
    assert "usage" in capsys.readouterr().err


def test_unknown_subcommand():
    assert run(["plot"]) == 1


def test_precedence_flags_over_config_over_preset(tmp_path):
    cfg, out = tmp_path / "cfg.json", tmp_path / "o.csv"
    cfg.write_text(json.dumps(SystemParams(omega_a=1.3, g=0.7, lam=0.02).to_dict()))
    assert run(["ladder", "--preset", "fig2", "--config", str(cfg), "--omega-a", "1.5", "--n-max", "0",
                "--out", str(out)]) == 0
    _, body = _read_csv(out)
    # ground energy -omega_a / 2 from the flag; one-photon ground shows g from the config
    assert float(body[0, 3]) == pytest.approx(-0.75)
    p = SystemParams(omega_a=1.5, g=0.7, lam=0.02)
    d = derive_params(p)
    assert float(body[1, 3]) == pytest.approx(10 - d.delta1 - d.delta2 - 0.75, abs=1e-10)


def test_preset_alone(tmp_path):
    out = tmp_path / "o.csv"
    assert run(["ladder", "--preset", "fig3", "--n-max", "0", "--out", str(out)]) == 0
    _, body = _read_csv(out)
    assert float(body[0, 3]) == pytest.approx(-0.55)


def test_stdout_when_no_out(capsys):
    assert run(["ladder", "--n-max", "0"]) == 0
    assert capsys.readouterr().out.startswith("m,n,xi,energy\n")


def test_console_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "hybridoms.cli", "ladder", "--bogus"], capture_output=True, text=True)
    assert proc.returncode == 1
    assert "usage:" in proc.stderr
