import csv
import json

import pytest

from dasc.cli import main


def test_spectrum_outputs_and_rerun_identical(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["spectrum", "--config", "fig1.json", "--out", str(a)]) == 0
    assert main(["spectrum", "--config", "fig1.json", "--out", str(b)]) == 0
    assert (a / "spectrum.csv").read_bytes() == (b / "spectrum.csv").read_bytes()
    assert (a / "spectrum.json").read_bytes() == (b / "spectrum.json").read_bytes()
    with open(a / "spectrum.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["freq_ghz_rel_zpl", "S_x", "S_y", "S_z", "S_total"]
    manifest = json.loads((a / "spectrum_manifest.json").read_text())
    assert manifest["schema"] == "dasc-manifest/1"
    assert manifest["resolved_config"]["drive"]["detuning_ghz"] == -400.0


def test_power_and_sweep(tmp_path, capsys):
    cfg = tmp_path / "small.json"
    cfg.write_text(json.dumps({
        "emitter": {"preset": "siv_four_level", "merge_ground_states": True},
        "drive": {"detuning_ghz": -300.0, "rabi_rad_per_ps": {"x": 0.2, "y": 0.2, "z": 0.2}},
        "sweep": {"temperatures_k": [10.0, 30.0], "rabi_rad_per_ps": [0.2], "grid_points": 16},
    }))
    assert main(["power", "--config", str(cfg), "--out", str(tmp_path / "p")]) == 0
    power = json.loads((tmp_path / "p" / "power.json").read_text())
    assert power["cooling_power_w"] > 0
    assert main(["sweep", "--config", str(cfg), "--out", str(tmp_path / "s"), "--threads", "2"]) == 0
    with open(tmp_path / "s" / "sweep.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert [float(r["temperature_k"]) for r in rows] == [10.0, 30.0]
    assert all(r["flag"] == "ok" for r in rows)


def test_exit_codes(tmp_path, capsys):
    assert main(["validate", "--config", str(tmp_path / "nope.json")]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"drive": {"detuning_ghz": "x"}}))
    assert main(["validate", "--config", str(bad)]) == 1
    assert "$.drive.detuning_ghz" in capsys.readouterr().err
    unphysical = tmp_path / "unphysical.json"
    unphysical.write_text(json.dumps({"phonon_bath": {"temperature_k": -1}}))
    assert main(["validate", "--config", str(unphysical)]) == 1
    assert main(["validate", "--config", "fig2.json"]) == 0
    assert main(["sweep", "--config", "fig1.json", "--out", str(tmp_path / "x")]) == 1
    # dark state in the model gives a degenerate kernel
    dark = tmp_path / "dark.json"
    dark.write_text(json.dumps({"emitter": {
        "level_energies_ghz": [0, 0, 100], "ground_indices": [0], "excited_indices": [1, 2],
        "radiative_rate_per_ns": 0.0, "dipole_channels": [{"ground": 0, "excited": 1, "polarization": "x"}]}}))
    assert main(["power", "--config", str(dark), "--out", str(tmp_path / "d")]) == 3


def test_seed_dir_env(tmp_path, monkeypatch, capsys):
    (tmp_path / "seeded.json").write_text(json.dumps({"phonon_bath": {"temperature_k": 3.0}}))
    monkeypatch.setenv("DASC_SEED_DIR", str(tmp_path))
    assert main(["validate", "--config", "seeded.json"]) == 0


def test_budget_flags_defaults(tmp_path, capsys):
    assert main(["budget", "--p-cool-w", "1e-14", "--emission-rate-per-ps", "5e-4", "--out", str(tmp_path)]) == 0
    report = json.loads((tmp_path / "budget.json").read_text())
    assert json.loads(capsys.readouterr().out) == report
    assert set(report["non_published_defaults_used"]) == {"beta", "dipole_debye", "e_sb_mev", "n_refr", "qe"}
    assert report["inputs"]["p_cool_w"]["source"] == "user"
    assert report["inputs"]["gamma_per_ps"]["published_default"]
    assert main(["budget", "--t-kelvin", "5", "--dipole-debye", "3"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert "dipole_debye" not in report["non_published_defaults_used"]
    assert report["inputs"]["p_cool_w"]["source"] == "simulated"
    assert main(["budget", "--p-cool-w=-1e-15", "--emission-rate-per-ps", "5e-4"]) == 0
    assert json.loads(capsys.readouterr().out)["min_density_m3"] is None


def test_bound_subcommand(capsys):
    assert main(["bound", "--t-kelvin", "10"]) == 0
    assert json.loads(capsys.readouterr().out)["bound_w"] == pytest.approx(9.56992962e-14)
