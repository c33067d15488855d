import json

import pytest

from dasc.config import ConfigError, load_config, parse_config, resolve_config_path
from dasc.model import ModelError, merge_ground_states, siv_four_level


def test_shipped_configs_load():
    for name in ("siv_default.json", "fig1.json", "fig2.json"):
        assert load_config(name).model.n_levels in (3, 4)


def test_explicit_and_preset_emitters_agree():
    a = load_config("siv_default.json")
    b = load_config("fig1.json")
    for x, y in zip(a.model.level_energies, b.model.level_energies):
        assert x == pytest.approx(y, abs=1e-12)
    assert a.model.dipole_channels == b.model.dipole_channels
    assert a.model.phonon_channels == b.model.phonon_channels


def test_merged_preset():
    cfg = load_config("fig2.json")
    assert cfg.model.pl_lines() == pytest.approx(merge_ground_states(siv_four_level()).pl_lines())
    assert len(cfg.sweep["temperatures_k"]) == 7


def test_unit_conversion():
    cfg = parse_config({"drive": {"detuning_ghz": -400.0, "rabi_rad_per_ps": {"x": 0.2}},
                        "phonon_bath": {"temperature_k": 4.0, "gamma_ph_per_ns": 5.0}})
    assert cfg.drive.detuning == pytest.approx(-0.8 * 3.141592653589793)
    assert cfg.bath.gamma_ph == pytest.approx(5e-3)
    assert cfg.model.radiative_rate == pytest.approx(1e-3)
    assert cfg.resolved["solver"]["grid_points"] == 4001


@pytest.mark.parametrize("data,path", [
    ({"drive": {"detuning_ghz": "fast"}}, "$.drive.detuning_ghz"),
    ({"drive": {"rabi_rad_per_ps": {"x": -1.0}}}, "$.drive.rabi_rad_per_ps.x"),
    ({"bogus": 1}, "$"),
    ({"sweep": {"rabi_rad_per_ps": [0.2]}}, "$.sweep.temperatures_k"),
    ({"sweep": {"temperatures_k": [1.0], "rabi_rad_per_ps": [0.2], "window_ghz": [5, 1]}}, "$.sweep.window_ghz"),
])
def test_schema_errors_carry_path(data, path):
    with pytest.raises(ConfigError) as err:
        parse_config(data)
    assert err.value.path == path


def test_bad_level_index():
    em = {"preset": "siv_four_level", "dipole_channels": [{"ground": 0, "excited": 9, "polarization": "x"}]}
    with pytest.raises(ConfigError):
        parse_config({"emitter": em})


def test_physics_error_from_config():
    with pytest.raises(ModelError):
        parse_config({"phonon_bath": {"temperature_k": -3.0}})


def test_seed_dir_lookup(tmp_path, monkeypatch):
    (tmp_path / "mine.json").write_text(json.dumps({"phonon_bath": {"temperature_k": 7.0}}))
    monkeypatch.setenv("DASC_SEED_DIR", str(tmp_path))
    assert resolve_config_path("mine.json") == tmp_path / "mine.json"
    assert load_config("mine.json").bath.temperature == 7.0
    with pytest.raises(FileNotFoundError):
        resolve_config_path("absent.json")
