"""JSON run configuration: schema, defaults, unit conversion at load time.

File units: angular frequencies in GHz (f, converted with w = 2*pi*f*1e-3
rad/ps), rates in 1/ns, Rabi splittings in rad/ps, temperatures in K.
See ``configs/README.md`` for the field-by-field description.
"""

from __future__ import annotations

import copy
import json
import os
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import jsonschema

from .model import (
    DipoleChannel,
    DriveConfig,
    EmitterModel,
    ModelError,
    PhononBathConfig,
    PhononChannel,
    ghz_to_rad_ps,
    merge_ground_states,
    rad_ps_to_ghz,
    siv_four_level,
    validate_bath,
    validate_drive,
    validate_model,
)

SCHEMA_ID = "dasc-config/1"
SEED_ENV = "DASC_SEED_DIR"

_num = {"type": "number"}
_nonneg = {"type": "number", "minimum": 0}

SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "schema": {"const": SCHEMA_ID},
        "emitter": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "preset": {"enum": ["siv_four_level"]},
                "merge_ground_states": {"type": "boolean"},
                "level_energies_ghz": {"type": "array", "items": _num, "minItems": 2, "maxItems": 4},
                "ground_indices": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                "excited_indices": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                "zpl_center_ghz": _num,
                "radiative_rate_per_ns": _num,
                "dipole_channels": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "additionalProperties": False,
                        "required": ["ground", "excited", "polarization"],
                        "properties": {
                            "ground": {"type": "integer", "minimum": 0},
                            "excited": {"type": "integer", "minimum": 0},
                            "polarization": {"enum": ["x", "y", "z"]},
                            "amplitude": _num,
                        },
                    },
                },
                "phonon_channels": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "additionalProperties": False,
                        "required": ["i", "j"],
                        "properties": {
                            "i": {"type": "integer", "minimum": 0},
                            "j": {"type": "integer", "minimum": 0},
                            "coupling": _num,
                        },
                    },
                },
            },
        },
        "drive": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "detuning_ghz": _num,
                "rabi_rad_per_ps": {
                    "type": "object",
                    "additionalProperties": False,
                    "properties": {"x": _nonneg, "y": _nonneg, "z": _nonneg},
                },
            },
        },
        "phonon_bath": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "temperature_k": _num,
                "gamma_ph_per_ns": _num,
                "exponent": _num,
                "omega_ref_ghz": _num,
            },
        },
        "solver": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "grid_points": {"type": "integer", "minimum": 8},
                "half_span_ghz": {"type": "number", "exclusiveMinimum": 0},
                "refine_points": {"type": "integer", "minimum": 0},
            },
        },
        "sweep": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "temperatures_k": {"type": "array", "items": _nonneg, "minItems": 1},
                "rabi_rad_per_ps": {"type": "array", "items": _nonneg, "minItems": 1},
                "window_ghz": {"type": "array", "items": _num, "minItems": 2, "maxItems": 2},
                "grid_points": {"type": "integer", "minimum": 8},
                "tol": {"type": "number", "exclusiveMinimum": 0},
            },
        },
    },
}

DEFAULTS = {
    "drive": {"detuning_ghz": 0.0, "rabi_rad_per_ps": {"x": 0.0, "y": 0.0, "z": 0.0}},
    "phonon_bath": {"temperature_k": 20.0, "gamma_ph_per_ns": 10.0, "exponent": 1.0,
                    "omega_ref_ghz": rad_ps_to_ghz(1.0)},
    "solver": {"grid_points": 4001, "half_span_ghz": 600.0, "refine_points": 64},
}
SWEEP_DEFAULTS = {"window_ghz": [-800.0, 100.0], "grid_points": 64, "tol": 1e-6}


class ConfigError(ValueError):
    """Schema violation; ``path`` is a JSON path such as ``$.drive.detuning_ghz``."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


@dataclass(frozen=True)
class RunConfig:
    model: EmitterModel
    drive: DriveConfig
    bath: PhononBathConfig
    solver: dict
    sweep: dict | None
    resolved: dict  # JSON-ready, every default expanded


def _emitter_to_json(model: EmitterModel) -> dict:
    return {
        "level_energies_ghz": [rad_ps_to_ghz(e) for e in model.level_energies],
        "ground_indices": list(model.ground_indices),
        "excited_indices": list(model.excited_indices),
        "zpl_center_ghz": rad_ps_to_ghz(model.zpl_center),
        "radiative_rate_per_ns": model.radiative_rate * 1e3,
        "dipole_channels": [{"ground": c.ground, "excited": c.excited, "polarization": c.polarization,
                             "amplitude": c.amplitude} for c in model.dipole_channels],
        "phonon_channels": [{"i": c.i, "j": c.j, "coupling": c.coupling} for c in model.phonon_channels],
    }


def _emitter_from_json(em: dict) -> EmitterModel:
    """Build the emitter; preset fields are overridden by explicit ones."""
    base = _emitter_to_json(siv_four_level()) if em.get("preset") == "siv_four_level" else {}
    merged = {**base, **{k: v for k, v in em.items() if k not in ("preset", "merge_ground_states")}}
    missing = [k for k in ("level_energies_ghz", "ground_indices", "excited_indices", "dipole_channels")
               if k not in merged]
    if missing:
        raise ConfigError("$.emitter", f"missing {', '.join(missing)} (or give a preset)")
    model = EmitterModel(
        tuple(ghz_to_rad_ps(f) for f in merged["level_energies_ghz"]),
        tuple(merged["ground_indices"]),
        tuple(merged["excited_indices"]),
        tuple(DipoleChannel(c["ground"], c["excited"], c["polarization"], c.get("amplitude", 1.0))
              for c in merged["dipole_channels"]),
        tuple(PhononChannel(c["i"], c["j"], c.get("coupling", 1.0)) for c in merged.get("phonon_channels", [])),
        ghz_to_rad_ps(merged.get("zpl_center_ghz", 0.0)),
        merged.get("radiative_rate_per_ns", 1.0) * 1e-3,
    )
    bad = [i for c in model.dipole_channels for i in (c.ground, c.excited) if i >= model.n_levels]
    bad += [i for c in model.phonon_channels for i in (c.i, c.j) if i >= model.n_levels]
    if bad:
        raise ConfigError("$.emitter", f"level index {max(bad)} out of range for {model.n_levels} levels")
    validate_model(model)
    if em.get("merge_ground_states"):
        model = merge_ground_states(model)
    return model


def parse_config(data: dict) -> RunConfig:
    """Validate a config mapping and convert it to internal units."""
    validator = jsonschema.Draft202012Validator(SCHEMA)
    errors = sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        raise ConfigError(e.json_path, e.message)
    cfg = copy.deepcopy(data)
    for section, defaults in DEFAULTS.items():
        merged = copy.deepcopy(defaults)
        for k, v in cfg.get(section, {}).items():
            if isinstance(v, dict) and isinstance(merged.get(k), dict):
                merged[k].update(v)
            else:
                merged[k] = v
        cfg[section] = merged
    if "emitter" not in cfg:
        cfg["emitter"] = {"preset": "siv_four_level"}
    model = _emitter_from_json(cfg["emitter"])
    dr = cfg["drive"]
    drive = validate_drive(DriveConfig(ghz_to_rad_ps(dr["detuning_ghz"]), dict(dr["rabi_rad_per_ps"])))
    pb = cfg["phonon_bath"]
    bath = validate_bath(PhononBathConfig(pb["temperature_k"], pb["gamma_ph_per_ns"] * 1e-3,
                                          pb["exponent"], ghz_to_rad_ps(pb["omega_ref_ghz"])))
    sweep = None
    if "sweep" in cfg:
        sweep = {**SWEEP_DEFAULTS, **cfg["sweep"]}
        for key in ("temperatures_k", "rabi_rad_per_ps"):
            if key not in sweep:
                raise ConfigError(f"$.sweep.{key}", "required for sweeps")
        if sweep["window_ghz"][0] >= sweep["window_ghz"][1]:
            raise ConfigError("$.sweep.window_ghz", "lower bound must be below upper bound")
        cfg["sweep"] = sweep
    resolved = {"schema": SCHEMA_ID, **cfg, "emitter_resolved": _emitter_to_json(model)}
    return RunConfig(model, drive, bath, cfg["solver"], sweep, resolved)


def seed_dir() -> Path:
    env = os.environ.get(SEED_ENV)
    if env:
        return Path(env)
    return Path(str(resources.files("dasc") / "configs"))


def resolve_config_path(name: str | os.PathLike) -> Path:
    """Use ``name`` if it exists, else look it up among the shipped configs."""
    p = Path(name)
    if p.exists():
        return p
    candidate = seed_dir() / p.name
    if candidate.exists():
        return candidate
    raise FileNotFoundError(f"config {str(name)!r} not found (also looked in {seed_dir()})")


def load_config(name: str | os.PathLike) -> RunConfig:
    path = resolve_config_path(name)
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError("$", f"invalid JSON: {exc}") from exc
    return parse_config(data)


__all__ = ["ConfigError", "ModelError", "RunConfig", "load_config", "parse_config", "resolve_config_path"]
