"""Command-line front end.

Exit codes: 0 success, 1 physics/config error, 2 I/O error, 3 numerical
failure. Floats in CSV and JSON output carry 9 significant digits.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .budget import (
    DEFAULT_ALPHA_B,
    DEFAULT_DIPOLE_DEBYE,
    DEFAULT_E_OPT_EV,
    DEFAULT_E_SB_MEV,
    DEFAULT_GAMMA,
    DEFAULT_N_REFR,
    BudgetError,
    BudgetInputs,
    intensity_from_rabi,
    min_density,
    net_cooling_report,
    qe_threshold,
    thermodynamic_bound,
    zpl_threshold,
)
from .config import ConfigError, load_config
from .liouvillian import assemble
from .model import DriveConfig, ModelError, PhononBathConfig, ghz_to_rad_ps, merge_ground_states, siv_four_level
from .spectrum import default_grid, emission_spectrum, spectral_energy_balance
from .steady_state import SteadyStateError, heat_currents, solve_steady_state
from .sweep import SweepSpec, cooling_result, optimize_detuning, temperature_sweep

EXIT_OK, EXIT_CONFIG, EXIT_IO, EXIT_NUMERIC = 0, 1, 2, 3
MANIFEST_SCHEMA = "dasc-manifest/1"


def fmt(x) -> str:
    return format(float(x), ".9g")


def _round9(obj):
    if isinstance(obj, float):
        return float(fmt(obj)) if math.isfinite(obj) else str(obj)
    if isinstance(obj, (np.floating,)):
        return _round9(float(obj))
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, dict):
        return {k: _round9(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round9(v) for v in obj]
    return obj


def write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(_round9(obj), indent=2, sort_keys=True) + "\n")


def write_manifest(out: Path, subcommand: str, resolved: dict, outputs: list, t0: float, stats: dict) -> Path:
    manifest = {
        "schema": MANIFEST_SCHEMA,
        "version": __version__,
        "subcommand": subcommand,
        "resolved_config": resolved,
        "outputs": [str(p) for p in outputs],
        "wall_clock_s": time.perf_counter() - t0,
        "solver_stats": stats,
    }
    path = out / f"{subcommand}_manifest.json"
    write_json(path, manifest)
    return path


def _solve(cfg):
    parts = assemble(cfg.model, cfg.drive, cfg.bath)
    rho = solve_steady_state(parts)
    return parts, rho, heat_currents(parts, rho)


def cmd_spectrum(args) -> int:
    t0 = time.perf_counter()
    cfg = load_config(args.config)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    parts, rho, cooling = _solve(cfg)
    s = cfg.solver
    grid = default_grid(parts, cfg.model, s["half_span_ghz"], s["grid_points"], s["refine_points"])
    spec = emission_spectrum(parts, rho, cfg.model, grid)
    balance = spectral_energy_balance(spec, cooling)
    csv_path = out / "spectrum.csv"
    with open(csv_path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["freq_ghz_rel_zpl", "S_x", "S_y", "S_z", "S_total"])
        for k in range(spec.freq_ghz.size):
            w.writerow([fmt(spec.freq_ghz[k]), fmt(spec.intensity["x"][k]), fmt(spec.intensity["y"][k]),
                        fmt(spec.intensity["z"][k]), fmt(spec.total[k])])
    side = out / "spectrum.json"
    write_json(side, {
        "laser_ghz_rel_zpl": spec.laser_ghz,
        "elastic_weights_per_ps": spec.elastic,
        "blue_red_ratio": spec.blue_red_ratio,
        "no_red_emission": spec.no_red_emission,
        "pl_lines_ghz_rel_zpl": [float(x) for x in cfg.model.pl_lines() * 1e3 / (2 * math.pi)],
        "normalization": "integral of S_p over omega (rad/ps) equals incoherent emission rate of p (1/ps)",
        "cooling_power_w": cooling.Q_ph,
        "spectral_first_moment_w": balance.spectral_power,
        "energy_balance_relative_error": balance.relative_error,
        "shifted_points_rad_per_ps": spec.shifted_points,
    })
    write_manifest(out, "spectrum", cfg.resolved, [csv_path, side], t0,
                   {"residual": cooling.residual, "grid_points": int(spec.freq_ghz.size)})
    return EXIT_OK


def cmd_power(args) -> int:
    t0 = time.perf_counter()
    cfg = load_config(args.config)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    _, _, c = _solve(cfg)
    path = out / "power.json"
    write_json(path, {
        "cooling_power_w": c.Q_ph,
        "q_rad_rf_w": c.Q_rad_rf,
        "photon_emission_rate_per_ps": c.photon_emission_rate,
        "emission_by_polarization_per_ps": c.emission_by_polarization,
        "bound_w": thermodynamic_bound(cfg.bath.temperature, cfg.model.radiative_rate, cfg.model.n_levels),
        "residual": c.residual,
        "populations": [float(x) for x in np.diag(c.rho).real],
    })
    write_manifest(out, "power", cfg.resolved, [path], t0, {"residual": c.residual})
    return EXIT_OK


def cmd_sweep(args) -> int:
    t0 = time.perf_counter()
    cfg = load_config(args.config)
    if cfg.sweep is None:
        raise ConfigError("$.sweep", "sweep section required")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    sw = cfg.sweep
    spec = SweepSpec(tuple(sw["temperatures_k"]), tuple(sw["rabi_rad_per_ps"]), tuple(sw["window_ghz"]),
                     sw["grid_points"], sw["tol"])
    result = temperature_sweep(spec, cfg.model, cfg.bath, threads=args.threads)
    path = out / "sweep.csv"
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["temperature_k", "rabi_rad_per_ps", "optimal_detuning_ghz", "cooling_power_w",
                    "bound_w", "ratio", "flag"])
        for p in result.rows():
            w.writerow([fmt(p.temperature), fmt(p.rabi), fmt(p.detuning_ghz), fmt(p.power),
                        fmt(p.bound), fmt(p.ratio), p.flag])
    flags = sorted({p.flag for p in result.points})
    write_manifest(out, "sweep", cfg.resolved, [path], t0, {"points": len(result.points), "flags": flags})
    return EXIT_OK


BUDGET_FLAGS = {
    # name: (default, is a published value)
    "t_kelvin": (20.0, True),
    "e_opt_ev": (DEFAULT_E_OPT_EV, True),
    "gamma_per_ps": (DEFAULT_GAMMA, True),
    "n_levels": (3, True),
    "alpha_b_cm": (DEFAULT_ALPHA_B, True),
    "rabi_rad_per_ps": (0.2, True),
    "dipole_debye": (DEFAULT_DIPOLE_DEBYE, False),
    "n_refr": (DEFAULT_N_REFR, False),
    "e_sb_mev": (DEFAULT_E_SB_MEV, False),
    "beta": (1.0, False),
    "qe": (1.0, False),
    "p_cool_w": (None, False),
    "emission_rate_per_ps": (None, False),
    "density_m3": (None, False),
}


def budget_report(values: dict) -> dict:
    """Evaluate every budget formula; P_cool defaults to the simulated optimum."""
    v = {k: (values.get(k) if values.get(k) is not None else d) for k, (d, _) in BUDGET_FLAGS.items()}
    T = v["t_kelvin"]
    simulated = None
    if v["p_cool_w"] is None or v["emission_rate_per_ps"] is None:
        model = merge_ground_states(siv_four_level(radiative_rate=v["gamma_per_ps"]))
        opt = optimize_detuning(model, v["rabi_rad_per_ps"], PhononBathConfig(T))
        drive = DriveConfig.uniform(ghz_to_rad_ps(opt.detuning_ghz), v["rabi_rad_per_ps"])
        res = cooling_result(model, drive, PhononBathConfig(T))
        simulated = {"model": "three-level merged SiV default", "optimal_detuning_ghz": opt.detuning_ghz,
                     "cooling_power_w": res.Q_ph, "photon_emission_rate_per_ps": res.photon_emission_rate,
                     "flag": opt.flag}
        if v["p_cool_w"] is None:
            v["p_cool_w"] = res.Q_ph
        if v["emission_rate_per_ps"] is None:
            v["emission_rate_per_ps"] = res.photon_emission_rate

    inputs = {}
    for k, (d, published) in BUDGET_FLAGS.items():
        given = values.get(k) is not None
        inputs[k] = {"value": v[k], "published_default": bool(published and not given and d is not None),
                     "source": "user" if given else ("simulated" if d is None else "default")}

    report = {"inputs": inputs}
    report["thermodynamic_bound_w"] = thermodynamic_bound(T, v["gamma_per_ps"], v["n_levels"])
    if T > 0:
        cycles, min_qe = qe_threshold(T, v["e_opt_ev"])
        report["cycles_per_nonradiative_decay"] = cycles
        report["min_qe"] = min_qe
    intensity = intensity_from_rabi(v["rabi_rad_per_ps"], v["dipole_debye"], v["n_refr"])
    report["intensity_w_m2"] = intensity
    p_cool = v["p_cool_w"]
    if p_cool > 0:
        report["min_density_m3"] = min_density(v["alpha_b_cm"], intensity, p_cool)
    else:
        report["min_density_m3"] = None
        report["min_density_error"] = "no net cooling possible: P_cool <= 0"
    z = zpl_threshold(max(p_cool, 0.0), v["emission_rate_per_ps"], v["e_sb_mev"])
    report["zpl_fraction_min"] = z.beta_min
    report["sideband_never_limits"] = z.sideband_never_limits
    bi = BudgetInputs(T=T, p_cool=p_cool, e_opt_ev=v["e_opt_ev"], gamma=v["gamma_per_ps"],
                      n_levels=v["n_levels"], alpha_b_cm=v["alpha_b_cm"], intensity=intensity,
                      dipole_debye=v["dipole_debye"], n_refr=v["n_refr"], beta=v["beta"],
                      e_sb_mev=v["e_sb_mev"], emission_rate=v["emission_rate_per_ps"],
                      density=v["density_m3"])
    report["net_cooling"] = net_cooling_report(bi, v["qe"])
    if simulated is not None:
        report["simulated_cooling_point"] = simulated
    report["non_published_defaults_used"] = sorted(
        k for k, rec in inputs.items() if rec["source"] == "default" and not rec["published_default"])
    return report


def cmd_budget(args) -> int:
    values = {k: getattr(args, k) for k in BUDGET_FLAGS}
    report = budget_report(values)
    text = json.dumps(_round9(report), indent=2, sort_keys=True)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        path = out / "budget.json"
        path.write_text(text + "\n")
        write_manifest(out, "budget", {"flags": values}, [path], time.perf_counter(), {})
    print(text)
    return EXIT_OK


def cmd_bound(args) -> int:
    b = thermodynamic_bound(args.t_kelvin, args.gamma_per_ps, args.n_levels)
    print(json.dumps(_round9({"t_kelvin": args.t_kelvin, "gamma_per_ps": args.gamma_per_ps,
                              "n_levels": args.n_levels, "bound_w": b}), indent=2, sort_keys=True))
    return EXIT_OK


def cmd_validate(args) -> int:
    cfg = load_config(args.config)
    print(f"ok: {cfg.model.n_levels}-level emitter, {len(cfg.model.dipole_channels)} dipole channels")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dasc", description="Dressed-state anti-Stokes cooling simulator")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def with_config(p, out=True):
        p.add_argument("--config", required=True, help="config JSON path or shipped config name")
        if out:
            p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--threads", type=int, default=1)
        return p

    with_config(sub.add_parser("spectrum", help="emission spectrum CSV")).set_defaults(func=cmd_spectrum)
    with_config(sub.add_parser("power", help="steady-state heat flows")).set_defaults(func=cmd_power)
    with_config(sub.add_parser("sweep", help="optimal cooling power vs temperature")).set_defaults(func=cmd_sweep)
    with_config(sub.add_parser("validate", help="check a config"), out=False).set_defaults(func=cmd_validate)

    b = sub.add_parser("budget", help="break-even budget report (JSON)")
    b.add_argument("--t-kelvin", type=float)
    b.add_argument("--e-opt-ev", type=float)
    b.add_argument("--gamma-per-ps", type=float)
    b.add_argument("--n-levels", type=int)
    b.add_argument("--alpha-b-cm", type=float)
    b.add_argument("--rabi-rad-per-ps", type=float)
    b.add_argument("--dipole-debye", type=float)
    b.add_argument("--n-refr", type=float)
    b.add_argument("--e-sb-mev", type=float)
    b.add_argument("--beta", type=float)
    b.add_argument("--qe", type=float)
    b.add_argument("--p-cool-w", type=float)
    b.add_argument("--emission-rate-per-ps", type=float)
    b.add_argument("--density-m3", type=float)
    b.add_argument("--out")
    b.add_argument("--threads", type=int, default=1)
    b.set_defaults(func=cmd_budget)

    bd = sub.add_parser("bound", help="thermodynamic cooling bound k T gamma ln N")
    bd.add_argument("--t-kelvin", type=float, required=True)
    bd.add_argument("--gamma-per-ps", type=float, default=DEFAULT_GAMMA)
    bd.add_argument("--n-levels", type=int, default=2)
    bd.set_defaults(func=cmd_bound)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ModelError, BudgetError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (SteadyStateError, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
