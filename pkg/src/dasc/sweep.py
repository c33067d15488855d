"""Drive-detuning optimization and temperature sweeps of the cooling power."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .budget import thermodynamic_bound
from .liouvillian import assemble
from .model import (
    DriveConfig,
    EmitterModel,
    PhononBathConfig,
    ghz_to_rad_ps,
    validate_bath,
    validate_model,
)
from .steady_state import heat_currents, solve_steady_state

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0

FLAG_OK = "ok"
FLAG_NO_COOLING = "no_cooling_in_window"
FLAG_NOT_CONVERGED = "not_converged"
FLAG_EDGE = "window_edge"
FLAG_ERROR = "error"


def cooling_power(model: EmitterModel, drive: DriveConfig, bath: PhononBathConfig) -> float:
    """Steady-state lattice heat extraction in W."""
    parts = assemble(model, drive, bath)
    rho = solve_steady_state(parts)
    return heat_currents(parts, rho).Q_ph


def cooling_result(model, drive, bath):
    parts = assemble(model, drive, bath)
    return heat_currents(parts, solve_steady_state(parts))


@dataclass
class DetuningOptimum:
    detuning_ghz: float
    power: float
    flag: str
    grid_ghz: np.ndarray
    grid_power: np.ndarray
    evaluations: int


def golden_section_max(f, a: float, b: float, tol: float, max_iter: int = 200, xtol: float = 1e-9):
    """Maximise ``f`` on [a, b] by golden-section bracketing.

    Stops when the two interior samples agree to ``tol`` relative (the power
    no longer changes across the bracket) or the bracket is narrower than
    ``xtol``. Returns (x, f(x), converged).
    """
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if abs(fc - fd) <= tol * max(abs(fc), abs(fd)) or (b - a) < xtol:
            return (c, fc, True) if fc >= fd else (d, fd, True)
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    return (c, fc, False) if fc >= fd else (d, fd, False)


def optimize_detuning(model: EmitterModel, omega: float, bath: PhononBathConfig,
                      window_ghz=(-800.0, 100.0), tol: float = 1e-6, grid_points: int = 64,
                      polarizations=("x", "y", "z")) -> DetuningOptimum:
    """Coarse scan of the detuning window, then golden-section refinement.

    The drive applies ``omega`` on every listed polarization. Ties between
    grid basins (within ``tol`` relative) go to the smaller |detuning|.
    """
    validate_model(model)
    validate_bath(bath)
    lo, hi = map(float, window_ghz)
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise ValueError(f"bad detuning window {window_ghz!r}")
    if grid_points < 8:
        raise ValueError("grid_points must be >= 8")

    cache: dict[float, float] = {}

    def power(f_ghz: float) -> float:
        if f_ghz not in cache:
            drive = DriveConfig(ghz_to_rad_ps(f_ghz), {p: omega for p in polarizations})
            cache[f_ghz] = cooling_power(model, drive, bath)
        return cache[f_ghz]

    grid = np.linspace(lo, hi, grid_points)
    vals = np.array([power(f) for f in grid])
    top = vals.max()
    near = np.flatnonzero(vals >= top - tol * abs(top))
    k = int(near[np.argmin(np.abs(grid[near]))])

    if top <= 0 or bath.gamma_ph == 0:
        return DetuningOptimum(float(grid[k]), float(vals[k]), FLAG_NO_COOLING, grid, vals, len(cache))

    a = grid[max(k - 1, 0)]
    b = grid[min(k + 1, grid_points - 1)]
    x, fx, converged = golden_section_max(power, a, b, tol)
    if fx < vals[k]:
        x, fx = grid[k], vals[k]
    flag = FLAG_OK if converged else FLAG_NOT_CONVERGED
    if converged and k in (0, grid_points - 1) and abs(x - grid[k]) < 1e-6 * max(1.0, abs(x)):
        flag = FLAG_EDGE
    return DetuningOptimum(float(x), float(fx), flag, grid, vals, len(cache))


@dataclass(frozen=True)
class SweepSpec:
    temperatures: tuple
    rabi: tuple
    window_ghz: tuple = (-800.0, 100.0)
    grid_points: int = 64
    tol: float = 1e-6

    def __post_init__(self):
        if not self.temperatures or not self.rabi:
            raise ValueError("temperature and Rabi lists must be non-empty")
        if not all(math.isfinite(w) for w in self.window_ghz) or self.window_ghz[0] >= self.window_ghz[1]:
            raise ValueError("detuning window must be finite and increasing")
        if self.grid_points < 8:
            raise ValueError("grid_points must be >= 8")
        if any(T < 0 for T in self.temperatures) or any(w < 0 for w in self.rabi):
            raise ValueError("temperatures and Rabi strengths must be non-negative")


@dataclass
class SweepPoint:
    temperature: float
    rabi: float
    detuning_ghz: float
    power: float
    bound: float
    flag: str
    samples: tuple = field(default=(), repr=False)

    @property
    def ratio(self) -> float:
        return self.power / self.bound if self.bound > 0 else float("nan")


@dataclass
class SweepResult:
    points: list
    n_levels: int

    def curve(self, rabi: float):
        pts = sorted((p for p in self.points if p.rabi == rabi), key=lambda p: p.temperature)
        return (np.array([p.temperature for p in pts]), np.array([p.power for p in pts]),
                np.array([p.bound for p in pts]))

    def rows(self):
        return sorted(self.points, key=lambda p: (p.rabi, p.temperature))


def _sweep_point(model, bath, T, omega, spec) -> SweepPoint:
    bound = thermodynamic_bound(T, model.radiative_rate, model.n_levels)
    try:
        opt = optimize_detuning(model, omega, bath.with_temperature(T), spec.window_ghz,
                                spec.tol, spec.grid_points)
    except Exception as exc:  # keep partial sweeps
        return SweepPoint(T, omega, float("nan"), float("nan"), bound, f"{FLAG_ERROR}: {exc}")
    return SweepPoint(T, omega, opt.detuning_ghz, opt.power, bound, opt.flag,
                      tuple(zip(opt.grid_ghz.tolist(), opt.grid_power.tolist())))


def temperature_sweep(spec: SweepSpec, model: EmitterModel, bath: PhononBathConfig | None = None,
                      threads: int = 1) -> SweepResult:
    """Optimise the detuning at every (T, Omega) pair; ordered, deterministic output."""
    bath = bath or PhononBathConfig(0.0)
    jobs = sorted({(float(T), float(w)) for T in spec.temperatures for w in spec.rabi},
                  key=lambda tw: (tw[1], tw[0]))
    if threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            points = list(ex.map(lambda tw: _sweep_point(model, bath, tw[0], tw[1], spec), jobs))
    else:
        points = [_sweep_point(model, bath, T, w, spec) for T, w in jobs]
    return SweepResult(points, model.n_levels)


@dataclass(frozen=True)
class LinearityFit:
    exponent: float
    prefactor: float  # P ~ prefactor * T**exponent, W
    mean_bound_ratio: float
    n_points: int


def linearity_fit(temperatures, powers, bounds=None) -> LinearityFit:
    """Least-squares fit of log P against log T; non-positive powers are dropped."""
    T = np.asarray(temperatures, float)
    P = np.asarray(powers, float)
    keep = (P > 0) & (T > 0) & np.isfinite(P)
    if keep.sum() < 3:
        raise ValueError(f"need at least 3 positive powers for a fit, got {int(keep.sum())}")
    slope, icpt = np.polyfit(np.log(T[keep]), np.log(P[keep]), 1)
    ratio = float("nan")
    if bounds is not None:
        B = np.asarray(bounds, float)[keep]
        ratio = float(np.exp(np.mean(np.log(P[keep] / B))))
    return LinearityFit(float(slope), float(np.exp(icpt)), ratio, int(keep.sum()))
