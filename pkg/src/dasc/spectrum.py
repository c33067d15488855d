"""Steady-state emission spectra from the quantum regression theorem.

Normalization: with frequencies in rad/ps, the incoherent spectrum of
polarization p integrates to that channel's incoherent photon emission
rate (1/ps). The elastic part is reported separately as a delta weight at
the laser frequency.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .liouvillian import GeneratorParts, vec
from .model import POLARIZATIONS, POWER_TO_W, EmitterModel, ghz_to_rad_ps, rad_ps_to_ghz
from .steady_state import CoolingResult

DEFAULT_POINTS = 4001
DEFAULT_HALF_SPAN_GHZ = 600.0
REFINE_POINTS = 64
REFINE_WIDTHS = 10.0
SINGULAR_SHIFT = 1e-9  # rad/ps


@dataclass
class SpectrumResult:
    freq_ghz: np.ndarray  # relative to f_ZPL
    intensity: dict  # polarization -> incoherent S_p, (1/ps)/(rad/ps)
    total: np.ndarray
    elastic: dict  # polarization -> delta weight, 1/ps
    laser_ghz: float
    blue_red_ratio: float = float("nan")
    no_red_emission: bool = False
    shifted_points: list = field(default_factory=list)

    @property
    def delta_omega(self) -> np.ndarray:
        """Offset from the laser line in rad/ps."""
        return ghz_to_rad_ps(self.freq_ghz - self.laser_ghz)


def predicted_peaks(parts: GeneratorParts, model: EmitterModel):
    """(offset from laser, half width) pairs in rad/ps where spectral features sit."""
    lam = np.linalg.eigvals(parts.total)
    peaks = [(lam_k.imag, max(-lam_k.real, 1e-9)) for lam_k in lam if -lam_k.real > 1e-14]
    peaks.append((0.0, max(model.radiative_rate / 2, 1e-9)))
    hw = max(model.radiative_rate / 2, 1e-9)
    peaks += [(line - parts.hamiltonian.frame_detuning, hw) for line in model.pl_lines()]
    return peaks


def default_grid(parts: GeneratorParts, model: EmitterModel, half_span_ghz: float = DEFAULT_HALF_SPAN_GHZ,
                 n_points: int = DEFAULT_POINTS, refine: int = REFINE_POINTS) -> np.ndarray:
    """Frequency grid in GHz relative to f_ZPL.

    Uniform over the smallest laser-centred window that contains
    [-half_span, +half_span], with ``refine`` extra points (rounded up to an
    odd count, so the centre is sampled) inside +/-10 linewidths of every
    predicted feature and a geometric fan of points
    out to 1000 linewidths to carry the Lorentzian tails.
    """
    laser = rad_ps_to_ghz(parts.hamiltonian.frame_detuning)
    reach = max(abs(half_span_ghz - laser), abs(-half_span_ghz - laser))
    base = laser + np.linspace(-reach, reach, n_points)
    extra = [np.array([laser])]
    lo, hi = -reach, reach
    for center, width in predicted_peaks(parts, model):
        c = rad_ps_to_ghz(center)
        w = rad_ps_to_ghz(width)
        if refine == 0 or not lo <= c <= hi:
            continue
        extra.append(laser + c + np.linspace(-REFINE_WIDTHS * w, REFINE_WIDTHS * w, refine | 1))
        fan = w * np.geomspace(REFINE_WIDTHS, 1000.0, refine // 4)
        extra.append(laser + c + np.concatenate([-fan, fan]))
    grid = np.concatenate([base] + extra)
    grid = grid[(grid >= laser + lo) & (grid <= laser + hi)]
    return np.unique(grid)


def _resolvent_traces(parts: GeneratorParts, rho: np.ndarray, dw: np.ndarray, ops: dict):
    """Tr{S^+ (i dw - L)^-1 (S rho - <S> rho)} for every operator and offset.

    The rank-one steady-state projector is added to the resolvent, which
    leaves the traceless regression vectors exactly unchanged and keeps the
    matrix invertible at dw = 0.
    """
    n2 = parts.total.shape[0]
    n = parts.n
    P0 = np.outer(vec(rho), vec(np.eye(n)))
    names = list(ops)
    rhs = np.stack([vec(S @ rho - np.trace(S @ rho) * rho) for S in ops.values()], axis=1)
    lefts = np.stack([vec(S.conj()) for S in ops.values()], axis=0)
    base = P0 - parts.total
    eye = np.eye(n2)
    shifted = []
    out = np.empty((len(names), dw.size), dtype=complex)
    chunk = 2048
    for start in range(0, dw.size, chunk):
        w = dw[start:start + chunk]
        M = base[None, :, :] + 1j * w[:, None, None] * eye[None, :, :]
        try:
            X = np.linalg.solve(M, np.broadcast_to(rhs, (w.size,) + rhs.shape))
        except np.linalg.LinAlgError:
            X = np.empty((w.size,) + rhs.shape, dtype=complex)
            for k, wk in enumerate(w):
                try:
                    X[k] = np.linalg.solve(M[k], rhs)
                except np.linalg.LinAlgError:
                    shifted.append(float(wk))
                    warnings.warn(f"singular resolvent at offset {wk:.6g} rad/ps; shifted by {SINGULAR_SHIFT}")
                    X[k] = np.linalg.solve(base + 1j * (wk + SINGULAR_SHIFT) * eye, rhs)
        out[:, start:start + w.size] = np.einsum("pi,kip->pk", lefts, X)
    return dict(zip(names, out)), shifted


def emission_spectrum(parts: GeneratorParts, rho: np.ndarray, model: EmitterModel,
                      grid_ghz: np.ndarray | None = None) -> SpectrumResult:
    """Incoherent spectrum per polarization plus elastic weights and asymmetry."""
    if grid_ghz is None:
        grid_ghz = default_grid(parts, model)
    grid_ghz = np.asarray(grid_ghz, dtype=float)
    laser = rad_ps_to_ghz(parts.hamiltonian.frame_detuning)
    dw = ghz_to_rad_ps(grid_ghz - laser)
    gamma = parts.radiative_rate
    traces, shifted = _resolvent_traces(parts, rho, dw, parts.collapse)
    intensity, elastic = {}, {}
    for p in POLARIZATIONS:
        if p in parts.collapse:
            intensity[p] = gamma / np.pi * traces[p].real
            elastic[p] = gamma * abs(np.trace(parts.collapse[p] @ rho)) ** 2
        else:
            intensity[p] = np.zeros_like(dw)
            elastic[p] = 0.0
    total = intensity["x"] + intensity["y"] + intensity["z"]
    spec = SpectrumResult(grid_ghz, intensity, total, elastic, laser, shifted_points=shifted)
    spec.blue_red_ratio, spec.no_red_emission = _blue_red(spec)
    return spec


def _split_integrals(spec: SpectrumResult):
    dw = spec.delta_omega
    reach = min(dw.max(), -dw.min())
    red = (dw <= 0) & (dw >= -reach)
    blue = (dw >= 0) & (dw <= reach)
    return np.trapezoid(spec.total[blue], dw[blue]), np.trapezoid(spec.total[red], dw[red])


def _blue_red(spec: SpectrumResult):
    blue, red = _split_integrals(spec)
    if red < 1e-30:
        return float("inf") if blue > 0 else float("nan"), True
    return float(blue / red), False


def blue_red_asymmetry(spec: SpectrumResult) -> float:
    """Blue over red incoherent emission, integrated symmetrically about the laser.

    When the grid is not symmetric about the laser only the symmetric
    overlap is used.
    """
    return _blue_red(spec)[0]


def integrated_intensity(spec: SpectrumResult, polarization: str | None = None) -> float:
    y = spec.total if polarization is None else spec.intensity[polarization]
    return float(np.trapezoid(y, spec.delta_omega))


@dataclass(frozen=True)
class EnergyBalance:
    spectral_power: float  # W, hbar * first moment about the laser
    Q_ph: float  # W
    relative_error: float
    quadrature_error: float  # relative self-estimate
    consistent: bool
    grid_too_coarse: bool


def spectral_energy_balance(spec: SpectrumResult, cooling: CoolingResult, rtol: float = 0.05) -> EnergyBalance:
    """Compare hbar * int (w - w_L) S dw with the lattice heat flow."""
    dw = spec.delta_omega
    integrand = dw * spec.total
    full = float(np.trapezoid(integrand, dw))
    half = float(np.trapezoid(integrand[::2], dw[::2]))
    p_spec = full * POWER_TO_W
    scale = max(abs(p_spec), abs(cooling.Q_ph), 1e-30)
    quad = abs(full - half) * POWER_TO_W / scale
    rel = abs(p_spec - cooling.Q_ph) / scale
    coarse = quad > rtol
    return EnergyBalance(p_spec, cooling.Q_ph, rel, quad, rel <= rtol and not coarse, coarse)


def find_peaks(spec: SpectrumResult, rel_height: float = 1e-4, min_sep_ghz: float = 5.0):
    """Local maxima of the total incoherent spectrum, in GHz from f_ZPL.

    Maxima below ``rel_height`` of the global maximum are ignored, and
    maxima closer than ``min_sep_ghz`` are merged keeping the taller one.
    """
    y = spec.total
    f = spec.freq_ghz
    idx = np.flatnonzero((y[1:-1] > y[:-2]) & (y[1:-1] >= y[2:])) + 1
    idx = idx[y[idx] > rel_height * y.max()] if y.max() > 0 else idx[:0]
    kept: list[int] = []
    for k in sorted(idx, key=lambda k: -y[k]):
        if all(abs(f[k] - f[j]) >= min_sep_ghz for j in kept):
            kept.append(k)
    kept.sort()
    return f[kept], y[kept]
