"""Emitter, drive and phonon-bath configuration plus unit conventions.

Internally every angular frequency is in rad/ps with hbar = 1, temperatures
are in kelvin and rates are in 1/ps. Powers leave the package in watts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np
import scipy.constants as sc

HBAR = sc.hbar
K_B = sc.Boltzmann
E_CHARGE = sc.electron_volt

#: k_B / hbar expressed in rad ps^-1 K^-1
KB_OVER_HBAR = K_B / HBAR * 1e-12

#: converts hbar * (rad/ps) * (1/ps) into watts
POWER_TO_W = HBAR * 1e24

#: below this temperature (K) the bath is treated as exactly T = 0
T_CLAMP = 1e-3

POLARIZATIONS = ("x", "y", "z")


class ModelError(ValueError):
    """Raised when a configuration violates a physical or structural rule."""

    def __init__(self, problems: Sequence[str]):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


def _scalar_or_array(x):
    return float(x) if x.ndim == 0 else x


def ghz_to_rad_ps(f_ghz):
    return _scalar_or_array(2.0 * np.pi * 1e-3 * np.asarray(f_ghz, dtype=float))


def rad_ps_to_ghz(w):
    return _scalar_or_array(np.asarray(w, dtype=float) / (2.0 * np.pi * 1e-3))


def kelvin_to_rad_ps(T):
    return KB_OVER_HBAR * T


def rad_ps_to_kelvin(w):
    return w / KB_OVER_HBAR


def clamp_temperature(T: float) -> float:
    return 0.0 if T < T_CLAMP else float(T)


def bose_occupation(omega, T):
    """Mean phonon number 1/(exp(hbar*omega/kT) - 1).

    Accepts scalars or arrays for ``omega``. Non-positive frequencies are
    rejected; callers choose emission vs absorption via n + 1 vs n.
    """
    w = np.asarray(omega, dtype=float)
    if np.any(~(w > 0)):
        raise ValueError(f"bose_occupation needs omega > 0, got {omega!r}")
    if T < 0:
        raise ValueError(f"temperature must be >= 0, got {T!r}")
    T = clamp_temperature(T)
    if T == 0.0:
        n = np.zeros_like(w)
    else:
        x = w / (KB_OVER_HBAR * T)
        with np.errstate(over="ignore"):
            n = 1.0 / np.expm1(x)
    return float(n) if n.ndim == 0 else n


@dataclass(frozen=True)
class DipoleChannel:
    ground: int
    excited: int
    polarization: str
    amplitude: float = 1.0


@dataclass(frozen=True)
class PhononChannel:
    """Bath coupling ``coupling * (|i><j| + |j><i|)``; for i == j it is ``coupling * |i><i|``."""

    i: int
    j: int
    coupling: float = 1.0


@dataclass(frozen=True)
class EmitterModel:
    """Few-level emitter with a ground and an excited manifold.

    ``level_energies`` are in rad/ps. The optical offset is removed, so an
    optical line ``excited -> ground`` sits at
    ``E[excited] - E[ground] - zpl_center`` relative to f_ZPL.
    """

    level_energies: tuple[float, ...]
    ground_indices: tuple[int, ...]
    excited_indices: tuple[int, ...]
    dipole_channels: tuple[DipoleChannel, ...]
    phonon_channels: tuple[PhononChannel, ...] = ()
    zpl_center: float = 0.0
    radiative_rate: float = 1e-3

    @property
    def n_levels(self) -> int:
        return len(self.level_energies)

    @property
    def excited_splitting(self) -> float:
        """Splitting between the highest and lowest excited level (rad/ps)."""
        e = [self.level_energies[k] for k in self.excited_indices]
        return max(e) - min(e)

    def line_offset(self, channel: DipoleChannel) -> float:
        """Optical line of ``channel`` relative to the ZPL centre, rad/ps."""
        return self.level_energies[channel.excited] - self.level_energies[channel.ground] - self.zpl_center

    def pl_lines(self) -> np.ndarray:
        """Sorted optical line offsets from the ZPL centre (rad/ps)."""
        return np.sort([self.line_offset(c) for c in self.dipole_channels])


@dataclass(frozen=True)
class DriveConfig:
    """Single-frequency laser at ``detuning`` = omega_L - omega_ZPL (rad/ps).

    ``rabi`` maps polarization to the Rabi splitting produced on a resonant
    transition of unit relative dipole amplitude.
    """

    detuning: float
    rabi: dict = field(default_factory=dict)

    @classmethod
    def uniform(cls, detuning: float, omega: float) -> "DriveConfig":
        return cls(detuning, {p: omega for p in POLARIZATIONS})

    def with_detuning(self, detuning: float) -> "DriveConfig":
        return replace(self, detuning=detuning)

    def __hash__(self):
        return hash((self.detuning, tuple(sorted(self.rabi.items()))))


@dataclass(frozen=True)
class PhononBathConfig:
    """Phonon reservoir with rate prefactor ``gamma_ph * (omega/omega_ref)**s``."""

    temperature: float
    gamma_ph: float = 1e-2
    exponent: float = 1.0
    omega_ref: float = 1.0

    def spectral_factor(self, omega):
        return self.gamma_ph * (np.asarray(omega) / self.omega_ref) ** self.exponent

    def with_temperature(self, T: float) -> "PhononBathConfig":
        return replace(self, temperature=T)


def _model_problems(model: EmitterModel) -> list[str]:
    problems: list[str] = []
    n = model.n_levels
    if n not in (2, 3, 4):
        problems.append(f"n_levels must be 2, 3 or 4, got {n}")
    if not all(math.isfinite(e) for e in model.level_energies):
        problems.append("level energies must be finite")
    if not math.isfinite(model.zpl_center):
        problems.append("zpl_center must be finite")
    g, e = set(model.ground_indices), set(model.excited_indices)
    if len(g) != len(model.ground_indices) or len(e) != len(model.excited_indices):
        problems.append("duplicate level index in a manifold")
    if g & e:
        problems.append(f"levels {sorted(g & e)} are in both manifolds")
    if g | e != set(range(n)):
        problems.append(f"manifolds must partition levels 0..{n - 1}")
    if not g or not e:
        problems.append("both ground and excited manifolds must be non-empty")
    if not (model.radiative_rate >= 0 and math.isfinite(model.radiative_rate)):
        problems.append(f"radiative rate must be non-negative, got {model.radiative_rate}")

    for k, c in enumerate(model.dipole_channels):
        tag = f"dipole channel {k} ({c.ground}<->{c.excited}, {c.polarization})"
        if c.polarization not in POLARIZATIONS:
            problems.append(f"{tag}: polarization must be one of x, y, z")
        if not (c.ground in g and c.excited in e):
            problems.append(f"{tag}: must connect a ground level to an excited level")
        if not (c.amplitude >= 0 and math.isfinite(c.amplitude)):
            problems.append(f"{tag}: amplitude must be non-negative")
    for k, c in enumerate(model.phonon_channels):
        tag = f"phonon channel {k} ({c.i}<->{c.j})"
        if not ({c.i, c.j} <= g or {c.i, c.j} <= e):
            problems.append(f"{tag}: crosses the ground/excited manifolds")
        if not (c.coupling >= 0 and math.isfinite(c.coupling)):
            problems.append(f"{tag}: coupling must be non-negative")
    return problems


def validate_model(model: EmitterModel) -> EmitterModel:
    """Check every structural rule; raise ModelError listing all violations."""
    problems = _model_problems(model)
    if problems:
        raise ModelError(problems)
    return model


def validate_drive(drive: DriveConfig, require_drive: bool = False) -> DriveConfig:
    problems = []
    if not math.isfinite(drive.detuning):
        problems.append("detuning must be finite")
    for p, w in drive.rabi.items():
        if p not in POLARIZATIONS:
            problems.append(f"unknown polarization {p!r}")
        if not (w >= 0 and math.isfinite(w)):
            problems.append(f"Rabi amplitude for {p!r} must be non-negative, got {w}")
    if require_drive and not any(w > 0 for w in drive.rabi.values()):
        problems.append("at least one Rabi amplitude must be positive")
    if problems:
        raise ModelError(problems)
    return drive


def validate_bath(bath: PhononBathConfig) -> PhononBathConfig:
    problems = []
    if not bath.temperature >= 0:
        problems.append(f"temperature must be >= 0, got {bath.temperature}")
    if not bath.gamma_ph >= 0:
        problems.append(f"gamma_ph must be >= 0, got {bath.gamma_ph}")
    if not bath.omega_ref > 0:
        problems.append(f"omega_ref must be > 0, got {bath.omega_ref}")
    if not math.isfinite(bath.exponent):
        problems.append("spectral exponent must be finite")
    if problems:
        raise ModelError(problems)
    return bath


# Approximate SiV-like splittings (GHz): ground 48, excited 259.
SIV_GROUND_SPLITTING_GHZ = 48.0
SIV_EXCITED_SPLITTING_GHZ = 259.0


def siv_four_level(
    ground_splitting_ghz: float = SIV_GROUND_SPLITTING_GHZ,
    excited_splitting_ghz: float = SIV_EXCITED_SPLITTING_GHZ,
    radiative_rate: float = 1e-3,
) -> EmitterModel:
    """Default four-level SiV-like model, lines centred on f_ZPL.

    Levels are ordered g1, g2, e1, e2. The four optical lines get
    polarizations x, y, z, x in order of increasing energy. Phonons couple
    g1<->g2 and e1<->e2, plus a deformation-type diagonal coupling on each
    excited level; the diagonal terms only drive transitions once the laser
    mixes the bare states.
    """
    dg = ghz_to_rad_ps(ground_splitting_ghz)
    de = ghz_to_rad_ps(excited_splitting_ghz)
    e1 = -(de - dg) / 2.0
    energies = (0.0, dg, e1, e1 + de)
    # lines in energy order: e1->g2, e1->g1, e2->g2, e2->g1
    pairs = [(1, 2), (0, 2), (1, 3), (0, 3)]
    pols = ["x", "y", "z", "x"]
    dipoles = tuple(DipoleChannel(g, e, p, 1.0) for (g, e), p in zip(pairs, pols))
    phonons = (PhononChannel(0, 1, 1.0), PhononChannel(2, 3, 1.0),
               PhononChannel(2, 2, 1.0), PhononChannel(3, 3, 1.0))
    return validate_model(
        EmitterModel(energies, (0, 1), (2, 3), dipoles, phonons, 0.0, radiative_rate)
    )


def merge_ground_states(model: EmitterModel) -> EmitterModel:
    """Collapse a 2+2 model onto one ground state (2 excited levels kept).

    The merged ground level sits at the mean of the two former ground
    energies. Each excited level keeps its largest-amplitude channel (first
    listed on ties), re-pointed at the merged ground state.
    """
    if len(model.ground_indices) != 2 or len(model.excited_indices) != 2:
        raise ModelError(
            [f"merge_ground_states needs 2 ground and 2 excited levels, got "
             f"{len(model.ground_indices)} and {len(model.excited_indices)}"]
        )
    validate_model(model)
    E = model.level_energies
    g_energy = 0.5 * (E[model.ground_indices[0]] + E[model.ground_indices[1]])
    energies = (g_energy,) + tuple(E[k] for k in model.excited_indices)
    dipoles = []
    for new_idx, old in enumerate(model.excited_indices, start=1):
        chans = [c for c in model.dipole_channels if c.excited == old]
        if not chans:
            continue
        best = max(chans, key=lambda c: c.amplitude)  # max keeps the first on ties
        dipoles.append(DipoleChannel(0, new_idx, best.polarization, best.amplitude))
    remap = {old: new for new, old in enumerate(model.excited_indices, start=1)}
    phonons = tuple(
        PhononChannel(remap[c.i], remap[c.j], c.coupling)
        for c in model.phonon_channels
        if c.i in remap and c.j in remap
    )
    return validate_model(
        EmitterModel(energies, (0,), (1, 2), tuple(dipoles), phonons,
                     model.zpl_center, model.radiative_rate)
    )


def two_level(radiative_rate: float = 1e-3, line_offset: float = 0.0) -> EmitterModel:
    """Bare two-level emitter with one x-polarized line (no phonon channels)."""
    return validate_model(
        EmitterModel((0.0, line_offset), (0,), (1,),
                     (DipoleChannel(0, 1, "x", 1.0),), (), 0.0, radiative_rate)
    )


def is_density_matrix(rho: np.ndarray, herm_tol=1e-12, trace_tol=1e-10, eig_floor=-1e-10) -> bool:
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        return False
    if np.max(np.abs(rho - rho.conj().T)) > herm_tol:
        return False
    if abs(np.trace(rho) - 1.0) > trace_tol:
        return False
    return bool(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min() >= eig_floor)
