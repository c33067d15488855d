"""Rotating-frame Hamiltonian, dressed basis and the Lindblad generator.

Superoperators act on row-major vectorized density matrices,
``vec(rho)[i*n + j] = rho[i, j]``, so ``vec(A rho B) = kron(A, B.T) vec(rho)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .model import (
    POLARIZATIONS,
    DriveConfig,
    EmitterModel,
    PhononBathConfig,
    bose_occupation,
    clamp_temperature,
    validate_bath,
    validate_drive,
    validate_model,
)

#: dressed gaps closer than this (rad/ps) share one jump operator
OMEGA_DEGEN = 1e-6
#: dressed gaps below this (rad/ps) carry no phonon transition
OMEGA_MIN = 1e-9


def commutator_super(H: np.ndarray) -> np.ndarray:
    """Superoperator of rho -> -i [H, rho]."""
    eye = np.eye(H.shape[0])
    return -1j * (np.kron(H, eye) - np.kron(eye, H.T))


def lindblad_super(J: np.ndarray, rate: float = 1.0) -> np.ndarray:
    """Superoperator of rate * (J rho J^+ - {J^+ J, rho}/2)."""
    eye = np.eye(J.shape[0])
    JdJ = J.conj().T @ J
    return rate * (np.kron(J, J.conj()) - 0.5 * np.kron(JdJ, eye) - 0.5 * np.kron(eye, JdJ.T))


def vec(rho: np.ndarray) -> np.ndarray:
    return np.asarray(rho).reshape(-1)


def unvec(v: np.ndarray) -> np.ndarray:
    n = int(round(np.sqrt(v.size)))
    return np.asarray(v).reshape(n, n)


def apply(S: np.ndarray, rho: np.ndarray) -> np.ndarray:
    return unvec(S @ vec(rho))


@dataclass(frozen=True)
class RotatingFrameHamiltonian:
    matrix: np.ndarray
    frame_detuning: float


@dataclass(frozen=True)
class DressedBasis:
    energies: np.ndarray
    vectors: np.ndarray

    def gaps(self):
        """(a, b, lambda_b - lambda_a) for every ordered pair with lambda_b > lambda_a."""
        lam = self.energies
        return [(a, b, lam[b] - lam[a])
                for a in range(lam.size) for b in range(lam.size) if lam[b] > lam[a]]

    def to_dressed(self, op: np.ndarray) -> np.ndarray:
        V = self.vectors
        return V.conj().T @ op @ V

    def to_bare(self, op: np.ndarray) -> np.ndarray:
        V = self.vectors
        return V @ op @ V.conj().T


@dataclass(frozen=True)
class PhononJump:
    """One secular phonon process: ``operator`` lowers the dressed energy by ``gap``."""

    gap: float
    channel: int
    operator: np.ndarray  # bare basis
    rate_down: float
    rate_up: float


@dataclass(frozen=True)
class GeneratorParts:
    hamiltonian: RotatingFrameHamiltonian
    basis: DressedBasis
    L_H: np.ndarray
    D_rad: np.ndarray
    D_ph: np.ndarray
    total: np.ndarray
    collapse: dict = field(default_factory=dict)  # polarization -> lowering operator
    phonon_jumps: tuple = ()
    radiative_rate: float = 0.0

    @property
    def n(self) -> int:
        return self.hamiltonian.matrix.shape[0]


def build_h_rf(model: EmitterModel, drive: DriveConfig) -> RotatingFrameHamiltonian:
    """Hamiltonian in the frame rotating at the laser frequency (RWA)."""
    n = model.n_levels
    H = np.zeros((n, n), dtype=complex)
    for k, E in enumerate(model.level_energies):
        H[k, k] = E
    for k in model.excited_indices:
        H[k, k] -= model.zpl_center + drive.detuning
    for c in model.dipole_channels:
        coupling = 0.5 * drive.rabi.get(c.polarization, 0.0) * c.amplitude
        H[c.ground, c.excited] += coupling
        H[c.excited, c.ground] += coupling
    return RotatingFrameHamiltonian(H, drive.detuning)


def dressed_basis(H) -> DressedBasis:
    """Eigendecomposition with ascending energies and a fixed eigenvector phase.

    Each column is rotated so its largest-magnitude component is real and
    positive (the first such component on ties).
    """
    H = H.matrix if isinstance(H, RotatingFrameHamiltonian) else np.asarray(H)
    lam, V = np.linalg.eigh(H)
    V = V.astype(complex)
    for k in range(V.shape[1]):
        col = V[:, k]
        m = np.argmax(np.abs(col) - 1e-12 * np.arange(col.size))
        V[:, k] = col * (abs(col[m]) / col[m])
    return DressedBasis(lam, V)


def _cluster_gaps(gaps, tol=OMEGA_DEGEN):
    ordered = sorted(gaps, key=lambda g: g[2])
    clusters: list[list] = []
    for g in ordered:
        if clusters and g[2] - clusters[-1][-1][2] < tol:
            clusters[-1].append(g)
        else:
            clusters.append([g])
    return clusters


def phonon_jumps(model: EmitterModel, bath: PhononBathConfig, basis: DressedBasis) -> list[PhononJump]:
    """Secular jump list in the dressed basis, one entry per channel and gap cluster."""
    if bath.gamma_ph == 0:
        return []
    T = clamp_temperature(bath.temperature)
    n = model.n_levels
    gaps = [g for g in basis.gaps() if g[2] > OMEGA_MIN]
    jumps = []
    for ch_idx, ch in enumerate(model.phonon_channels):
        A = np.zeros((n, n), dtype=complex)
        A[ch.i, ch.j] = A[ch.j, ch.i] = ch.coupling  # diagonal channel: coupling |i><i|
        Ad = basis.to_dressed(A)
        for cluster in _cluster_gaps(gaps):
            J = np.zeros((n, n), dtype=complex)
            for a, b, _ in cluster:
                J[a, b] = Ad[a, b]
            if not np.any(np.abs(J) > 0):
                continue
            w = float(np.mean([g[2] for g in cluster]))
            occ = bose_occupation(w, T)
            pref = float(bath.spectral_factor(w))
            jumps.append(PhononJump(w, ch_idx, basis.to_bare(J), pref * (occ + 1.0), pref * occ))
    return jumps


def phonon_dissipator(model: EmitterModel, bath: PhononBathConfig, basis: DressedBasis, jumps=None) -> np.ndarray:
    n2 = model.n_levels ** 2
    D = np.zeros((n2, n2), dtype=complex)
    for j in phonon_jumps(model, bath, basis) if jumps is None else jumps:
        D += lindblad_super(j.operator, j.rate_down)
        if j.rate_up > 0:
            D += lindblad_super(j.operator.conj().T, j.rate_up)
    return D


def collapse_operators(model: EmitterModel) -> dict:
    """Per-polarization collective lowering operators sum_c amp_c |g_c><e_c|."""
    n = model.n_levels
    ops = {}
    for p in POLARIZATIONS:
        chans = [c for c in model.dipole_channels if c.polarization == p]
        if not chans:
            continue
        S = np.zeros((n, n), dtype=complex)
        for c in chans:
            S[c.ground, c.excited] += c.amplitude
        ops[p] = S
    return ops


def radiative_dissipator(model: EmitterModel, basis: DressedBasis | None = None) -> np.ndarray:
    """Zero-temperature optical decay, one collective jump per polarization.

    The optical bath is flat across the dressed gaps, so every dressed
    component of the lowering operator is an emission at the same rate and
    the bare operator is kept whole; there are no upward optical terms.
    ``basis`` is accepted for interface symmetry and does not change the result.
    """
    n2 = model.n_levels ** 2
    D = np.zeros((n2, n2), dtype=complex)
    if model.radiative_rate == 0:
        return D
    for S in collapse_operators(model).values():
        D += lindblad_super(S, model.radiative_rate)
    return D


def assemble(model: EmitterModel, drive: DriveConfig, bath: PhononBathConfig) -> GeneratorParts:
    """Build all generator parts; ``total = (L_H + D_rad) + D_ph``."""
    validate_model(model)
    validate_drive(drive)
    validate_bath(bath)
    H = build_h_rf(model, drive)
    basis = dressed_basis(H)
    L_H = commutator_super(H.matrix)
    D_rad = radiative_dissipator(model, basis)
    jumps = phonon_jumps(model, bath, basis)
    D_ph = phonon_dissipator(model, bath, basis, jumps)
    total = (L_H + D_rad) + D_ph
    return GeneratorParts(H, basis, L_H, D_rad, D_ph, total,
                          collapse_operators(model), tuple(jumps), model.radiative_rate)
