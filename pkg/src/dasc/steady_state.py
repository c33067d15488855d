"""Steady state of the generator, a propagation oracle and heat bookkeeping."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse.linalg import expm_multiply

from .liouvillian import GeneratorParts, apply, unvec, vec
from .model import POWER_TO_W

#: ps; horizon cap for the propagation oracle
MAX_HORIZON = 1e7
#: W; guards the power-balance comparison when every flow vanishes
P_FLOOR = 1e-30


class SteadyStateError(RuntimeError):
    pass


class DegenerateSteadyState(SteadyStateError):
    def __init__(self, dim: int):
        self.dim = dim
        super().__init__(f"degenerate steady state: kernel dimension {dim}")


@dataclass(frozen=True)
class CoolingResult:
    rho: np.ndarray
    Q_ph: float  # W, positive = heat drawn from the lattice
    Q_rad_rf: float  # W, Tr{H_RF D_rad[rho]}; negative when energy is handed to the field
    residual: float
    photon_emission_rate: float  # 1/ps
    emission_by_polarization: dict
    lab_optical_power: float | None = None  # W, needs the absolute laser frequency

    @property
    def cooling_power(self) -> float:
        return self.Q_ph


def kernel_dimension(L: np.ndarray, rtol: float = 1e-12) -> int:
    s = np.linalg.svd(L, compute_uv=False)
    return int(np.sum(s <= rtol * s[0])) if s[0] > 0 else L.shape[0]


def residual(parts: GeneratorParts, rho: np.ndarray) -> float:
    L = parts.total
    return float(np.linalg.norm(L @ vec(rho)) / np.linalg.norm(L))


def solve_steady_state(parts: GeneratorParts, check: bool = True) -> np.ndarray:
    """Null vector of L normalised to unit trace.

    One row of L is replaced by the trace functional. The row dropped is the
    first diagonal population row, which is always linearly dependent on the
    others for a trace-preserving generator.
    """
    L = parts.total
    n = parts.n
    dim = kernel_dimension(L)
    if dim != 1:
        raise DegenerateSteadyState(dim)
    A = L.copy()
    b = np.zeros(n * n, dtype=complex)
    A[0, :] = vec(np.eye(n))
    b[0] = 1.0
    try:
        x = np.linalg.solve(A, b)
    except np.linalg.LinAlgError as exc:
        raise SteadyStateError(f"steady-state linear solve failed: {exc}") from exc
    rho = unvec(x)
    rho = 0.5 * (rho + rho.conj().T)
    rho = rho / np.trace(rho).real
    if check:
        res = residual(parts, rho)
        if not res < 1e-10:
            raise SteadyStateError(f"steady-state residual {res:.3e} exceeds 1e-10")
        lo = np.linalg.eigvalsh(rho).min()
        if lo < -1e-10:
            raise SteadyStateError(f"steady state has eigenvalue {lo:.3e} below -1e-10")
    return rho


def relaxation_horizon(parts: GeneratorParts, factor: float = 20.0) -> float:
    """``factor`` over the slowest nonzero decay rate of L (ps)."""
    rates = np.abs(np.linalg.eigvals(parts.total).real)
    scale = np.max(np.abs(parts.total))
    slow = rates[rates > 1e-12 * scale]
    if slow.size == 0:
        raise SteadyStateError("generator has no decaying modes")
    t = factor / slow.min()
    if t > MAX_HORIZON:
        raise SteadyStateError(f"relaxation horizon {t:.3e} ps exceeds cap {MAX_HORIZON:.0e} ps")
    return float(t)


def propagate(parts: GeneratorParts, rho0: np.ndarray, t: float) -> np.ndarray:
    """rho(t) = exp(L t) rho0 via the adaptive exponential-action algorithm."""
    if t < 0:
        raise ValueError("propagation time must be >= 0")
    if t == 0:
        return np.array(rho0, dtype=complex, copy=True)
    v = expm_multiply(parts.total * t, vec(rho0).astype(complex))
    if not np.all(np.isfinite(v)):
        raise SteadyStateError("propagation produced non-finite values")
    rho = unvec(v)
    drift = abs(np.trace(rho) - np.trace(rho0))
    if drift > 1e-9:
        raise SteadyStateError(f"trace drift {drift:.3e} during propagation")
    return rho


def propagated_steady_state(parts: GeneratorParts, rho0: np.ndarray | None = None, factor: float = 20.0) -> np.ndarray:
    n = parts.n
    if rho0 is None:
        rho0 = np.eye(n, dtype=complex) / n
    return propagate(parts, rho0, relaxation_horizon(parts, factor))


def trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    return 0.5 * float(np.abs(np.linalg.eigvalsh(a - b)).sum())


def energy_flow(H: np.ndarray, D: np.ndarray, rho: np.ndarray) -> float:
    """Tr{H D[rho]} in hbar (rad/ps)/ps."""
    return float(np.trace(H @ apply(D, rho)).real)


def heat_currents(parts: GeneratorParts, rho: np.ndarray, laser_omega: float | None = None,
                  check: bool = True) -> CoolingResult:
    """Per-bath energy flows at the steady state ``rho``.

    ``laser_omega`` is the absolute laser angular frequency (rad/ps); when
    given, the lab-frame optical output power is reported too.
    """
    res = residual(parts, rho)
    if check and not res < 1e-10:
        raise SteadyStateError(f"input is not a steady state (residual {res:.3e})")
    H = parts.hamiltonian.matrix
    q_ph = energy_flow(H, parts.D_ph, rho) if parts.phonon_jumps else 0.0
    q_rad = energy_flow(H, parts.D_rad, rho)
    by_pol = {p: parts.radiative_rate * float(np.trace(S.conj().T @ S @ rho).real)
              for p, S in parts.collapse.items()}
    rate = sum(by_pol.values())
    lab = None
    if laser_omega is not None:
        lab = (laser_omega * rate - q_rad) * POWER_TO_W
    return CoolingResult(rho, q_ph * POWER_TO_W, q_rad * POWER_TO_W, res, rate, by_pol, lab)


def power_balance_ok(result: CoolingResult, rtol: float = 1e-8) -> bool:
    scale = max(abs(result.Q_ph), abs(result.Q_rad_rf), P_FLOOR)
    return abs(result.Q_ph + result.Q_rad_rf) < rtol * scale
