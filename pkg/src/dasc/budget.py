"""Closed-form thermodynamic bound and break-even budgets for net cooling.

Inputs use lab-friendly units (K, eV, meV, 1/ps, cm^-1, Debye) and every
power is returned in watts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

import scipy.constants as sc

from .model import HBAR, K_B, E_CHARGE

DEBYE = 1e-21 / sc.c  # C m

DEFAULT_E_OPT_EV = 1.0
DEFAULT_GAMMA = 1e-3  # 1/ps
DEFAULT_ALPHA_B = 0.1  # cm^-1
DEFAULT_DIPOLE_DEBYE = 10.0
DEFAULT_N_REFR = 2.4
DEFAULT_E_SB_MEV = 40.0


class BudgetError(ValueError):
    pass


def thermodynamic_bound(T: float, gamma: float, N: int) -> float:
    """Cyclic cooling limit k T gamma ln N in W (gamma in 1/ps)."""
    if T < 0 or gamma <= 0 or N < 1:
        raise BudgetError("need T >= 0, gamma > 0, N >= 1")
    return K_B * T * gamma * 1e12 * math.log(N)


def qe_threshold(T: float, e_opt_ev: float = DEFAULT_E_OPT_EV):
    """Cycles allowed per non-radiative decay, and the matching minimum QE."""
    if T <= 0 or e_opt_ev <= 0:
        raise BudgetError("need T > 0 and E_opt > 0")
    cycles = e_opt_ev * E_CHARGE / (K_B * T)
    return cycles, 1.0 - 1.0 / cycles


def intensity_from_rabi(omega: float, dipole_debye: float = DEFAULT_DIPOLE_DEBYE,
                        n_refr: float = DEFAULT_N_REFR) -> float:
    """Optical intensity (W/m^2) giving Rabi splitting ``omega`` (rad/ps)."""
    if dipole_debye <= 0 or n_refr <= 0 or omega < 0:
        raise BudgetError("need omega >= 0, d > 0, n_refr > 0")
    field = HBAR * omega * 1e12 / (dipole_debye * DEBYE)
    return 0.5 * sc.c * sc.epsilon_0 * n_refr * field ** 2


def min_density(alpha_b_cm: float, intensity: float, p_cool: float) -> float:
    """Emitter density (m^-3) at which cooling balances background absorption."""
    if p_cool <= 0:
        raise BudgetError("no net cooling possible: P_cool <= 0")
    if alpha_b_cm < 0 or intensity < 0:
        raise BudgetError("alpha_b and intensity must be non-negative")
    return alpha_b_cm * 100.0 * intensity / p_cool


@dataclass(frozen=True)
class ZplThreshold:
    beta_min: float
    sideband_never_limits: bool


def zpl_threshold(p_cool: float, emission_rate: float, e_sb_mev: float = DEFAULT_E_SB_MEV) -> ZplThreshold:
    """Smallest zero-phonon fraction for which sideband heating stays below P_cool.

    ``emission_rate`` is in 1/ps.
    """
    if p_cool < 0 or emission_rate <= 0 or e_sb_mev <= 0:
        raise BudgetError("need P_cool >= 0, emission_rate > 0, E_sb > 0")
    full = emission_rate * 1e12 * e_sb_mev * 1e-3 * E_CHARGE
    if p_cool >= full:
        return ZplThreshold(0.0, True)
    return ZplThreshold(min(1.0, max(0.0, 1.0 - p_cool / full)), False)


@dataclass(frozen=True)
class BudgetInputs:
    T: float
    p_cool: float  # W per emitter
    e_opt_ev: float = DEFAULT_E_OPT_EV
    gamma: float = DEFAULT_GAMMA  # 1/ps
    n_levels: int = 3
    alpha_b_cm: float = DEFAULT_ALPHA_B
    intensity: float | None = None  # W/m^2; derived from rabi when None
    rabi: float | None = None  # rad/ps
    dipole_debye: float = DEFAULT_DIPOLE_DEBYE
    n_refr: float = DEFAULT_N_REFR
    beta: float = 1.0
    e_sb_mev: float = DEFAULT_E_SB_MEV
    emission_rate: float | None = None  # 1/ps; defaults to gamma
    cycle_rate: float | None = None  # 1/ps; defaults to gamma
    density: float | None = None  # m^-3

    def __post_init__(self):
        if not 0.0 <= self.beta <= 1.0:
            raise BudgetError("ZPL fraction beta must lie in [0, 1]")

    def resolved_intensity(self) -> float:
        if self.intensity is not None:
            return self.intensity
        if self.rabi is None:
            return 0.0
        return intensity_from_rabi(self.rabi, self.dipole_debye, self.n_refr)


# Values quoted in the source work; every other default is our own choice.
PUBLISHED_VALUES = {"e_opt_ev": DEFAULT_E_OPT_EV, "gamma": DEFAULT_GAMMA, "alpha_b_cm": DEFAULT_ALPHA_B}


def provenance(inputs: BudgetInputs) -> dict:
    """Per-parameter record: value used and whether it is a published value."""
    out = {}
    for f in fields(inputs):
        v = getattr(inputs, f.name)
        out[f.name] = {"value": v, "published_default": f.name in PUBLISHED_VALUES and v == PUBLISHED_VALUES[f.name]}
    return out


def net_cooling_report(inputs: BudgetInputs, qe: float) -> dict:
    """Itemised per-emitter and per-volume power balance (W, W/m^3)."""
    if not 0.0 <= qe <= 1.0:
        raise BudgetError("quantum efficiency must lie in [0, 1]")
    cycle = inputs.cycle_rate if inputs.cycle_rate is not None else inputs.gamma
    emission = inputs.emission_rate if inputs.emission_rate is not None else inputs.gamma
    e_opt = inputs.e_opt_ev * E_CHARGE
    e_sb = inputs.e_sb_mev * 1e-3 * E_CHARGE
    nonrad = (1.0 - qe) * cycle * 1e12 * e_opt
    sideband = emission * 1e12 * (1.0 - inputs.beta) * e_sb
    net = inputs.p_cool - nonrad - sideband
    report = {
        "cooling_power_w": inputs.p_cool,
        "nonradiative_heating_w": nonrad,
        "sideband_heating_w": sideband,
        "net_cooling_w": net,
        "quantum_efficiency": qe,
    }
    intensity = inputs.resolved_intensity()
    background = inputs.alpha_b_cm * 100.0 * intensity
    report["intensity_w_m2"] = intensity
    report["background_heating_w_m3"] = background
    if inputs.density is not None:
        report["volumetric_heating_w_m3"] = background - inputs.density * net
    return report
