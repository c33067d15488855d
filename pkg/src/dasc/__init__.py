"""Dressed-state anti-Stokes cooling of few-level solid-state emitters."""

__version__ = "0.1.0"

from .model import (  # noqa: E402
    DriveConfig,
    EmitterModel,
    PhononBathConfig,
    bose_occupation,
    merge_ground_states,
    siv_four_level,
    validate_model,
)
from .liouvillian import assemble, build_h_rf, dressed_basis  # noqa: E402
from .steady_state import heat_currents, propagate, solve_steady_state  # noqa: E402
from .spectrum import blue_red_asymmetry, emission_spectrum, spectral_energy_balance  # noqa: E402
from .budget import thermodynamic_bound  # noqa: E402

__all__ = [
    "DriveConfig", "EmitterModel", "PhononBathConfig", "assemble", "blue_red_asymmetry",
    "bose_occupation", "build_h_rf", "dressed_basis", "emission_spectrum", "heat_currents",
    "merge_ground_states", "propagate", "siv_four_level", "solve_steady_state",
    "spectral_energy_balance", "thermodynamic_bound", "validate_model",
]
