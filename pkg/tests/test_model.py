import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dasc.model import (
    KB_OVER_HBAR,
    DipoleChannel,
    DriveConfig,
    EmitterModel,
    ModelError,
    PhononBathConfig,
    PhononChannel,
    bose_occupation,
    clamp_temperature,
    ghz_to_rad_ps,
    is_density_matrix,
    kelvin_to_rad_ps,
    merge_ground_states,
    rad_ps_to_ghz,
    rad_ps_to_kelvin,
    siv_four_level,
    two_level,
    validate_bath,
    validate_drive,
    validate_model,
)

# mpmath, 30 digits, exact SI k_B and h
KB_OVER_HBAR_REF = 0.130920339126989
BOSE_REF = [
    (1.0, 10.0, 0.872244867016447),
    (2 * math.pi * 0.259, 20.0, 1.16046678368586),
    (0.5, 4.0, 0.625744428877206),
]


def test_kb_over_hbar():
    assert KB_OVER_HBAR == pytest.approx(KB_OVER_HBAR_REF, rel=1e-12)


@pytest.mark.parametrize("omega,T,expected", BOSE_REF)
def test_bose_reference_values(omega, T, expected):
    assert bose_occupation(omega, T) == pytest.approx(expected, rel=1e-12)


def test_bose_zero_temperature_and_clamp():
    assert bose_occupation(0.3, 0.0) == 0.0
    assert bose_occupation(0.3, 5e-4) == 0.0
    assert clamp_temperature(5e-4) == 0.0
    assert clamp_temperature(2e-3) == 2e-3


def test_bose_rejects_bad_inputs():
    with pytest.raises(ValueError):
        bose_occupation(0.0, 10.0)
    with pytest.raises(ValueError):
        bose_occupation(-1.0, 10.0)
    with pytest.raises(ValueError):
        bose_occupation(1.0, -1.0)


def test_bose_array_input():
    w = np.array([0.5, 1.0])
    np.testing.assert_allclose(bose_occupation(w, 10.0), [bose_occupation(0.5, 10.0), bose_occupation(1.0, 10.0)])


@given(st.floats(1e-3, 20.0), st.floats(0.01, 300.0))
def test_bose_detailed_balance(omega, T):
    n = bose_occupation(omega, T)
    assert n / (n + 1) == pytest.approx(math.exp(-omega / (KB_OVER_HBAR * T)), rel=1e-10, abs=1e-300)


@given(st.floats(1e-3, 20.0), st.floats(0.01, 300.0), st.floats(1.01, 3.0))
def test_bose_monotone(omega, T, factor):
    assert bose_occupation(omega, T) <= bose_occupation(omega, T * factor)
    assert bose_occupation(omega * factor, T) <= bose_occupation(omega, T)


@given(st.floats(-1e4, 1e4, allow_nan=False))
def test_unit_round_trips(f):
    assert rad_ps_to_ghz(ghz_to_rad_ps(f)) == pytest.approx(f, rel=1e-14, abs=1e-12)
    assert rad_ps_to_kelvin(kelvin_to_rad_ps(abs(f))) == pytest.approx(abs(f), rel=1e-14, abs=1e-12)


def test_ghz_conversion_value():
    assert ghz_to_rad_ps(1000.0) == pytest.approx(2 * math.pi)
    np.testing.assert_allclose(ghz_to_rad_ps(np.array([0.0, 500.0])), [0.0, math.pi])


def test_siv_lines():
    m = siv_four_level()
    np.testing.assert_allclose(rad_ps_to_ghz(m.pl_lines()), [-153.5, -105.5, 105.5, 153.5], atol=1e-9)
    assert rad_ps_to_ghz(m.excited_splitting) == pytest.approx(259.0)
    assert {c.polarization for c in m.dipole_channels} == {"x", "y", "z"}


def test_merge_ground_states():
    m = merge_ground_states(siv_four_level())
    assert m.n_levels == 3
    assert m.ground_indices == (0,)
    np.testing.assert_allclose(rad_ps_to_ghz(m.pl_lines()), [-129.5, 129.5], atol=1e-9)
    assert rad_ps_to_ghz(m.excited_splitting) == pytest.approx(259.0)
    assert [c.polarization for c in m.dipole_channels] == ["x", "z"]
    # only excited-manifold phonon channels survive, re-indexed
    assert {(c.i, c.j) for c in m.phonon_channels} == {(1, 2), (1, 1), (2, 2)}


def test_merge_needs_two_plus_two():
    with pytest.raises(ModelError):
        merge_ground_states(merge_ground_states(siv_four_level()))


def test_validation_lists_every_problem():
    bad = EmitterModel((0.0, 1.0), (0,), (0,), (DipoleChannel(0, 1, "q", 1.0),),
                       (PhononChannel(0, 1),), 0.0, -1.0)
    with pytest.raises(ModelError) as err:
        validate_model(bad)
    assert len(err.value.problems) >= 3


def test_validation_rejects_manifold_crossing_phonon():
    m = siv_four_level()
    bad = EmitterModel(m.level_energies, m.ground_indices, m.excited_indices, m.dipole_channels,
                       (PhononChannel(0, 2),), 0.0, m.radiative_rate)
    with pytest.raises(ModelError):
        validate_model(bad)


def test_validate_drive_and_bath():
    with pytest.raises(ModelError):
        validate_drive(DriveConfig(0.0, {"x": -0.1}))
    with pytest.raises(ModelError):
        validate_drive(DriveConfig(0.0, {}), require_drive=True)
    with pytest.raises(ModelError):
        validate_bath(PhononBathConfig(-1.0))
    with pytest.raises(ModelError):
        validate_bath(PhononBathConfig(10.0, gamma_ph=-1.0))
    assert validate_bath(PhononBathConfig(10.0)).temperature == 10.0


def test_drive_helpers():
    d = DriveConfig.uniform(-1.0, 0.2)
    assert d.rabi == {"x": 0.2, "y": 0.2, "z": 0.2}
    assert d.with_detuning(0.5).detuning == 0.5
    assert hash(d) == hash(DriveConfig.uniform(-1.0, 0.2))


def test_is_density_matrix():
    assert is_density_matrix(np.diag([0.25, 0.75]))
    assert not is_density_matrix(np.diag([1.25, -0.25]))
    assert not is_density_matrix(np.array([[0.5, 0.1], [0.0, 0.5]]))
    assert two_level().n_levels == 2
