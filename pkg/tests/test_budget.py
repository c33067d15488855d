import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dasc.budget import (
    BudgetError,
    BudgetInputs,
    intensity_from_rabi,
    min_density,
    net_cooling_report,
    provenance,
    qe_threshold,
    thermodynamic_bound,
    zpl_threshold,
)

KB = 1.380649e-23
EV = 1.602176634e-19
HBAR = 6.62607015e-34 / (2 * math.pi)


def test_thermodynamic_bound_value():
    assert thermodynamic_bound(10.0, 1e-3, 2) == pytest.approx(KB * 10 * 1e9 * math.log(2), rel=1e-12)
    assert thermodynamic_bound(10.0, 1e-3, 1) == 0.0
    with pytest.raises(BudgetError):
        thermodynamic_bound(10.0, 0.0, 2)


def test_qe_threshold():
    cycles, qe = qe_threshold(10.0, 1.0)
    assert cycles == pytest.approx(EV / (KB * 10.0), rel=1e-12)
    assert qe == pytest.approx(1 - KB * 10.0 / EV, rel=1e-12)
    with pytest.raises(BudgetError):
        qe_threshold(0.0)


def test_intensity_matches_gaussian_units():
    # Gaussian: E [statV/cm] = hbar*Omega / d [esu cm]; I = c n E^2 / (8 pi) [erg/s/cm^2]
    omega, d, n = 0.2, 10.0, 2.4
    hbar_cgs = HBAR * 1e7
    E = hbar_cgs * omega * 1e12 / (d * 1e-18)
    I_cgs = 2.99792458e10 * n * E ** 2 / (8 * math.pi)
    assert intensity_from_rabi(omega, d, n) == pytest.approx(I_cgs * 1e-3, rel=1e-9)


def test_min_density_and_errors():
    assert min_density(0.1, 1e9, 1e-14) == pytest.approx(10.0 * 1e9 / 1e-14)
    with pytest.raises(BudgetError):
        min_density(0.1, 1e9, 0.0)


@given(st.floats(1e-18, 1e-12), st.floats(1.01, 10.0), st.floats(1e-3, 1.0))
def test_budget_monotonicity(p, factor, alpha):
    assert min_density(alpha, 1e9, p * factor) < min_density(alpha, 1e9, p)
    assert min_density(alpha * factor, 1e9, p) > min_density(alpha, 1e9, p)
    assert zpl_threshold(p * factor, 1e-3).beta_min <= zpl_threshold(p, 1e-3).beta_min


def test_zpl_threshold_cases():
    full = 1e-3 * 1e12 * 40e-3 * EV
    z = zpl_threshold(0.05 * full, 1e-3)
    assert z.beta_min == pytest.approx(0.95)
    assert not z.sideband_never_limits
    assert zpl_threshold(2 * full, 1e-3).sideband_never_limits


def test_net_cooling_report_items():
    inputs = BudgetInputs(T=20.0, p_cool=1e-14, rabi=0.2, beta=0.99, density=1e24)
    r = net_cooling_report(inputs, qe=0.9999)
    assert r["nonradiative_heating_w"] == pytest.approx(1e-4 * 1e9 * EV)
    assert r["sideband_heating_w"] == pytest.approx(1e9 * 0.01 * 40e-3 * EV)
    assert r["net_cooling_w"] == pytest.approx(1e-14 - r["nonradiative_heating_w"] - r["sideband_heating_w"])
    assert r["volumetric_heating_w_m3"] == pytest.approx(10.0 * r["intensity_w_m2"] - 1e24 * r["net_cooling_w"])
    with pytest.raises(BudgetError):
        net_cooling_report(inputs, qe=1.5)
    with pytest.raises(BudgetError):
        BudgetInputs(T=1.0, p_cool=0.0, beta=1.2)


def test_provenance_marks_published_values():
    prov = provenance(BudgetInputs(T=20.0, p_cool=1e-14, e_opt_ev=2.0))
    assert prov["gamma"]["published_default"]
    assert not prov["e_opt_ev"]["published_default"]
    assert not prov["dipole_debye"]["published_default"]
