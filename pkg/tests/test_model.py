import math

import pytest
from hypothesis import given, strategies as st

from eo_bridge.errors import DomainError
from eo_bridge.model import (CONSTANTS, DeviceGeometry, SystemParams, coupling_coefficient,
                             derive_rates, to_angular)

from conftest import phases, system_params

LN = dict(
    omega_a=2 * math.pi * 194e12, omega_b=2 * math.pi * 10e9, n=2.14, r=30.9e-12,
    l=3e-3, d=1e-4, tau=2.14e-11, C=1e-14,
)
# 30-digit evaluation of the coupling formula with hbar and c substituted by hand
LN_G = 31418.1922577101333940992026785


def test_constants_are_codata_2018():
    assert CONSTANTS["hbar"] == 1.054571817e-34
    assert CONSTANTS["c"] == 299792458.0


def test_coupling_matches_high_precision_hand_evaluation():
    assert coupling_coefficient(DeviceGeometry(**LN)) == pytest.approx(LN_G, rel=1e-13)


def test_coupling_is_zero_without_electro_optic_effect():
    assert coupling_coefficient(DeviceGeometry(**{**LN, "r": 0.0})) == 0.0


def test_coupling_is_linear_in_length():
    g1 = coupling_coefficient(DeviceGeometry(**LN))
    g2 = coupling_coefficient(DeviceGeometry(**{**LN, "l": 2 * LN["l"]}))
    assert g2 == pytest.approx(2 * g1, rel=1e-15)


@pytest.mark.parametrize("field", ["omega_a", "omega_b", "n", "l", "d", "tau", "C"])
@pytest.mark.parametrize("bad", [0.0, -1.0])
def test_nonpositive_geometry_field_is_named(field, bad):
    with pytest.raises(DomainError, match=field):
        DeviceGeometry(**{**LN, field: bad})


def test_negative_electro_optic_coefficient_rejected():
    with pytest.raises(DomainError, match="r="):
        DeviceGeometry(**{**LN, "r": -1e-12})


def test_optical_must_exceed_microwave():
    with pytest.raises(DomainError, match="omega_a"):
        DeviceGeometry(**{**LN, "omega_a": 1e9})


def test_from_device_uses_product():
    dev = DeviceGeometry(**LN)
    p = SystemParams.from_device(dev, 100 + 50j, 1.0, 0.0, 1.0, 0.0)
    assert p.g_alpha == pytest.approx(LN_G * (100 + 50j), rel=1e-13)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(gamma_a=0.0, gamma_a_p=0.0, gamma_b=1.0, gamma_b_p=0.0),
        dict(gamma_a=1.0, gamma_a_p=0.0, gamma_b=-1.0, gamma_b_p=0.0),
        dict(gamma_a=1.0, gamma_a_p=-0.1, gamma_b=1.0, gamma_b_p=0.0),
        dict(gamma_a=1.0, gamma_a_p=0.0, gamma_b=1.0, gamma_b_p=math.nan),
    ],
)
def test_invalid_rates(kwargs):
    with pytest.raises(DomainError):
        SystemParams(**kwargs)


def test_derive_rates_unit_case():
    r = derive_rates(SystemParams(1.0, 0.0, 1.0, 0.0, 0.5))
    assert (r.Gamma_a, r.Gamma_b, r.G0, r.eta) == (1.0, 1.0, 1.0, 1.0)


def test_derive_rates_no_pump():
    assert derive_rates(SystemParams(1.0, 0.3, 2.0, 0.1)).G0 == 0.0


def test_derive_rates_lossy_efficiency():
    r = derive_rates(SystemParams(2.0, 2.0, 1.0, 1.0))
    assert r.eta == 0.25
    assert (r.Gamma_a, r.Gamma_b) == (4.0, 2.0)


@given(system_params())
def test_eta_bounds(p):
    eta = derive_rates(p).eta
    assert 0 < eta <= 1
    if p.gamma_a_p == 0 and p.gamma_b_p == 0:
        assert eta == 1.0


@given(system_params(), st.floats(0.01, 100.0))
def test_eta_scale_invariant(p, c):
    q = SystemParams(c * p.gamma_a, c * p.gamma_a_p, c * p.gamma_b, c * p.gamma_b_p, p.g_alpha)
    assert derive_rates(q).eta == pytest.approx(derive_rates(p).eta, rel=1e-12)


@given(system_params(), phases)
def test_G0_phase_invariant(p, theta):
    q = p.with_g_alpha(p.g_alpha * complex(math.cos(theta), math.sin(theta)))
    assert derive_rates(q).G0 == pytest.approx(derive_rates(p).G0, rel=1e-12, abs=1e-300)


def test_from_cooperativity_round_trip():
    p = SystemParams.from_cooperativity(2.5, Gamma_a=3.0, Gamma_b=0.5, eta_a=0.8, eta_b=0.6)
    r = derive_rates(p)
    assert r.G0 == pytest.approx(2.5, rel=1e-14)
    assert r.eta == pytest.approx(0.48, rel=1e-14)


def test_unit_conversion():
    assert to_angular(1.0, "cyclic") == 2 * math.pi
    assert to_angular(3.0) == 3.0
    with pytest.raises(ValueError):
        to_angular(1.0, "hertz")
