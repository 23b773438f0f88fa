import math
import warnings
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import make_params
from dimerfluor.effective import (
    ValidityWarning,
    cascade_steady_numeric,
    combined_steady,
    effective_rates,
    model1p_steady,
    model2p_steady,
    two_photon_rabi,
    vee_steady_numeric,
)
from dimerfluor.errors import DegenerateGeometryError
from dimerfluor.lindblad import steady_state_of


def test_two_photon_rabi_examples():
    assert two_photon_rabi(0.1, 1.0, 0.0) == pytest.approx(-0.02)
    assert abs(two_photon_rabi(5.0, 3.0, math.pi / 2)) < 1e-14
    assert two_photon_rabi(2.0, 3.0, 0.4) == pytest.approx(4 * two_photon_rabi(1.0, 3.0, 0.4))
    with pytest.raises(DegenerateGeometryError):
        two_photon_rabi(1.0, 0.0, 0.0)


@settings(max_examples=200, deadline=None)
@given(st.floats(0.0, math.pi / 2), st.floats(0.0, 1.0), st.floats(0.1, 50.0))
def test_rate_identities(beta, g12, omega):
    r = effective_rates(make_params(big_r=100.0, beta=beta, omega=omega, gamma12=g12))
    assert r.lamb == r.omega_2p
    assert r.omega_S**2 + r.omega_A**2 == pytest.approx(2 * omega**2)
    assert r.gamma_S + r.gamma_A == pytest.approx(2.0)
    assert r.gamma_C == pytest.approx(g12 * math.sin(beta))


def test_model2p_figure_point_exact_rational():
    p = make_params(omega=100.0)  # gamma/R = 1e-3, Omega/R = 0.1
    c2 = Fraction(1, 2)
    om, r = Fraction(100), Fraction(1000)
    oracle = 4 * om**4 * c2 / (16 * om**4 * c2 + r**2)
    ee, ss, aa = model2p_steady(p)
    assert ee == pytest.approx(float(oracle), rel=1e-14)
    assert ee == pytest.approx(0.24969, abs=5e-6)
    assert ss == aa == ee


def test_model2p_limits():
    ee, _, _ = model2p_steady(make_params(big_r=100.0, beta=0.2, omega=25.0))
    assert ee == pytest.approx(0.25, abs=2e-3)
    assert model2p_steady(make_params(beta=math.pi / 2, omega=100.0))[0] < 1e-20


@pytest.mark.parametrize("beta,delta,omega", [(0.3, 0.0, 40.0), (0.9, 3.0, 25.0),
                                              (math.pi / 4, -2.0, 60.0)])
def test_model2p_matches_cascade_master_equation(beta, delta, omega):
    p = make_params(beta=beta, delta=delta, omega=omega)
    chi = cascade_steady_numeric(p)
    ee, ss, aa = model2p_steady(p)
    assert ee == pytest.approx(chi[1, 1].real, rel=1e-9)
    assert ss == pytest.approx(chi[2, 2].real / 2, rel=1e-9)


@settings(max_examples=200, deadline=None)
@given(st.floats(0.0, 1.5), st.floats(1.0, 200.0), st.floats(0.0, 100.0))
def test_model2p_even_in_detuning(beta, omega, delta):
    p = make_params(beta=beta, omega=omega)
    assert model2p_steady(p.replace(delta_laser=delta))[0] == \
        model2p_steady(p.replace(delta_laser=-delta))[0]


def test_model2p_monotone_and_bounded():
    vals = [model2p_steady(make_params(omega=om))[0] for om in np.geomspace(1, 300, 60)]
    assert np.all(np.diff(vals) > 0)
    assert max(vals) < 0.25


def test_model1p_dark_and_bright_examples():
    p = make_params(big_r=100.0, beta=0.0, omega=1.0, delta=-100.0, gamma12=1.0)
    ss, aa, sa, ee = model1p_steady(p)
    assert ss == pytest.approx(0.4, rel=1e-14)
    assert aa == 0.0 and ee == 0.0
    for d in (-150.0, 0.0, 100.0):
        assert model1p_steady(p.replace(delta_laser=d))[1] == 0.0
    weak = model1p_steady(make_params(omega=1e-9, delta=30.0))
    assert max(abs(complex(x)) for x in weak) < 1e-15


# three reference points from the numerically solved three-level Vee model
VEE_POINTS = [(0.4, -30.0, 5.0), (1.0, 10.0, 3.0), (math.pi / 4, 0.0, 20.0)]


@pytest.mark.parametrize("beta,delta,omega", VEE_POINTS)
def test_coherence_matches_vee_master_equation(beta, delta, omega):
    p = make_params(big_r=100.0, beta=beta, delta=delta, omega=omega, gamma12=1.0)
    chi = vee_steady_numeric(p)
    _, _, sa, _ = model1p_steady(p)
    assert sa.real == pytest.approx(chi[2, 1].real, rel=1e-9)
    assert abs(chi[2, 1].imag) < 1e-12


@pytest.mark.parametrize("beta,delta", [(0.4, -30.0), (1.0, 10.0), (0.2, 60.0)])
def test_populations_close_to_vee_master_equation_at_weak_drive(beta, delta):
    p = make_params(big_r=100.0, beta=beta, delta=delta, omega=2.0, gamma12=0.999)
    chi = vee_steady_numeric(p)
    ss, aa, _, _ = model1p_steady(p)
    assert ss == pytest.approx(chi[2, 2].real, rel=0.05)
    assert aa == pytest.approx(chi[1, 1].real, rel=0.05)


def test_combined_examples():
    p = make_params(beta=math.pi / 2, omega=100.0)
    s = combined_steady(p)
    assert s.rho2_ee < 1e-20
    assert s.combined_ee == s.rho1_SS * s.rho1_AA + s.rho2_ee
    s = combined_steady(make_params(beta=0.0, omega=50.0))
    assert s.rho2_ee > 10 * s.rho1_ee
    assert s.combined_SS == s.rho1_SS + s.rho2_SS
    assert s.combined_AA == s.rho1_AA + s.rho2_AA
    assert s.combined_SA == s.rho1_SA


def test_combined_close_to_exact_at_two_photon_resonance(fig3_point):
    s = combined_steady(fig3_point)
    exact = steady_state_of(fig3_point).populations[3]
    assert abs(s.combined_ee - exact) / exact < 0.10


@pytest.mark.parametrize("omega", [10.0, 50.0, 100.0])
def test_combined_ee_oracle_agreement_band(omega):
    """|combined_ee - exact| / exact < 0.15 over |Delta| <= 0.05 R for Omega <= 0.1 R."""
    worst = 0.0
    for d in np.linspace(-50.0, 50.0, 21):
        p = make_params(omega=omega, delta=d)
        exact = steady_state_of(p).populations[3]
        worst = max(worst, abs(combined_steady(p).combined_ee - exact) / exact)
    assert worst < 0.15


def test_probabilities_in_unit_interval(rng):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ValidityWarning)
        for _ in range(300):
            p = make_params(big_r=rng.uniform(10, 1000), beta=rng.uniform(0, math.pi / 2),
                            omega=rng.uniform(0, 100), delta=rng.uniform(-500, 500),
                            gamma12=rng.uniform(0, 1))
            s = combined_steady(p)
            for v in (s.rho2_ee, s.rho1_SS, s.rho1_AA, s.rho1_ee):
                assert 0.0 <= v <= 1.0


def test_regime_warnings():
    with pytest.warns(ValidityWarning):
        model2p_steady(make_params(omega=400.0))
    with pytest.warns(ValidityWarning):
        model1p_steady(make_params(big_r=5.0))
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        combined_steady(make_params(omega=400.0))
    assert sum(issubclass(w.category, ValidityWarning) for w in caught) == 1
    with pytest.raises(DegenerateGeometryError):
        model2p_steady(make_params().replace(j_coupling=0.0, delta_emit=0.0, omega_drive=1.0))
