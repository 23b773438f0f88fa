import math
import warnings

import numpy as np
import pytest

from conftest import make_params, random_params
from dimerfluor.effective import ValidityWarning, combined_steady
from dimerfluor.errors import DomainError, UndefinedCorrelationError
from dimerfluor.lindblad import DensityMatrix, collective_state, steady_state_of
from dimerfluor.observables import (
    emission_observables,
    g2_effective,
    g2_operator,
    g2_zero,
    intensity_effective,
    intensity_exact,
    loglog_slope,
    omega_visibility,
    solve_visibility_crossing,
    two_photon_visibility,
    visibility_crossover,
)


def projector(v):
    return DensityMatrix(np.outer(v, np.conj(v)))


def test_intensity_examples():
    gg, ee = np.eye(4)[0], np.eye(4)[3]
    assert intensity_exact(projector(gg)) == 0.0
    assert intensity_exact(projector(ee)) == pytest.approx(2.0)
    assert abs(intensity_exact(projector(collective_state("A", 0.0)))) < 1e-15
    assert intensity_exact(projector(collective_state("S", 0.0))) == pytest.approx(2.0)


def test_g2_examples():
    assert g2_zero(projector(np.eye(4)[3])) == pytest.approx(1.0)
    assert g2_zero(projector(collective_state("S", 0.3))) == 0.0
    with pytest.raises(UndefinedCorrelationError):
        g2_zero(projector(np.eye(4)[0]))


def random_density_matrix(rng):
    m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    rho = m @ m.conj().T
    return DensityMatrix(rho / np.trace(rho))


def test_g2_formula_equals_operator_definition(rng):
    for _ in range(100):
        rho = random_density_matrix(rng)
        assert g2_zero(rho) == pytest.approx(g2_operator(rho), rel=1e-10, abs=1e-12)


def test_second_order_intensity_at_zero_angle():
    p = make_params(beta=0.0, omega=50.0)
    s = combined_steady(p)
    _, _, i2 = intensity_effective(s, 0.0)
    assert i2 == pytest.approx(4 * s.rho2_ee)


def test_intensity_additivity(rng):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ValidityWarning)
        for _ in range(100):
            p = random_params(rng)
            i, i1, i2 = intensity_effective(combined_steady(p), p.beta)
            assert i == i1 + i2


def test_effective_intensity_at_figure_point(fig3_point):
    i_eff, _, _ = intensity_effective(combined_steady(fig3_point), fig3_point.beta)
    i_num = intensity_exact(steady_state_of(fig3_point))
    assert abs(i_eff - i_num) / i_num < 0.10


def test_interference_dip_near_r_cos_beta():
    p = make_params(omega=100.0)
    deltas = np.linspace(0.0, 1000.0, 2001)
    i1 = [intensity_effective(combined_steady(p.replace(delta_laser=d)), p.beta)[1]
          for d in deltas]
    dip = deltas[int(np.argmin(i1))]
    assert abs(dip - 1000 * math.cos(p.beta)) < 0.02 * 1000


def test_g2_tends_to_one_from_above():
    vals = [g2_zero(steady_state_of(make_params(omega=om))) for om in (100.0, 200.0, 300.0)]
    assert all(v > 1.0 for v in vals)
    assert vals[0] < 1.01
    assert np.all(np.diff(vals) < 0)


def test_effective_g2_undefined_without_light():
    s = combined_steady(make_params(omega=0.0))
    with pytest.raises(UndefinedCorrelationError):
        g2_effective(s, math.pi / 4)


def test_observable_ranges(rng):
    for _ in range(50):
        obs = emission_observables(random_params(rng))
        assert 0.0 <= obs.intensity <= 2.0
        assert obs.g2_zero >= 0.0
        assert obs.visibility >= 0.0
        assert obs.intensity_eff == pytest.approx(obs.i_first + obs.i_second)


def test_visibility_closed_form_limit():
    p = make_params(big_r=1e5, omega=1.0)
    assert omega_visibility(p) == pytest.approx(0.5, rel=1e-4)
    v, om_v = visibility_crossover(p)
    assert om_v == omega_visibility(p)
    assert v == two_photon_visibility(p)


def test_numerical_crossing_matches_closed_form():
    p = make_params(big_r=100.0)
    crossing = solve_visibility_crossing(p)
    assert abs(crossing - omega_visibility(p)) / omega_visibility(p) < 0.20
    assert abs(crossing - 0.5) / 0.5 < 0.20


def test_visibility_scales_as_omega_squared_at_weak_drive():
    p = make_params(big_r=100.0)
    ratio = two_photon_visibility(p.replace(omega_drive=2e-3)) / \
        two_photon_visibility(p.replace(omega_drive=1e-3))
    assert ratio == pytest.approx(4.0, rel=1e-3)


def test_visibility_requires_resonance_and_warns_for_dark_state():
    with pytest.raises(DomainError):
        visibility_crossover(make_params(delta=1.0, omega=1.0))
    with pytest.warns(ValidityWarning):
        visibility_crossover(make_params(beta=0.0, omega=1.0, gamma12=1.0))


def test_loglog_slope_of_power_law():
    x = np.geomspace(1, 100, 50)
    assert np.allclose(loglog_slope(x, 3 * x**2.5), 2.5)
