import math
from dataclasses import dataclass, replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dimerfluor import SystemParams
from dimerfluor.errors import DomainError, NoSignalError, StepSizeError
from dimerfluor.estimation import (
    FisherReport,
    fisher_from_spectrum,
    fisher_information,
    fisher_map,
    poisson_count_prob,
    poisson_fisher_by_summation,
    spectrum_sensitivity,
)
from dimerfluor.spectrum import detect_peaks, resolution_grid, total_spectrum, two_photon_saturation


@dataclass(frozen=True)
class FrozenCoupling(SystemParams):
    """Moving the emitters leaves J untouched, so the spectrum cannot depend on kr12."""

    def with_distance(self, kr12):
        return replace(self, kr12=kr12)


@pytest.fixture(scope="module")
def template():
    return SystemParams.from_distance(0.17, 50.0, gamma12=0.999, det_linewidth=1.0)


@pytest.fixture(scope="module")
def grid(template):
    return resolution_grid(template.big_r, 2.5, 2)


@pytest.fixture(scope="module")
def saturation(template):
    return two_photon_saturation(template.big_r, 1.0, template.beta)


# ---------------------------------------------------------------------------
# Poisson counting model


def test_poisson_examples():
    assert poisson_count_prob(0.0, 0) == 1.0
    assert poisson_count_prob(1.0, 1) == pytest.approx(math.exp(-1), rel=1e-15)
    assert poisson_count_prob(2.5, 3) == pytest.approx(2.5**3 * math.exp(-2.5) / 6, rel=1e-14)
    with pytest.raises(DomainError):
        poisson_count_prob(-0.1, 0)


@settings(max_examples=200, deadline=None)
@given(st.floats(0.0, 20.0))
def test_poisson_normalization(mean):
    n = np.arange(0, 120)
    assert abs(poisson_count_prob(mean, n).sum() - 1.0) < 1e-12


def test_poisson_normalization_example():
    assert abs(poisson_count_prob(3.0, np.arange(51)).sum() - 1.0) < 1e-12


@pytest.mark.parametrize("mean,dmean", [(0.3, 0.1), (4.0, -2.5), (37.0, 11.0)])
def test_closed_form_matches_summed_expectation(mean, dmean):
    closed = dmean**2 / mean
    summed = poisson_fisher_by_summation(mean, dmean, n_max=200)
    assert summed == pytest.approx(closed, rel=1e-6)


def test_spectrum_form_matches_per_sensor_summation(template, grid, saturation):
    # three sensors of a real spectrum, summed both ways
    p = template.replace(omega_drive=saturation)
    spec = total_spectrum(p, grid)
    dspec = spectrum_sensitivity(p, omegas=grid)
    for i in np.argsort(spec)[-3:]:
        scale = 20.0 / spec[i]  # keeps the mean count well inside 0..200
        closed, _ = fisher_from_spectrum(spec[i:i + 1], dspec[i:i + 1], eta=scale)
        summed = poisson_fisher_by_summation(scale * spec[i], scale * dspec[i])
        assert summed == pytest.approx(closed, rel=1e-6)


# ---------------------------------------------------------------------------
# Fisher information


def test_report_fields(template, grid, saturation):
    rep = fisher_information(template.replace(omega_drive=saturation), omegas=grid)
    assert isinstance(rep, FisherReport)
    assert rep.fisher > 0 and rep.crlb * rep.fisher == pytest.approx(1.0)
    assert rep.n_points == grid.size and rep.n_points_used <= rep.n_points
    assert rep.fd_step == pytest.approx(1e-4 * 0.17)
    assert rep.kr12 == 0.17 and rep.eta == 1.0
    d = rep.as_dict()
    for key in ("kr12", "delta_laser", "omega_drive", "fisher", "crlb", "n_points_used", "fd_step"):
        assert key in d


def test_eta_linearity(template, grid, saturation):
    p = template.replace(omega_drive=saturation)
    f1 = fisher_information(p, omegas=grid, eta=1.0).fisher
    f2 = fisher_information(p, omegas=grid, eta=2.0).fisher
    assert f2 == pytest.approx(2 * f1, rel=1e-12)


def test_frozen_coupling_gives_zero_information(template, grid):
    frozen = FrozenCoupling(**{f: getattr(template, f) for f in
                               ("delta_laser", "delta_emit", "j_coupling", "gamma", "gamma12",
                                "kr12", "det_linewidth")}, omega_drive=5.0)
    rep = fisher_information(frozen, omegas=grid)
    assert rep.fisher == 0.0 and rep.crlb == math.inf


def test_grid_refinement_per_point_converges(template, saturation):
    p = template.replace(omega_drive=saturation)
    ratios = []
    for density in (2, 4):
        w = resolution_grid(p.big_r, 2.5, density)
        ratios.append(fisher_information(p, omegas=w).fisher / w.size)
    assert ratios[1] == pytest.approx(ratios[0], rel=0.02)


def test_step_halving_is_stable(template, grid, saturation):
    p = template.replace(omega_drive=saturation)
    d1 = spectrum_sensitivity(p, omegas=grid, step=2e-5)
    d2 = spectrum_sensitivity(p, omegas=grid, step=1e-5)
    assert np.linalg.norm(d1 - d2) < 0.01 * np.linalg.norm(d2)


def test_coarse_step_is_rejected(template, grid, saturation):
    with pytest.raises(StepSizeError):
        fisher_information(template.replace(omega_drive=saturation), omegas=grid, step=0.02)


def test_preconditions(template, grid):
    with pytest.raises(DomainError):
        fisher_information(template.replace(det_linewidth=0.0, omega_drive=5.0), omegas=grid)
    with pytest.raises(DomainError):
        spectrum_sensitivity(template, omegas=grid, step=0.0)
    with pytest.raises(DomainError):
        spectrum_sensitivity(template, omegas=grid, step=0.1)
    with pytest.raises(DomainError):
        fisher_information(SystemParams(delta_emit=50.0, j_coupling=100.0, det_linewidth=1.0),
                           omegas=grid)
    with pytest.raises(NoSignalError):
        fisher_from_spectrum(np.zeros(5), np.zeros(5))


def test_outer_sideband_moves_inward_with_distance(template):
    # the outermost sideband is only visible at fairly strong drive
    p = template.replace(omega_drive=40.0)
    r = p.big_r
    w = np.linspace(2 * r - 20, 2 * r + 40, 6001)
    (near,) = detect_peaks(total_spectrum(p, w), omegas=w)
    (far,) = detect_peaks(total_spectrum(p.with_distance(0.171), w), omegas=w)
    assert far.omega < near.omega
    # sensitivity is positive on the inner shoulder and negative on the outer one
    ds = spectrum_sensitivity(p, omegas=w)
    inner, outer = w[np.argmax(ds)], w[np.argmin(ds)]
    assert ds.max() > 0 > ds.min()
    assert near.omega - 3 < inner < near.omega < outer < near.omega + 3


def test_two_photon_region_carries_most_information(template, grid, saturation):
    r = template.big_r
    f = {d: fisher_information(template.replace(omega_drive=saturation, delta_laser=d),
                               omegas=grid).fisher for d in (-r, 0.0, r)}
    assert f[0.0] > f[-r] and f[0.0] > f[r]


# ---------------------------------------------------------------------------
# maps


def test_single_cell_map_matches_point(template, grid):
    m = fisher_map(template, ("omega", [6.0]), ("delta_laser", [0.0]), grid)
    point = fisher_information(template.replace(omega_drive=6.0), omegas=grid)
    assert m.values.shape == (1, 1)
    assert m.reports[0] == point


def test_map_sum_dominates_its_cells_and_parallel_order(template, grid):
    axes = (("omega", [3.0, 6.0, 12.0]), ("delta_laser", [-2.0, 0.0]))
    serial = fisher_map(template, *axes, grid)
    values = serial.values
    assert values.min() >= 0 and values.sum() >= values.max()
    assert values.shape == (3, 2)
    pooled = fisher_map(template, *axes, grid, jobs=2)
    assert np.array_equal(pooled.values, values)
    i, j = np.unravel_index(np.argmax(values), values.shape)
    assert serial.argmax() == (axes[0][1][i], axes[1][1][j])


def test_kr12_axis_and_unknown_axis(template, grid):
    m = fisher_map(template, ("kr12", [0.15, 0.2]), ("omega", [6.0]), grid)
    assert [r.kr12 for r in m.reports] == [0.15, 0.2]
    with pytest.raises(ValueError):
        fisher_map(template, ("gamma", [1.0]), ("omega", [1.0]), grid)
    with pytest.raises(ValueError):
        fisher_map(template, ("omega", []), ("kr12", [0.2]), grid)


def test_detuning_map_shows_three_ridges(template):
    r = template.big_r
    w = resolution_grid(r, 2.5, 2)
    deltas = np.linspace(-1.2 * r, 1.2 * r, 97)
    row = fisher_map(template, ("omega", [10.0]), ("delta_laser", deltas), w).values[0]
    maxima = [deltas[k] for k in range(1, len(row) - 1) if row[k] > row[k - 1] and row[k] >= row[k + 1]]
    for centre in (-r, 0.0, r):
        assert min(abs(m - centre) for m in maxima) < 0.1 * r
