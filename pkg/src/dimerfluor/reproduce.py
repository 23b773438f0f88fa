"""Data (and optional images) for the reference figure sets fig3 to fig7.

Every panel is a function returning a :class:`Panel`: a :class:`Table` with
the numbers plus a callable that renders it to an image. Rates are in units
of gamma; ``meta`` records R so that axes can be rescaled.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .effective import ValidityWarning, combined_steady
from .errors import ConfigError, UndefinedCorrelationError
from .estimation import fisher_map
from .lindblad import steady_state_of
from .observables import (
    g2_effective,
    g2_zero,
    intensity_effective,
    intensity_exact,
    loglog_slope,
    omega_visibility,
)
from .params import FIGURE_GAMMA12, SystemParams
from .spectrum import (
    DRESSED_LABELS,
    detect_peaks,
    resolution_grid,
    rf_spectrum,
    strong_driving_eigensystem,
    two_photon_saturation,
)
from .tables import Table

BETAS = {"0": 0.0, "pi/4": math.pi / 4, "pi/2": math.pi / 2}
MAP_BINS = 1001


@dataclass
class Panel:
    table: Table
    draw: Callable[[str], None]


def _exact_and_effective(params):
    rho = steady_state_of(params)
    i_num = intensity_exact(rho)
    try:
        g2_num = g2_zero(rho)
    except UndefinedCorrelationError:
        g2_num = math.nan
    state = combined_steady(params)
    i_eff, i1, i2 = intensity_effective(state, params.beta)
    try:
        g2_eff = g2_effective(state, params.beta)
    except UndefinedCorrelationError:
        g2_eff = math.nan
    return i_num, i_eff, i1, i2, g2_num, g2_eff


def bin_max(values, bins):
    """Peak-preserving downsampling: the maximum over consecutive chunks."""
    values = np.asarray(values)
    edges = np.linspace(0, values.size, bins + 1).astype(int)
    return np.maximum.reduceat(values, edges[:-1])


def bin_centres(omegas, bins):
    edges = np.linspace(0, omegas.size, bins + 1).astype(int)
    return np.array([omegas[a:b].mean() for a, b in zip(edges[:-1], edges[1:])])


# ---------------------------------------------------------------------------
# intensity and g2 versus laser detuning


FIG3_GAMMA_OVER_R = 1e-3
FIG3_OMEGA_OVER_R = 0.1


def _fig3_params(beta=math.pi / 4):
    r = 1.0 / FIG3_GAMMA_OVER_R
    return SystemParams.from_beta(r, beta, omega_drive=FIG3_OMEGA_OVER_R * r,
                                  gamma12=FIGURE_GAMMA12)


def _fig3_meta(base):
    return {"figure": "fig3", "big_r": base.big_r, "beta": base.beta, "omega": base.omega_drive,
            "gamma12": base.gamma12}


def fig3_line(panel, n=None):
    """Panels a/c (full detuning range) and e/f (zoom near the two-photon resonance)."""
    from . import plotting

    base = _fig3_params()
    r = base.big_r
    zoom = panel in ("e", "f")
    deltas = np.linspace(-0.05 * r, 0.05 * r, n or 41) if zoom else \
        np.linspace(-1.5 * r, 1.5 * r, n or 1201)
    rows = [(d, *_exact_and_effective(base.replace(delta_laser=d))) for d in deltas]
    rows = np.array(rows)
    meta = _fig3_meta(base) | {"panel": panel}
    x = deltas / r
    if panel in ("a", "e"):
        table = Table(("delta", "I_numerical", "I_analytical", "I1", "I2"), rows[:, :5], meta)

        def draw(path):
            series = [(rows[:, 1], "numerical", "C0-"), (rows[:, 2], "analytical", "C3--")]
            if zoom:
                series += [(rows[:, 3], "I1", "C2:"), (rows[:, 4], "I2", "C1:")]
            plotting.line_plot(path, x, series, r"$\Delta / R$", "I", logy=not zoom)
    else:
        table = Table(("delta", "g2_numerical", "g2_analytical"), rows[:, [0, 5, 6]], meta)

        def draw(path):
            plotting.line_plot(path, x, [(rows[:, 5], "numerical", "C0-"),
                                         (rows[:, 6], "analytical", "C3--")],
                               r"$\Delta / R$", r"$g^{(2)}(0)$", logy=True)
    return Panel(table, draw)


def fig3_map(panel, n_beta=46, n_delta=241):
    """Panels b (intensity) and d (g2) over mixing angle and detuning."""
    from . import plotting

    r = 1.0 / FIG3_GAMMA_OVER_R
    betas = np.linspace(0.0, math.pi / 2, n_beta)
    deltas = np.linspace(-1.5 * r, 1.5 * r, n_delta)
    rows = []
    for beta in betas:
        base = _fig3_params(beta)
        for d in deltas:
            i_num, i_eff, _, _, g2_num, g2_eff = _exact_and_effective(base.replace(delta_laser=d))
            rows.append((beta, d, i_num, i_eff, g2_num, g2_eff))
    rows = np.array(rows)
    meta = _fig3_meta(_fig3_params()) | {"panel": panel, "n_beta": n_beta, "n_delta": n_delta}
    meta.pop("beta")
    col = 2 if panel == "b" else 4
    name = "I" if panel == "b" else "g2"
    table = Table(("beta", "delta", f"{name}_numerical", f"{name}_analytical"),
                  rows[:, [0, 1, col, col + 1]], meta)

    def draw(path):
        z = rows[:, col].reshape(n_beta, n_delta)
        plotting.map_plot(path, deltas / r, betas, z, r"$\Delta / R$", r"$\beta$",
                          "I" if panel == "b" else r"$g^{(2)}(0)$", logz=True)
    return Panel(table, draw)


# ---------------------------------------------------------------------------
# two-photon visibility


def fig4a(n=141):
    from . import plotting

    r = 100.0  # gamma / R = 1e-2
    base = SystemParams.from_beta(r, math.pi / 4, gamma12=FIGURE_GAMMA12)
    omegas = r * np.logspace(-4, -0.5, n)
    rows = []
    for om in omegas:
        p = base.replace(omega_drive=om)
        i_num, i_eff, i1, i2, _, _ = _exact_and_effective(p)
        rows.append((om, i_num, i1, i2, i_eff, i2 / i1))
    rows = np.array(rows)
    slope = loglog_slope(rows[:, 0], rows[:, 1])
    om_v = omega_visibility(base)
    table = Table(("omega", "I_numerical", "I1", "I2", "I_analytical", "V2p", "slope"),
                  np.column_stack([rows, slope]),
                  {"figure": "fig4", "panel": "a", "big_r": r, "beta": base.beta,
                   "gamma12": base.gamma12, "omega_v": om_v})

    def draw(path):
        plotting.line_plot(path, omegas, [(rows[:, 1], "numerical", "C0-"),
                                          (rows[:, 2], "I1", "C2--"),
                                          (rows[:, 3], "I2", "C1--"),
                                          (rows[:, 4], "I1 + I2", "C3:")],
                           r"$\Omega / \gamma$", "I", logx=True, logy=True,
                           vlines=[(om_v, r"$\Omega_v$")])
    return Panel(table, draw)


def fig4b(n=61):
    from . import plotting

    ratios = np.logspace(-4, -1, n)
    rows = []
    for g_over_r in ratios:
        r = 1.0 / g_over_r
        base = SystemParams.from_beta(r, math.pi / 4, gamma12=FIGURE_GAMMA12)
        for om_over_r in ratios:
            state = combined_steady(base.replace(omega_drive=om_over_r * r))
            _, i1, i2 = intensity_effective(state, base.beta)
            rows.append((g_over_r, om_over_r, i2 / i1, omega_visibility(base) / r))
    rows = np.array(rows)
    table = Table(("gamma_over_R", "omega_over_R", "V2p", "omega_v_over_R"), rows,
                  {"figure": "fig4", "panel": "b", "beta": math.pi / 4,
                   "gamma12": FIGURE_GAMMA12, "n": n})

    def draw(path):
        z = rows[:, 2].reshape(n, n).T  # rows: omega, columns: gamma
        plotting.map_plot(path, ratios, ratios, z, r"$\gamma / R$", r"$\Omega / R$", r"$V_{2p}$",
                          logx=True, logy=True, logz=True,
                          overlay=(ratios, rows[::n, 3], r"$\Omega_v$"))
    return Panel(table, draw)


# ---------------------------------------------------------------------------
# spectra at the two-photon resonance


def fig5_spectrum(beta, gamma_over_r=0.1, points_per_gamma=20):
    """Spectrum at Omega = R with its emitter/interference components."""
    from . import plotting

    r = 1.0 / gamma_over_r
    p = SystemParams.from_beta(r, beta, omega_drive=r, gamma12=FIGURE_GAMMA12)
    series = rf_spectrum(p, resolution_grid(r, 5.0, points_per_gamma))
    peaks = detect_peaks(series, 1e-3)
    meta = {"figure": "fig5", "big_r": r, "beta": beta, "omega": r, "gamma12": p.gamma12,
            "n_peaks": len(peaks),
            "peaks": " ".join(f"{pk.omega / r:.6g}" for pk in peaks)}
    table = Table(series.COLUMNS, series.columns(), meta)

    def draw(path):
        plotting.spectrum_plot(path, series, peaks, scale=r)
    return Panel(table, draw)


def fig5_sweep(beta, n_omega=41, gamma_over_r=1e-3, bins=MAP_BINS):
    """Spectrum versus Omega/R; each row is reduced by maxima over ``bins`` frequency bins."""
    from . import plotting

    r = 1.0 / gamma_over_r
    base = SystemParams.from_beta(r, beta, gamma12=FIGURE_GAMMA12)
    grid = resolution_grid(r, 5.0, 5)
    centres = bin_centres(grid, bins)
    ratios = np.linspace(0.025, 1.0, n_omega)
    z = np.array([bin_max(rf_spectrum(base.replace(omega_drive=k * r), grid,
                                      components=False).total, bins) for k in ratios])
    rows = np.column_stack([np.repeat(ratios, bins), np.tile(centres, n_omega), z.ravel()])
    table = Table(("omega_over_R", "frequency", "total"), rows,
                  {"figure": "fig5", "big_r": r, "beta": beta, "gamma12": base.gamma12,
                   "reduction": "bin_max", "bins": bins, "n_omega": n_omega})

    def draw(path):
        plotting.map_plot(path, centres / r, ratios, z, r"$\omega / R$", r"$\Omega / R$",
                          r"$S(\omega)$", logz=True)
    return Panel(table, draw)


def fig5_eigenstates(beta, gamma_over_r=1e-3):
    """Weights of the Omega = R eigenstates over |S>, |A2>, |S2>, |A>."""
    from . import plotting

    r = 1.0 / gamma_over_r
    p = SystemParams.from_beta(r, beta, omega_drive=r, gamma12=FIGURE_GAMMA12)
    energies, states = strong_driving_eigensystem(p)
    weights = np.abs(states.T) ** 2
    rows = np.column_stack([np.arange(1, 5), energies, weights])
    table = Table(("state", "energy", *(f"w_{lbl}" for lbl in DRESSED_LABELS)), rows,
                  {"figure": "fig5", "big_r": r, "beta": beta, "omega": r})

    def draw(path):
        plotting.map_plot(path, np.arange(4), np.arange(1, 5), weights, "basis state",
                          "eigenstate U_i", "weight",
                          title=" ".join(f"{i}:{lbl}" for i, lbl in enumerate(DRESSED_LABELS)))
    return Panel(table, draw)


# ---------------------------------------------------------------------------
# spectra versus mixing angle and detuning


FIG6_R = 100.0  # gamma / R = 1e-2


def _spectrum_map(param_list, axis_values, axis_name, meta, ylabel, bins=MAP_BINS):
    from . import plotting

    grid = resolution_grid(FIG6_R, 5.0, 5)
    centres = bin_centres(grid, bins)
    z = np.array([bin_max(rf_spectrum(p, grid, components=False).total, bins)
                  for p in param_list])
    n = len(axis_values)
    rows = np.column_stack([np.repeat(axis_values, bins), np.tile(centres, n), z.ravel()])
    table = Table((axis_name, "frequency", "total"), rows,
                  meta | {"reduction": "bin_max", "bins": bins, "n_rows": n})

    def draw(path):
        plotting.map_plot(path, centres / FIG6_R, axis_values, z, r"$\omega / R$", ylabel,
                          r"$S(\omega)$", logz=True)
    return Panel(table, draw)


def fig6_vs_beta(delta_over_r, n_beta=46):
    betas = np.linspace(0.0, math.pi / 2, n_beta)
    params = [SystemParams.from_beta(FIG6_R, b, omega_drive=FIG6_R,
                                     delta_laser=delta_over_r * FIG6_R, gamma12=FIGURE_GAMMA12)
              for b in betas]
    meta = {"figure": "fig6", "big_r": FIG6_R, "omega": FIG6_R,
            "delta": delta_over_r * FIG6_R, "gamma12": FIGURE_GAMMA12}
    return _spectrum_map(params, betas, "beta", meta, r"$\beta$")


def fig6_vs_delta(beta, n_delta=81):
    ratios = np.linspace(-2.0, 2.0, n_delta)
    params = [SystemParams.from_beta(FIG6_R, beta, omega_drive=FIG6_R, delta_laser=k * FIG6_R,
                                     gamma12=FIGURE_GAMMA12) for k in ratios]
    meta = {"figure": "fig6", "big_r": FIG6_R, "omega": FIG6_R, "beta": beta,
            "gamma12": FIGURE_GAMMA12}
    return _spectrum_map(params, ratios, "delta_over_R", meta, r"$\Delta / R$")


# ---------------------------------------------------------------------------
# Fisher information for the separation


FIG7_DELTA_EMIT = 50.0
FIG7_KR12 = 0.17


def fisher_template(kr12=FIG7_KR12):
    return SystemParams.from_distance(kr12, FIG7_DELTA_EMIT, gamma12=FIGURE_GAMMA12,
                                      det_linewidth=1.0)


def fisher_grid(big_r, points_per_gamma=2):
    """Sensor frequencies: +-2.5 R at ``points_per_gamma`` per gamma."""
    return resolution_grid(big_r, 2.5, points_per_gamma)


def fig7a(n_omega=13, n_delta=97, jobs=1):
    from . import plotting

    tmpl = fisher_template()
    r = tmpl.big_r
    omegas_drive = np.geomspace(1.0, 100.0, n_omega)
    deltas = np.linspace(-1.2 * r, 1.2 * r, n_delta)
    fmap = fisher_map(tmpl, ("omega", omegas_drive), ("delta_laser", deltas),
                      fisher_grid(r), jobs=jobs)
    f = fmap.values
    rows = np.column_stack([np.repeat(omegas_drive, n_delta), np.tile(deltas, n_omega), f.ravel()])
    om_best, d_best = fmap.argmax()
    table = Table(("omega", "delta", "fisher"), rows,
                  {"figure": "fig7", "panel": "a", "kr12": tmpl.kr12, "big_r": r,
                   "delta_emit": FIG7_DELTA_EMIT, "det_linewidth": 1.0,
                   "gamma12": tmpl.gamma12, "argmax_omega": om_best, "argmax_delta": d_best})

    def draw(path):
        plotting.map_plot(path, deltas / r, omegas_drive, f, r"$\Delta / R$", r"$\Omega / \gamma$",
                          "F", logy=True, logz=True)
    return Panel(table, draw)


def fig7b(n_omega=13, n_kr=14, jobs=1):
    from . import plotting

    kr = np.linspace(0.12, 0.25, n_kr)
    tmpl = fisher_template()
    omegas_drive = np.geomspace(1.0, 100.0, n_omega)
    r_max = fisher_template(kr.min()).big_r
    fmap = fisher_map(tmpl, ("omega", omegas_drive), ("kr12", kr), fisher_grid(r_max),
                      jobs=jobs)
    f = fmap.values
    o2ps = np.array([two_photon_saturation(fisher_template(k).big_r, 1.0, fisher_template(k).beta)
                     for k in kr])
    rows = np.column_stack([np.repeat(omegas_drive, n_kr), np.tile(kr, n_omega), f.ravel(),
                            np.tile(o2ps, n_omega)])
    table = Table(("omega", "kr12", "fisher", "omega_2ps"), rows,
                  {"figure": "fig7", "panel": "b", "delta": 0.0, "delta_emit": FIG7_DELTA_EMIT,
                   "det_linewidth": 1.0, "gamma12": tmpl.gamma12})

    def draw(path):
        plotting.map_plot(path, kr, omegas_drive, f, r"$k r_{12}$", r"$\Omega / \gamma$", "F",
                          logy=True, logz=True, overlay=(kr, o2ps, r"$\Omega_{2PS}$"))
    return Panel(table, draw)


# ---------------------------------------------------------------------------


FIGURES = {
    "fig3": {p: (lambda p=p, **kw: fig3_line(p)) for p in "acef"}
    | {p: (lambda p=p, **kw: fig3_map(p)) for p in "bd"},
    "fig4": {"a": lambda **kw: fig4a(), "b": lambda **kw: fig4b()},
    "fig5": {
        "a": lambda **kw: fig5_spectrum(BETAS["0"]),
        "b": lambda **kw: fig5_spectrum(BETAS["pi/4"]),
        "c": lambda **kw: fig5_spectrum(BETAS["pi/2"]),
        "d": lambda **kw: fig5_sweep(BETAS["0"]),
        "e": lambda **kw: fig5_sweep(BETAS["pi/4"]),
        "f": lambda **kw: fig5_sweep(BETAS["pi/2"]),
        "g": lambda **kw: fig5_eigenstates(BETAS["0"]),
        "h": lambda **kw: fig5_eigenstates(BETAS["pi/4"]),
        "i": lambda **kw: fig5_eigenstates(BETAS["pi/2"]),
    },
    "fig6": {
        "a": lambda **kw: fig6_vs_beta(-1.0),
        "b": lambda **kw: fig6_vs_beta(0.0),
        "c": lambda **kw: fig6_vs_beta(1.0),
        "d": lambda **kw: fig6_vs_delta(BETAS["0"]),
        "e": lambda **kw: fig6_vs_delta(BETAS["pi/4"]),
        "f": lambda **kw: fig6_vs_delta(BETAS["pi/2"]),
    },
    "fig7": {"a": lambda jobs=1, **kw: fig7a(jobs=jobs),
             "b": lambda jobs=1, **kw: fig7b(jobs=jobs)},
}

DEFAULT_PANELS = {"fig3": "e", "fig4": "a", "fig5": "b", "fig6": "b", "fig7": "b"}


def reproduce(figure, panel=None, jobs=1) -> Panel:
    if figure not in FIGURES:
        raise ConfigError(f"unknown figure {figure!r}; expected one of {sorted(FIGURES)}")
    panel = panel or DEFAULT_PANELS[figure]
    if panel not in FIGURES[figure]:
        raise ConfigError(f"{figure} has no panel {panel!r}; "
                          f"expected one of {sorted(FIGURES[figure])}")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ValidityWarning)
        return FIGURES[figure][panel](jobs=jobs)
