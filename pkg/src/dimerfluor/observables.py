"""Intensity, zero-delay correlation and two-photon visibility of the fluorescence.

The radiated field is taken proportional to sigma_1 + sigma_2, and all
intensities are in units where a single saturated emitter gives 1.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .effective import EffectiveSteadyState, ValidityWarning, combined_steady
from .errors import DomainError, UndefinedCorrelationError
from .lindblad import SIGMA1, SIGMA2, DensityMatrix, dag, steady_state_of
from .params import SystemParams

FIELD = SIGMA1 + SIGMA2
INTENSITY_OP = dag(FIELD) @ FIELD
PAIR_OP = dag(FIELD) @ dag(FIELD) @ FIELD @ FIELD
EE = 3


def intensity_exact(rho: DensityMatrix) -> float:
    value = np.trace(np.asarray(rho) @ INTENSITY_OP)
    return float(value.real)


def intensity_from_elements(rho_ee, rho_ss, rho_aa, rho_sa, beta):
    """Intensity written with collective-basis matrix elements."""
    c, s = math.cos(beta), math.sin(beta)
    return (2 * rho_ee + rho_ss + rho_aa + c * (rho_ss - rho_aa)
            + 2 * s * complex(rho_sa).real)


def intensity_effective(state: EffectiveSteadyState, beta):
    """Return ``(I, I1, I2)``: total, first-order and second-order intensity."""
    i1 = intensity_from_elements(state.rho1_ee, state.rho1_SS, state.rho1_AA,
                                 state.rho1_SA, beta)
    i2 = intensity_from_elements(state.rho2_ee, state.rho2_SS, state.rho2_AA, 0.0, beta)
    return i1 + i2, i1, i2


def g2_zero(rho: DensityMatrix, tol=1e-12) -> float:
    """g2(0) = 4 rho_ee,ee / I^2."""
    intensity = intensity_exact(rho)
    if abs(intensity) <= tol:
        raise UndefinedCorrelationError("g2(0) undefined: emitted intensity vanishes")
    return 4 * float(np.asarray(rho)[EE, EE].real) / intensity**2


def g2_operator(rho: DensityMatrix, tol=1e-12) -> float:
    """g2(0) from the normally ordered four-operator expectation value."""
    r = np.asarray(rho)
    intensity = float(np.trace(r @ INTENSITY_OP).real)
    if abs(intensity) <= tol:
        raise UndefinedCorrelationError("g2(0) undefined: emitted intensity vanishes")
    return float(np.trace(r @ PAIR_OP).real) / intensity**2


def g2_effective(state: EffectiveSteadyState, beta, tol=1e-12) -> float:
    intensity, _, _ = intensity_effective(state, beta)
    if abs(intensity) <= tol:
        raise UndefinedCorrelationError("g2(0) undefined: emitted intensity vanishes")
    return 4 * state.combined_ee / intensity**2


@dataclass(frozen=True)
class EmissionObservables:
    intensity: float
    g2_zero: float
    i_first: float
    i_second: float
    visibility: float
    omega_v: float
    intensity_eff: float = float("nan")
    g2_eff: float = float("nan")


def emission_observables(params: SystemParams) -> EmissionObservables:
    """Exact intensity and g2 together with the effective-model decomposition."""
    rho = steady_state_of(params)
    intensity = intensity_exact(rho)
    try:
        g2 = g2_zero(rho)
    except UndefinedCorrelationError:
        g2 = float("nan")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ValidityWarning)
        state = combined_steady(params)
    i_eff, i1, i2 = intensity_effective(state, params.beta)
    try:
        g2e = g2_effective(state, params.beta)
    except UndefinedCorrelationError:
        g2e = float("nan")
    vis = i2 / i1 if i1 > 0 else float("inf")
    return EmissionObservables(intensity, g2, i1, i2, vis, omega_visibility(params),
                               i_eff, g2e)


def omega_visibility(params: SystemParams):
    """Drive amplitude above which the two-photon contribution dominates at resonance."""
    r, g, beta = params.big_r, params.gamma, params.beta
    return r * math.sqrt(2.0 / (math.tan(beta) ** 2 + 8 * r**2 / g**2))


def two_photon_visibility(params: SystemParams):
    """V2p = I2 / I1 evaluated from the effective models."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ValidityWarning)
        state = combined_steady(params)
    _, i1, i2 = intensity_effective(state, params.beta)
    return i2 / i1 if i1 > 0 else float("inf")


def visibility_crossover(params: SystemParams):
    """Return ``(V2p, omega_v)`` at the two-photon resonance."""
    if params.delta_laser != 0:
        raise DomainError("visibility is defined at the two-photon resonance (delta_laser = 0)")
    if params.beta == 0 and params.gamma12 == params.gamma:
        warnings.warn("beta = 0 with gamma12 = gamma: |A> is perfectly dark and the "
                      "one-photon background is singular", ValidityWarning, stacklevel=2)
    return two_photon_visibility(params), omega_visibility(params)


def solve_visibility_crossing(params: SystemParams, lo=None, hi=None):
    """Numerically locate V2p(Omega) = 1 at Delta = 0 by bracketing in log(Omega)."""
    base = params.replace(delta_laser=0.0)
    lo = lo if lo is not None else 1e-3 * base.gamma
    hi = hi if hi is not None else 0.3 * base.big_r

    def f(log_om):
        return math.log(two_photon_visibility(base.replace(omega_drive=math.exp(log_om))))

    return math.exp(brentq(f, math.log(lo), math.log(hi), xtol=1e-12))


def loglog_slope(x, y):
    """Local slope d log y / d log x on a (possibly non-uniform) grid."""
    return np.gradient(np.log(np.asarray(y)), np.log(np.asarray(x)))
