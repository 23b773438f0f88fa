"""Closed-form steady states from the two effective models.

The two-photon cascade model (gg <-> ee driven at second order, decay through
the one-excitation manifold) and the one-photon Vee model (gg <-> S, A driven
directly) are solved separately and their excited-state matrix elements are
added. All expressions assume R is the largest scale in the problem.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateGeometryError
from .lindblad import dissipator, spost, spre, unvec
from .params import SystemParams

#: above these ratios the perturbative closed forms are not trustworthy
OMEGA_OVER_R_LIMIT = 0.3
GAMMA_OVER_R_LIMIT = 0.1


class ValidityWarning(UserWarning):
    """Parameters lie outside the regime where the closed forms hold."""


def _check_regime(params: SystemParams):
    r = params.big_r
    if r == 0:
        raise DegenerateGeometryError("effective models need R > 0")
    if params.omega_drive > OMEGA_OVER_R_LIMIT * r:
        warnings.warn(f"Omega/R = {params.omega_drive / r:.3g} > {OMEGA_OVER_R_LIMIT}; "
                      "perturbative closed forms are unreliable", ValidityWarning, stacklevel=3)
    if params.gamma > GAMMA_OVER_R_LIMIT * r:
        warnings.warn(f"gamma/R = {params.gamma / r:.3g} > {GAMMA_OVER_R_LIMIT}; "
                      "doublet not well resolved", ValidityWarning, stacklevel=3)


def two_photon_rabi(omega, big_r, beta):
    """Effective gg <-> ee coupling, -2 Omega^2 cos(beta) / R."""
    if big_r == 0:
        raise DegenerateGeometryError("two-photon coupling undefined for R = 0")
    return -2.0 * omega**2 * math.cos(beta) / big_r


@dataclass(frozen=True)
class EffectiveRates:
    omega_2p: float
    lamb: float
    omega_S: float
    omega_A: float
    gamma_S: float
    gamma_A: float
    gamma_C: float


def effective_rates(params: SystemParams) -> EffectiveRates:
    r, beta, om = params.big_r, params.beta, params.omega_drive
    c, s = math.cos(beta), math.sin(beta)
    o2p = two_photon_rabi(om, r, beta)
    return EffectiveRates(
        omega_2p=o2p,
        lamb=o2p,  # gg and ee acquire the same shift
        omega_S=om * math.sqrt(1 + c),
        omega_A=om * math.sqrt(max(1 - c, 0.0)),
        gamma_S=params.gamma + params.gamma12 * c,
        gamma_A=params.gamma - params.gamma12 * c,
        gamma_C=params.gamma12 * s,
    )


def model2p_steady(params: SystemParams):
    """Second-order populations ``(rho_ee, rho_SS, rho_AA)``; all three are equal."""
    _check_regime(params)
    om, r, g, d = params.omega_drive, params.big_r, params.gamma, params.delta_laser
    c2 = math.cos(params.beta) ** 2
    num = 4 * om**4 * c2
    den = 16 * om**4 * c2 + r**2 * g**2 + 4 * r**2 * d**2
    ee = num / den if den > 0 else 0.0
    return ee, ee, ee


def _two_level_population(drive_sq, gamma_i, detuning):
    # drive_sq = Omega_i^2 ; steady excited population of a driven TLS
    num = 4 * drive_sq
    den = gamma_i**2 + 4 * detuning**2 + 8 * drive_sq
    return num / den if den > 0 else 0.0


def coherence_sa(params: SystemParams):
    """First-order S-A coherence from the Vee model.

    The closed form is exact for gamma12 = gamma; it only involves the local
    decay rate.
    """
    om, r, g, d = params.omega_drive, params.big_r, params.gamma, params.delta_laser
    beta = params.beta
    num = 2 * om**2 * math.sin(beta) * (d**2 - r**2 - 2 * om**2)
    den = (2 * (g**2 * d**2 + (d**2 + 2 * om**2) ** 2)
           + g**2 * r**2 * math.cos(2 * beta)
           + r**2 * (g**2 - 4 * d**2 + 8 * om**2)
           + 2 * r**4
           - 4 * d * r * math.cos(beta) * (g**2 + 4 * om**2))
    return complex(num / den)


def model1p_steady(params: SystemParams):
    """First-order terms ``(rho_SS, rho_AA, rho_SA, rho_ee)``.

    Populations use the two-level reduction of each Vee arm; ``rho_ee`` is the
    factorized estimate rho_SS * rho_AA.
    """
    _check_regime(params)
    rates = effective_rates(params)
    d, r = params.delta_laser, params.big_r
    ss = _two_level_population(rates.omega_S**2, rates.gamma_S, d + r)
    aa = _two_level_population(rates.omega_A**2, rates.gamma_A, d - r)
    return ss, aa, coherence_sa(params), ss * aa


@dataclass(frozen=True)
class EffectiveSteadyState:
    rho2_ee: float
    rho2_SS: float
    rho2_AA: float
    rho1_SS: float
    rho1_AA: float
    rho1_SA: complex
    rho1_ee: float

    @property
    def combined_ee(self):
        return self.rho1_ee + self.rho2_ee

    @property
    def combined_SS(self):
        return self.rho1_SS + self.rho2_SS

    @property
    def combined_AA(self):
        return self.rho1_AA + self.rho2_AA

    @property
    def combined_SA(self):
        return self.rho1_SA


def combined_steady(params: SystemParams) -> EffectiveSteadyState:
    with warnings.catch_warnings():
        # one warning per call is enough
        warnings.simplefilter("ignore", ValidityWarning)
        ee2, ss2, aa2 = model2p_steady(params)
        ss1, aa1, sa1, ee1 = model1p_steady(params)
    _check_regime(params)
    return EffectiveSteadyState(ee2, ss2, aa2, ss1, aa1, sa1, ee1)


# ---------------------------------------------------------------------------
# numerical reference solvers for the two reduced models


def _solve_null(mat):
    _, _, vh = np.linalg.svd(mat)
    rho = unvec(vh[-1].conj())
    return rho / np.trace(rho)


def vee_steady_numeric(params: SystemParams):
    """Steady state of the three-level Vee model, basis ``(gg, A, S)``."""
    rates = effective_rates(params)
    d, r = params.delta_laser, params.big_r
    e = np.eye(3)
    proj = lambda i, j: np.outer(e[i], e[j]).astype(complex)  # noqa: E731
    h = ((d + r) * proj(2, 2) + (d - r) * proj(1, 1)
         + rates.omega_A * (proj(1, 0) + proj(0, 1))
         + rates.omega_S * (proj(2, 0) + proj(0, 2)))
    lower = (proj(0, 1), proj(0, 2))  # |g><A|, |g><S|
    rate_mat = [[rates.gamma_A, rates.gamma_C], [rates.gamma_C, rates.gamma_S]]
    mat = -1j * (spre(h) - spost(h))
    for i in range(2):
        for j in range(2):
            mat = mat + 0.5 * rate_mat[i][j] * dissipator(lower[i], lower[j])
    return _solve_null(mat)


def cascade_steady_numeric(params: SystemParams):
    """Steady state of the cascade model, basis ``(gg, ee, 1)``."""
    o2p = two_photon_rabi(params.omega_drive, params.big_r, params.beta)
    d, g = params.delta_laser, params.gamma
    e = np.eye(3)
    proj = lambda i, j: np.outer(e[i], e[j]).astype(complex)  # noqa: E731
    h = (2 * d + o2p) * proj(1, 1) + o2p * proj(0, 0) + o2p * (proj(1, 0) + proj(0, 1))
    mat = -1j * (spre(h) - spost(h))
    mat = mat + (2 * g / 2) * dissipator(proj(2, 1), proj(2, 1))
    mat = mat + (g / 2) * dissipator(proj(0, 2), proj(0, 2))
    return _solve_null(mat)
