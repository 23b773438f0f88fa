"""Resonance-fluorescence spectra and the dressed-state picture.

Spectra come from the Liouvillian resolvent,

    S(w; A, B) = (1/pi) Re Tr{ -B (L + i w)^-1 [rho (A - <A>)] },

with a detector linewidth Gamma entering as w -> w + i Gamma. Frequencies are
measured from the laser frequency.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.signal import find_peaks

from .effective import OMEGA_OVER_R_LIMIT, ValidityWarning, two_photon_rabi
from .errors import DomainError, SingularResolventError
from .lindblad import (
    SIGMA1,
    SIGMA2,
    DensityMatrix,
    Liouvillian,
    build_hamiltonian,
    build_liouvillian,
    collective_state,
    dag,
    steady_state,
    trace_row,
    unvec,
    vec,
)
from .params import SystemParams

EIG_COND_LIMIT = 1e10
RESOLVENT_COND_LIMIT = 1e12
_CHUNK = 4096


class Resolvent:
    """Reusable (L + z)^-1 restricted to traceless operators.

    The stationary mode is shifted to eigenvalue -1 (L' = L - |rho><1|), which
    leaves the action on traceless vectors untouched and makes L' + i w
    invertible at w = 0. L' is diagonalized once; if its eigenvector matrix is
    ill-conditioned every evaluation falls back to a dense linear solve.
    """

    def __init__(self, liouvillian: Liouvillian, rho_ss: DensityMatrix, method="auto"):
        if method not in ("auto", "eig", "solve"):
            raise ValueError(f"unknown method {method!r}")
        self.rho = np.asarray(rho_ss)
        mat = liouvillian.matrix
        self.matrix = mat - np.outer(vec(self.rho), trace_row(self.rho.shape[0]))
        self.method = "solve" if method == "solve" else "eig"
        if self.method == "eig":
            lam, v = np.linalg.eig(self.matrix)
            self.eig_cond = np.linalg.cond(v)
            if self.eig_cond > EIG_COND_LIMIT:
                if method == "eig":
                    raise SingularResolventError(float("nan"), self.eig_cond)
                self.method = "solve"
            else:
                self.eigvals = lam
                self.right = v
                self.left = np.linalg.inv(v)

    def source(self, a):
        """vec of rho (A - <A>), the initial condition of the regression."""
        a_mean = np.trace(self.rho @ a)
        return vec(self.rho @ (a - a_mean * np.eye(a.shape[0])))

    def spectrum(self, a, b, omegas, det_linewidth=0.0):
        omegas = np.atleast_1d(np.asarray(omegas, dtype=float))
        z = 1j * (omegas + 1j * det_linewidth)
        x = self.source(a)
        bt = vec(b.T)  # Tr[B X] = vec(B^T) . vec(X)
        if self.method == "eig":
            weights = (bt @ self.right) * (self.left @ x)
            denom = self.eigvals[None, :] + z[:, None]
            mags = np.abs(denom)
            ratio = mags.max(axis=1) / mags.min(axis=1) * self.eig_cond
            bad = np.flatnonzero(~(ratio < RESOLVENT_COND_LIMIT))
            if bad.size:
                raise SingularResolventError(float(omegas[bad[0]]), float(ratio[bad[0]]))
            trace_val = (weights[None, :] / denom).sum(axis=1)
        else:
            trace_val = np.empty(omegas.shape, dtype=complex)
            eye = np.eye(self.matrix.shape[0])
            for start in range(0, omegas.size, _CHUNK):
                zs = z[start:start + _CHUNK]
                mats = self.matrix[None, :, :] + zs[:, None, None] * eye
                conds = np.linalg.cond(mats)
                bad = np.flatnonzero(~(conds < RESOLVENT_COND_LIMIT))
                if bad.size:
                    k = start + bad[0]
                    raise SingularResolventError(float(omegas[k]), float(conds[bad[0]]))
                sol = np.linalg.solve(mats, np.broadcast_to(x, (zs.size, x.size))[..., None])
                trace_val[start:start + _CHUNK] = sol[..., 0] @ bt
        return -trace_val.real / math.pi


def spectral_function(liouvillian: Liouvillian, rho_ss: DensityMatrix, a, b, omegas,
                      det_linewidth=0.0, method="auto"):
    """S(w; A, B) on a frequency grid."""
    if det_linewidth < 0:
        raise DomainError("detector linewidth must be non-negative")
    return Resolvent(liouvillian, rho_ss, method).spectrum(a, b, omegas, det_linewidth)


@dataclass(frozen=True)
class SpectralSeries:
    omegas: np.ndarray
    total: np.ndarray
    s1: np.ndarray
    s2: np.ndarray
    s12: np.ndarray
    s21: np.ndarray
    det_linewidth: float = 0.0

    COLUMNS = ("omega", "total", "s1", "s2", "s12", "s21")

    def columns(self):
        return np.column_stack([self.omegas, self.total, self.s1, self.s2, self.s12, self.s21])

    def component(self, name):
        return {"total": self.total, "s1": self.s1, "s2": self.s2,
                "s12": self.s12, "s21": self.s21}[name]


def default_grid(big_r, n=4001, span=2.5):
    return np.linspace(-span * big_r, span * big_r, n)


def resolution_grid(big_r, span=5.0, points_per_gamma=5, gamma=1.0):
    """Symmetric grid over [-span R, span R] with at least ``points_per_gamma`` per gamma."""
    n = int(math.ceil(2 * span * big_r / gamma * points_per_gamma)) + 1
    if n % 2 == 0:
        n += 1
    return np.linspace(-span * big_r, span * big_r, n)


def rf_spectrum(params: SystemParams, omegas, components=True, method="auto") -> SpectralSeries:
    """Total fluorescence spectrum and its emitter/interference decomposition."""
    omegas = np.asarray(omegas, dtype=float)
    liou = build_liouvillian(params)
    rho = steady_state(liou)
    res = Resolvent(liou, rho, method)
    gam = params.det_linewidth
    up1, up2 = dag(SIGMA1), dag(SIGMA2)
    total = res.spectrum(up1 + up2, SIGMA1 + SIGMA2, omegas, gam)
    if not components:
        nan = np.full_like(total, np.nan)
        return SpectralSeries(omegas, total, nan, nan, nan, nan, gam)
    return SpectralSeries(
        omegas,
        total,
        res.spectrum(up1, SIGMA1, omegas, gam),
        res.spectrum(up2, SIGMA2, omegas, gam),
        res.spectrum(up1, SIGMA2, omegas, gam),
        res.spectrum(up2, SIGMA1, omegas, gam),
        gam,
    )


def total_spectrum(params: SystemParams, omegas):
    return rf_spectrum(params, omegas, components=False).total


# ---------------------------------------------------------------------------
# dressed states


DRESSED_LABELS = ("S", "A2", "S2", "A")


def dressed_basis(beta):
    """Columns are |S>, |A2>, |S2>, |A> in the bare basis."""
    gg = np.array([1, 0, 0, 0], dtype=complex)
    ee = np.array([0, 0, 0, 1], dtype=complex)
    s2 = (gg + ee) / math.sqrt(2)
    a2 = (gg - ee) / math.sqrt(2)
    return np.column_stack([collective_state("S", beta), a2, s2, collective_state("A", beta)])


@dataclass(frozen=True)
class DressedLadder:
    energies: tuple
    states: np.ndarray
    transitions: dict
    omega_2ps: float

    def as_dict(self):
        return {
            "energies": {f"E{i + 1}": e for i, e in enumerate(self.energies)},
            "states": list(DRESSED_LABELS),
            "transitions": {k: {"omega": v[0], "origin": v[1]} for k, v in self.transitions.items()},
            "omega_2ps": self.omega_2ps,
        }


TRANSITION_PAIRS = {
    "w1": (1, 4), "w2": (1, 3), "w3": (1, 2), "w4": (2, 4), "w5": (3, 4), "w6": (2, 3),
}


def two_photon_saturation(big_r, gamma, beta):
    """Drive at which the two-photon doublet splitting reaches gamma."""
    c = math.cos(beta)
    if c <= 1e-15:
        warnings.warn("beta = pi/2: no two-photon coupling, the saturation amplitude is infinite",
                      ValidityWarning, stacklevel=2)
        return math.inf
    return 0.5 * math.sqrt(big_r * gamma / c)


def dressed_ladder(params: SystemParams) -> DressedLadder:
    """Perturbative two-photon dressed levels and the sideband frequencies."""
    if params.delta_laser != 0:
        raise DomainError("the dressed ladder is derived at the two-photon resonance")
    r, om, beta = params.big_r, params.omega_drive, params.beta
    if om > OMEGA_OVER_R_LIMIT * r:
        warnings.warn(f"Omega/R = {om / r:.3g}: perturbative ladder is unreliable",
                      ValidityWarning, stacklevel=2)
    c = math.cos(beta)
    energies = (
        r + 2 * (1 + c) * om**2 / r,
        0.0,
        -4 * om**2 * c / r,
        -r - 2 * (1 - c) * om**2 / r,
    )
    transitions = {"w0": (0.0, "i->i")}
    for name, (i, j) in TRANSITION_PAIRS.items():
        transitions[name] = (energies[i - 1] - energies[j - 1], f"{i}->{j}")
    return DressedLadder(energies, np.eye(4), transitions,
                         two_photon_saturation(r, params.gamma, beta))


def perturbative_transitions(big_r, omega, beta):
    """Closed-form positive sideband frequencies w1..w6."""
    c = math.cos(beta)
    q = omega**2 / big_r
    return {
        "w1": 2 * big_r + 4 * q,
        "w2": big_r + 2 * q * (3 * c + 1),
        "w3": big_r + 2 * q * (c + 1),
        "w4": big_r - 2 * q * (c - 1),
        "w5": big_r - 2 * q * (3 * c - 1),
        "w6": 4 * q * c,
    }


def fix_phase(vectors):
    """Make the largest-magnitude component of each column real and positive."""
    out = np.array(vectors, dtype=complex)
    for k in range(out.shape[1]):
        col = out[:, k]
        idx = np.argmax(np.abs(col) - 1e-12 * np.arange(col.size))
        out[:, k] = col * (abs(col[idx]) / col[idx])
    return out


def strong_driving_eigensystem(params: SystemParams):
    """Eigen-decomposition of the driven Hamiltonian in the dressed basis.

    Returns ``(energies, states)`` with energies in decreasing order and the
    eigenvectors as columns over (|S>, |A2>, |S2>, |A>).
    """
    if params.delta_laser != 0:
        raise DomainError("strong-driving eigensystem is defined at delta_laser = 0")
    basis = dressed_basis(params.beta)
    h = dag(basis) @ build_hamiltonian(params) @ basis
    h = (h + dag(h)) / 2
    e, v = np.linalg.eigh(h)
    order = np.argsort(e)[::-1]
    return e[order], fix_phase(v[:, order])


def closed_form_strong_driving(big_r, omega, beta):
    """Closed-form eigenpairs for beta = 0 or pi/2, labelled U1..U4.

    Returns ``(energies, states)``; states are normalized columns over the
    dressed basis. For beta = pi/2 the pair U2, U3 is degenerate.
    """
    r, om = big_r, omega
    if abs(beta) < 1e-12:
        root = math.sqrt(r**2 + 16 * om**2)
        energies = np.array([(r + root) / 2, 0.0, -r, (r - root) / 2])
        states = np.array([
            [(r + root) / (4 * om), 0, 1, 0],
            [0, 1, 0, 0],
            [0, 0, 0, 1],
            [(r - root) / (4 * om), 0, 1, 0],
        ], dtype=complex).T
    elif abs(beta - math.pi / 2) < 1e-12:
        root = math.sqrt(r**2 + 4 * om**2)
        cp = (r + root) / (2 * math.sqrt(2) * om)
        cm = (r - root) / (2 * math.sqrt(2) * om)
        energies = np.array([root, 0.0, 0.0, -root])
        k = math.sqrt(2) * om / r
        states = np.array([
            [cp, 0, 1, 1 / (2 * cp)],
            [0, 1, 0, 0],
            [-k, 0, 1, k],
            [cm, 0, 1, 1 / (2 * cm)],
        ], dtype=complex).T
    else:
        raise DomainError("closed forms exist only for beta = 0 and beta = pi/2")
    states = states / np.linalg.norm(states, axis=0)
    return energies, fix_phase(states)


# ---------------------------------------------------------------------------
# peak detection


class Peak(NamedTuple):
    omega: float
    height: float


def parabolic_vertex(y, i):
    """Vertex offset (in samples) and height of the parabola through y[i-1:i+2]."""
    a, b, c = y[i - 1], y[i], y[i + 1]
    curv = a - 2 * b + c
    if curv == 0:
        return 0.0, b
    off = 0.5 * (a - c) / curv
    return off, b - 0.25 * (a - c) * off


def detect_peaks(series, prominence=1e-3, component="total", omegas=None, gamma=1.0):
    """Local maxima with prominence above ``prominence * max``, refined to sub-grid.

    ``series`` is a :class:`SpectralSeries` or a bare array (then ``omegas``
    is required).
    """
    if isinstance(series, SpectralSeries):
        y = np.asarray(series.component(component), dtype=float)
        omegas = series.omegas
    else:
        y = np.asarray(series, dtype=float)
        if omegas is None:
            raise ValueError("omegas are required for a bare array")
    omegas = np.asarray(omegas, dtype=float)
    if y.size == 0:
        raise ValueError("empty series")
    if y.size > 1:
        spacing = float(np.median(np.diff(omegas)))
        if spacing > gamma / 5:
            warnings.warn(f"grid spacing {spacing:.3g} is coarser than gamma/5; "
                          "narrow peaks may be missed", RuntimeWarning, stacklevel=2)
    else:
        spacing = 0.0
    top = y.max()
    if not top > 0:
        return []
    idx, _ = find_peaks(y, prominence=prominence * top)
    peaks = []
    for i in idx:
        off, height = parabolic_vertex(y, i)
        peaks.append(Peak(float(omegas[i] + off * spacing), float(height)))
    return peaks
