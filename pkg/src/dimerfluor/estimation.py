"""Fisher information of spectral photon counting for the emitter separation.

Each frequency is read by an independent sensor whose counts are Poissonian
with mean eta * S(w; kr12). For uncorrelated sensors the information adds:

    F = eta * sum_w (dS/dkr12)^2 / S

and the Cramer-Rao bound on the variance of any unbiased estimate is 1/F.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from functools import partial

import numpy as np
from scipy.special import gammaln
from scipy.stats import poisson

from .errors import DomainError, NoSignalError, StepSizeError
from .params import SystemParams
from .spectrum import total_spectrum

DEFAULT_REL_STEP = 1e-4
RICHARDSON_TOL = 0.05
FLOOR_REL = 1e-12
MAP_AXES = ("omega", "delta_laser", "kr12")


def poisson_count_prob(mean, n):
    """P(n | mean) = mean^n exp(-mean) / n!."""
    if np.any(np.asarray(mean) < 0):
        raise DomainError("Poisson mean must be non-negative")
    return poisson.pmf(n, mean)


def poisson_fisher_by_summation(mean, dmean, n_max=200):
    """E[(d log P / dX)^2] by explicit summation over counts 0..n_max.

    Independent of the closed form dmean^2 / mean; used as a cross-check.
    """
    n = np.arange(n_max + 1)
    log_p = n * math.log(mean) - mean - gammaln(n + 1)
    score = (n / mean - 1.0) * dmean
    return float(np.sum(np.exp(log_p) * score**2))


def _require_distance(params: SystemParams, kr12):
    kr12 = params.kr12 if kr12 is None else kr12
    if kr12 is None:
        raise DomainError("the emitter separation kr12 is not set")
    return kr12


def spectrum_sensitivity(params: SystemParams, kr12=None, omegas=None, step=None,
                         check=True):
    """Central-difference dS/dkr12 on ``omegas``.

    J (and with it R and beta) is recomputed from the distance at every
    perturbed point; all other parameters, gamma12 included, are held fixed.
    With ``check`` the result is compared with one Richardson level built from
    step 2h; a relative disagreement above 5% raises :class:`StepSizeError`.
    """
    kr12 = _require_distance(params, kr12)
    h = DEFAULT_REL_STEP * kr12 if step is None else step
    if not h > 0:
        raise DomainError("finite-difference step must be positive")
    if kr12 - (2 if check else 1) * h <= 0:
        raise DomainError("finite-difference stencil leaves kr12 > 0")

    def spec(x):
        return total_spectrum(params.with_distance(x), omegas)

    d1 = (spec(kr12 + h) - spec(kr12 - h)) / (2 * h)
    if not check:
        return d1
    d2 = (spec(kr12 + 2 * h) - spec(kr12 - 2 * h)) / (4 * h)
    extrap = (4 * d1 - d2) / 3
    scale = np.linalg.norm(extrap)
    if scale > 0 and np.linalg.norm(d1 - extrap) > RICHARDSON_TOL * scale:
        raise StepSizeError(
            f"finite difference not converged at step {h:g} "
            f"(Richardson disagreement {np.linalg.norm(d1 - extrap) / scale:.2%}); "
            "try a smaller step")
    return d1


@dataclass(frozen=True)
class FisherReport:
    fisher: float
    crlb: float
    kr12: float
    delta_laser: float
    omega_drive: float
    omega_min: float
    omega_max: float
    n_points: int
    n_points_used: int
    fd_step: float
    eta: float = 1.0

    @property
    def n_excluded(self):
        return self.n_points - self.n_points_used

    def as_dict(self):
        out = asdict(self)
        out["n_excluded"] = self.n_excluded
        return out


def fisher_from_spectrum(spec, dspec, eta=1.0, floor_rel=FLOOR_REL):
    """Return ``(F, mask)`` for Poisson sensors with mean ``eta * spec``."""
    spec = np.asarray(spec, dtype=float)
    top = spec.max() if spec.size else 0.0
    if not top > 0:
        raise NoSignalError("spectrum is nowhere positive")
    mask = spec > floor_rel * top
    if not mask.any():
        raise NoSignalError("all grid points fall below the spectrum floor")
    f = eta * float(np.sum(np.asarray(dspec)[mask] ** 2 / spec[mask]))
    return f, mask


def fisher_information(params: SystemParams, kr12=None, omegas=None, eta=1.0,
                       step=None, check=True) -> FisherReport:
    kr12 = _require_distance(params, kr12)
    if omegas is None:
        raise ValueError("a frequency grid is required")
    omegas = np.asarray(omegas, dtype=float)
    if not params.det_linewidth > 0:
        raise DomainError("Fisher information needs a finite detector linewidth")
    h = DEFAULT_REL_STEP * kr12 if step is None else step
    centre = params.with_distance(kr12)
    spec = total_spectrum(centre, omegas)
    dspec = spectrum_sensitivity(centre, kr12, omegas, h, check=check)
    f, mask = fisher_from_spectrum(spec, dspec, eta)
    return FisherReport(
        fisher=f,
        crlb=1.0 / f if f > 0 else math.inf,
        kr12=kr12,
        delta_laser=params.delta_laser,
        omega_drive=params.omega_drive,
        omega_min=float(omegas.min()),
        omega_max=float(omegas.max()),
        n_points=int(omegas.size),
        n_points_used=int(mask.sum()),
        fd_step=h,
        eta=eta,
    )


def _apply_axis(params: SystemParams, name, value):
    if name == "omega":
        return params.replace(omega_drive=value)
    if name == "delta_laser":
        return params.replace(delta_laser=value)
    if name == "kr12":
        return params.with_distance(value)
    raise ValueError(f"unknown map axis {name!r}; expected one of {MAP_AXES}")


def _map_cell(template, name1, name2, omegas, eta, check, cell):
    v1, v2 = cell
    p = _apply_axis(_apply_axis(template, name1, v1), name2, v2)
    return fisher_information(p, p.kr12, omegas, eta=eta, check=check)


@dataclass(frozen=True)
class FisherMap:
    axis1: tuple
    axis2: tuple
    reports: list

    @property
    def values(self):
        n1, n2 = len(self.axis1[1]), len(self.axis2[1])
        return np.array([r.fisher for r in self.reports]).reshape(n1, n2)

    def argmax(self):
        i, j = np.unravel_index(np.argmax(self.values), self.values.shape)
        return self.axis1[1][i], self.axis2[1][j]


def fisher_map(template: SystemParams, axis1, axis2, omegas, eta=1.0, jobs=1, check=True):
    """F over a 2-D grid of (``name``, values) axes; rows follow ``axis1``.

    Cells are independent and are evaluated in a process pool when
    ``jobs > 1``; results are always returned in grid order.
    """
    name1, vals1 = axis1
    name2, vals2 = axis2
    for name in (name1, name2):
        if name not in MAP_AXES:
            raise ValueError(f"unknown map axis {name!r}; expected one of {MAP_AXES}")
    vals1 = [float(v) for v in vals1]
    vals2 = [float(v) for v in vals2]
    if not vals1 or not vals2:
        raise ValueError("map axes must be non-empty")
    cells = [(a, b) for a in vals1 for b in vals2]
    worker = partial(_map_cell, template, name1, name2, np.asarray(omegas, dtype=float), eta,
                     check)
    if jobs > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(worker, cells, chunksize=max(1, len(cells) // (4 * jobs))))
    else:
        reports = [worker(c) for c in cells]
    return FisherMap((name1, vals1), (name2, vals2), reports)
