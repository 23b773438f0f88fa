"""Physical parameters of the driven emitter pair and the dipole-dipole geometry.

All rates are expressed in units of the local decay rate, so ``gamma`` is 1
unless a caller deliberately chooses otherwise. The single-excitation
doublet is parametrized either by (J, delta) or by (R, beta) with
J = R cos(beta), delta = R sin(beta).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Mapping

from .errors import ConfigError, DegenerateGeometryError, DomainError

GEOMETRY_MODES = ("exact", "nearfield")

#: collective decay used for every figure; 1.0 would make |A> perfectly dark at beta=0
FIGURE_GAMMA12 = 0.999


def coupling_from_distance(kr12, gamma1=1.0, gamma2=1.0, mu_dot_r=0.0, mode="nearfield"):
    """Coherent and dissipative dipole-dipole rates for separation ``kr12``.

    ``mode="exact"`` evaluates the full retarded expressions, ``"nearfield"``
    their kr12 -> 0 limits. Returns ``(J, gamma12)``.
    """
    if mode not in GEOMETRY_MODES:
        raise ConfigError(f"unknown geometry mode {mode!r}; expected one of {GEOMETRY_MODES}")
    if not kr12 > 0:
        raise DomainError(f"kr12 must be positive, got {kr12!r}")
    if gamma1 <= 0 or gamma2 <= 0:
        raise DomainError("local decay rates must be positive")
    if abs(mu_dot_r) > 1:
        raise DomainError(f"|mu_dot_r| must be <= 1, got {mu_dot_r!r}")

    g = math.sqrt(gamma1 * gamma2)
    transverse = 1.0 - mu_dot_r**2
    longitudinal = 1.0 - 3.0 * mu_dot_r**2
    x = kr12
    if mode == "nearfield":
        return 0.75 * g * longitudinal / x**3, g

    s, c = math.sin(x), math.cos(x)
    j = 0.75 * g * (-transverse * c / x + longitudinal * (s / x**2 + c / x**3))
    g12 = 1.5 * g * (transverse * s / x + longitudinal * (c / x**2 - s / x**3))
    return j, g12


def mixing_angle(delta_emit, j_coupling):
    """beta = arctan(delta/J), in [0, pi/2] for non-negative arguments."""
    if delta_emit == 0 and j_coupling == 0:
        raise DegenerateGeometryError("mixing angle undefined for delta = J = 0")
    return math.atan2(delta_emit, j_coupling)


def rabi_splitting(delta_emit, j_coupling):
    return math.hypot(j_coupling, delta_emit)


def params_from_beta(big_r, beta):
    """Inverse of the (R, beta) parametrization: returns ``(J, delta)``."""
    if not big_r > 0:
        raise DomainError(f"R must be positive, got {big_r!r}")
    if not -1e-12 <= beta <= math.pi / 2 + 1e-12:
        raise DomainError(f"beta must lie in [0, pi/2], got {beta!r}")
    return big_r * math.cos(beta), big_r * math.sin(beta)


@dataclass(frozen=True)
class SystemParams:
    """Immutable parameter set for the driven dimer.

    ``big_r`` and ``beta`` are derived from ``j_coupling`` and ``delta_emit``.
    ``kr12`` is only bookkeeping: it records which distance produced ``j_coupling``
    (see :meth:`from_distance`) and is what the estimation module perturbs.
    """

    delta_laser: float = 0.0
    delta_emit: float = 0.0
    omega_drive: float = 0.0
    j_coupling: float = 0.0
    gamma: float = 1.0
    gamma12: float = FIGURE_GAMMA12
    kr12: float | None = None
    mu_dot_r: float = 0.0
    det_linewidth: float = 0.0
    geometry_mode: str = "nearfield"

    def __post_init__(self):
        for name in ("delta_laser", "delta_emit", "omega_drive", "j_coupling",
                     "gamma", "gamma12", "mu_dot_r", "det_linewidth"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise DomainError(f"{name} must be finite, got {value!r}")
        if not self.gamma > 0:
            raise DomainError(f"gamma must be positive, got {self.gamma!r}")
        if abs(self.gamma12) > self.gamma * (1 + 1e-12):
            raise DomainError(f"|gamma12| = {abs(self.gamma12)} exceeds gamma = {self.gamma}")
        if abs(self.mu_dot_r) > 1:
            raise DomainError("|mu_dot_r| must be <= 1")
        if self.det_linewidth < 0:
            raise DomainError("detector linewidth must be non-negative")
        if self.geometry_mode not in GEOMETRY_MODES:
            raise ConfigError(f"unknown geometry mode {self.geometry_mode!r}")
        if self.kr12 is not None and not self.kr12 > 0:
            raise DomainError(f"kr12 must be positive, got {self.kr12!r}")

    @property
    def big_r(self):
        return rabi_splitting(self.delta_emit, self.j_coupling)

    @property
    def beta(self):
        return mixing_angle(self.delta_emit, self.j_coupling)

    @classmethod
    def from_beta(cls, big_r, beta, **kwargs):
        j, d = params_from_beta(big_r, beta)
        return cls(j_coupling=j, delta_emit=d, **kwargs)

    @classmethod
    def from_distance(cls, kr12, delta_emit, *, geometry_mode="nearfield", mu_dot_r=0.0,
                      gamma=1.0, **kwargs):
        """Build parameters whose J follows from the emitter separation.

        gamma12 is not tied to the distance unless passed explicitly as
        ``gamma12=None``, in which case the geometric value is used.
        """
        j, g12 = coupling_from_distance(kr12, gamma, gamma, mu_dot_r, geometry_mode)
        if "gamma12" in kwargs and kwargs["gamma12"] is None:
            kwargs["gamma12"] = g12
        return cls(j_coupling=j, delta_emit=delta_emit, kr12=kr12, mu_dot_r=mu_dot_r,
                   geometry_mode=geometry_mode, gamma=gamma, **kwargs)

    def with_distance(self, kr12):
        """Copy with J recomputed at a new separation; everything else is kept."""
        j, _ = coupling_from_distance(kr12, self.gamma, self.gamma, self.mu_dot_r,
                                      self.geometry_mode)
        return replace(self, j_coupling=j, kr12=kr12)

    def replace(self, **changes):
        return replace(self, **changes)


# ---------------------------------------------------------------------------
# text configuration: key=value pairs


CONFIG_KEYS = (
    "gamma", "gamma12", "delta_emit", "j_coupling", "kr12", "big_r", "beta",
    "omega", "delta_laser", "det_linewidth", "geometry_mode", "mu_dot_r",
)
_RATE_KEYS = ("gamma12", "delta_emit", "j_coupling", "big_r", "omega", "delta_laser",
              "det_linewidth")


def parse_config_text(text):
    """Parse ``key = value`` lines (``#`` starts a comment) into a dict of strings."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in CONFIG_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in out:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        out[key] = value
    return out


def read_config(path):
    with open(path, encoding="utf-8") as fh:
        return parse_config_text(fh.read())


def parse_rate(value, big_r=None):
    """Parse a rate like ``"2.5"`` or ``"0.1R"`` (multiple of the splitting R)."""
    if isinstance(value, (int, float)):
        return float(value)
    text = str(value).strip()
    try:
        if text.endswith(("R", "r")):
            if big_r is None:
                raise ConfigError(f"{text!r} is given in units of R but R is not known")
            body = text[:-1].strip()
            return (float(body) if body not in ("", "+") else 1.0) * big_r
        return float(text)
    except ValueError:
        raise ConfigError(f"cannot parse rate {value!r}") from None


def _as_float(mapping, key):
    try:
        return float(mapping[key])
    except ValueError:
        raise ConfigError(f"{key}: cannot parse {mapping[key]!r} as a number") from None


def params_from_mapping(mapping: Mapping[str, object], default_geometry=None):
    """Build :class:`SystemParams` from config/flag values.

    Exactly one geometry triple may be supplied: ``(j_coupling, delta_emit)``,
    ``(kr12, delta_emit)`` or ``(big_r, beta)``. Rates are divided by ``gamma``
    so that the returned parameters are in units of gamma. ``default_geometry``
    is a mapping used only when no triple is given at all.
    """
    m = {k: v for k, v in mapping.items() if v is not None}
    unknown = set(m) - set(CONFIG_KEYS)
    if unknown:
        raise ConfigError(f"unknown parameter(s): {sorted(unknown)}")

    triples = [name for name, keys in (("J", ("j_coupling",)), ("kr12", ("kr12",)),
                                       ("R-beta", ("beta", "big_r")))
               if any(k in m for k in keys)]
    if len(triples) > 1:
        raise ConfigError(f"conflicting geometry specifications: {', '.join(triples)}")
    if not triples:
        if default_geometry is None:
            raise ConfigError("no geometry given: supply (j_coupling, delta_emit), "
                              "(kr12, delta_emit) or (big_r, beta)")
        m = {**default_geometry, **m}
        return params_from_mapping(m)

    gamma = _as_float(m, "gamma") if "gamma" in m else 1.0
    if not gamma > 0:
        raise ConfigError("gamma must be positive")
    mode = str(m.get("geometry_mode", "nearfield"))
    mu_dot_r = _as_float(m, "mu_dot_r") if "mu_dot_r" in m else 0.0

    kind = triples[0]
    kr12 = None
    if kind == "R-beta":
        if "delta_emit" in m:
            raise ConfigError("delta_emit conflicts with (big_r, beta)")
        if "beta" not in m or "big_r" not in m:
            raise ConfigError("the (big_r, beta) triple needs both values")
        big_r = parse_rate(m["big_r"]) / gamma
        j, delta = params_from_beta(big_r, _as_float(m, "beta"))
    else:
        if "delta_emit" not in m:
            raise ConfigError(f"the {kind} triple needs delta_emit")
        if kind == "J":
            j = parse_rate(m["j_coupling"]) / gamma
            delta = parse_rate(m["delta_emit"]) / gamma
        else:
            kr12 = _as_float(m, "kr12")
            delta = parse_rate(m["delta_emit"]) / gamma
            try:
                j, _ = coupling_from_distance(kr12, 1.0, 1.0, mu_dot_r, mode)
            except DomainError as exc:
                raise ConfigError(str(exc)) from None
        big_r = rabi_splitting(delta, j)

    def rate(key, default=0.0):
        if key not in m:
            return default
        value = str(m[key]).strip()
        if value.endswith(("R", "r")):
            return parse_rate(value, big_r)
        return parse_rate(value) / gamma

    try:
        return SystemParams(
            delta_laser=rate("delta_laser"),
            delta_emit=delta,
            omega_drive=rate("omega"),
            j_coupling=j,
            gamma=1.0,
            gamma12=rate("gamma12", FIGURE_GAMMA12),
            kr12=kr12,
            mu_dot_r=mu_dot_r,
            det_linewidth=rate("det_linewidth"),
            geometry_mode=mode,
        )
    except DomainError as exc:
        raise ConfigError(str(exc)) from None
