"""Exact Hamiltonian, Liouvillian and steady state of the driven dimer.

Bare basis ordering is ``|gg>, |ge>, |eg>, |ee>`` with ``|ge> = |g>_1 (x) |e>_2``.
Superoperators act on column-stacked density matrices::

    vec(A rho B) = kron(B.T, A) @ vec(rho)

which is numpy's ``order="F"`` flattening.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import NonUniqueSteadyStateError
from .params import SystemParams

DIM = 4

_lower = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
SIGMA1 = np.kron(_lower, np.eye(2))
SIGMA2 = np.kron(np.eye(2), _lower)
SIGMA1.flags.writeable = False
SIGMA2.flags.writeable = False

NULL_TOL = 1e-9
HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
POSITIVITY_TOL = 1e-9


def dag(op):
    return op.conj().T


def vec(rho):
    return np.asarray(rho).reshape(-1, order="F")


def unvec(v):
    n = int(round(np.sqrt(v.shape[0])))
    return np.asarray(v).reshape(n, n, order="F")


def spre(a):
    """Superoperator for rho -> a @ rho."""
    return np.kron(np.eye(a.shape[0]), a)


def spost(b):
    """Superoperator for rho -> rho @ b."""
    return np.kron(b.T, np.eye(b.shape[0]))


def sprepost(a, b):
    """Superoperator for rho -> a @ rho @ b."""
    return np.kron(b.T, a)


def trace_row(n=DIM):
    """Row vector t with t @ vec(rho) == trace(rho)."""
    return vec(np.eye(n)).astype(complex)


class Basis(enum.Enum):
    BARE = "bare"              # |gg>, |ge>, |eg>, |ee>
    COLLECTIVE = "collective"  # |gg>, |A>, |S>, |ee>


@dataclass(frozen=True)
class DensityMatrix:
    entries: np.ndarray
    basis: Basis = Basis.BARE

    def __post_init__(self):
        arr = np.array(self.entries, dtype=complex)
        if arr.shape != (DIM, DIM):
            raise ValueError(f"density matrix must be {DIM}x{DIM}, got {arr.shape}")
        arr.flags.writeable = False
        object.__setattr__(self, "entries", arr)

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)

    @property
    def populations(self):
        return self.entries.diagonal().real.copy()

    def expect(self, op):
        return complex(np.trace(self.entries @ op))

    def check(self, herm_tol=HERMITIAN_TOL, trace_tol=TRACE_TOL, pos_tol=POSITIVITY_TOL):
        """Raise ``ValueError`` unless the matrix is a valid physical state."""
        rho = self.entries
        herm = np.abs(rho - dag(rho)).max()
        if herm > herm_tol:
            raise ValueError(f"not Hermitian (deviation {herm:.3g})")
        tr = abs(np.trace(rho) - 1)
        if tr > trace_tol:
            raise ValueError(f"trace deviates from 1 by {tr:.3g}")
        min_eig = np.linalg.eigvalsh((rho + dag(rho)) / 2).min()
        if min_eig < -pos_tol:
            raise ValueError(f"negative eigenvalue {min_eig:.3g}")
        return self


def build_hamiltonian(params: SystemParams):
    """Driven-dimer Hamiltonian in the laser frame (bare basis)."""
    s1, s2 = SIGMA1, SIGMA2
    p = params
    h = ((p.delta_laser - p.delta_emit) * dag(s1) @ s1
         + (p.delta_laser + p.delta_emit) * dag(s2) @ s2
         + p.j_coupling * (dag(s1) @ s2 + dag(s2) @ s1)
         + p.omega_drive * (s1 + s2 + dag(s1) + dag(s2)))
    return h


def decay_matrix(params: SystemParams):
    g = params.gamma
    return np.array([[g, params.gamma12], [params.gamma12, g]])


def dissipator(oi, oj):
    """Superoperator of rho -> 2 oi rho oj^+ - {oj^+ oi, rho}."""
    prod = dag(oj) @ oi
    return 2 * sprepost(oi, dag(oj)) - spre(prod) - spost(prod)


@dataclass(frozen=True)
class Liouvillian:
    matrix: np.ndarray
    params: SystemParams
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self.matrix.flags.writeable = False

    @property
    def dim(self):
        return self.matrix.shape[0]

    def eigenvalues(self):
        if "eig" not in self._cache:
            self._cache["eig"] = np.linalg.eigvals(self.matrix)
        return self._cache["eig"]

    def apply(self, rho):
        return unvec(self.matrix @ vec(np.asarray(rho)))


def build_liouvillian(params: SystemParams) -> Liouvillian:
    h = build_hamiltonian(params)
    ops = (SIGMA1, SIGMA2)
    rates = decay_matrix(params)
    mat = -1j * (spre(h) - spost(h))
    for i in range(2):
        for j in range(2):
            if rates[i, j]:
                mat = mat + 0.5 * rates[i, j] * dissipator(ops[i], ops[j])
    return Liouvillian(np.ascontiguousarray(mat), params)


def steady_state(liouvillian: Liouvillian, null_tol=NULL_TOL) -> DensityMatrix:
    """Stationary state from the smallest right singular vector of L.

    Raises :class:`NonUniqueSteadyStateError` if more than one singular value
    falls below ``null_tol`` (in units of gamma).
    """
    _, sv, vh = np.linalg.svd(liouvillian.matrix)
    null_dim = int(np.count_nonzero(sv < null_tol))
    if null_dim > 1:
        raise NonUniqueSteadyStateError(null_dim, sv)
    rho = unvec(vh[-1].conj())
    rho = rho / np.trace(rho)
    rho = (rho + dag(rho)) / 2
    return DensityMatrix(rho, Basis.BARE)


def steady_state_of(params: SystemParams) -> DensityMatrix:
    return steady_state(build_liouvillian(params))


def collective_unitary(beta):
    """Rows are <gg|, <A|, <S|, <ee| expressed in the bare basis."""
    sp, sm = np.sqrt(1 + np.sin(beta)), np.sqrt(1 - np.sin(beta))
    r2 = np.sqrt(2.0)
    return np.array([
        [1, 0, 0, 0],
        [0, -sm / r2, sp / r2, 0],
        [0, sp / r2, sm / r2, 0],
        [0, 0, 0, 1],
    ], dtype=complex)


def to_collective_basis(rho: DensityMatrix, beta) -> DensityMatrix:
    if rho.basis is not Basis.BARE:
        raise ValueError("input must be in the bare basis")
    u = collective_unitary(beta)
    return DensityMatrix(u @ rho.entries @ dag(u), Basis.COLLECTIVE)


def to_bare_basis(rho: DensityMatrix, beta) -> DensityMatrix:
    if rho.basis is not Basis.COLLECTIVE:
        raise ValueError("input must be in the collective basis")
    u = collective_unitary(beta)
    return DensityMatrix(dag(u) @ rho.entries @ u, Basis.BARE)


def collective_state(name, beta):
    """Ket (bare-basis vector) of one of ``gg, A, S, ee``."""
    row = {"gg": 0, "A": 1, "S": 2, "ee": 3}[name]
    return collective_unitary(beta)[row].conj()
