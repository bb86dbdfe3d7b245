"""Truncated atom x multimode Hamiltonian in the bare product basis."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .constants import HBAR
from .cpb import CpbSpectrum
from .errors import TruncationError
from .kernels import occupations, strides, upper_entries

DEFAULT_BUDGET = 200_000


@dataclass(frozen=True)
class TruncationPlan:
    atom_levels: int
    photons: tuple

    def __post_init__(self):
        if self.atom_levels < 1 or any(n < 1 for n in self.photons):
            raise ValueError("truncations must be positive")

    @property
    def m_count(self) -> int:
        return len(self.photons)

    @property
    def fock_dim(self) -> int:
        return math.prod(self.photons)

    @property
    def total_dim(self) -> int:
        return self.atom_levels * self.fock_dim

    def as_list(self):
        return [self.atom_levels, *self.photons]


def _plan_dim(atom_levels, photons):
    return atom_levels * math.prod(photons)


def truncation_plan(mode_omega, atom_omega, budget=DEFAULT_BUDGET, atom_levels=4,
                    atom_cap=14, extra_photons=3, grow=True) -> TruncationPlan:
    """Allocate atom and photon levels under a Hilbert-space budget.

    Photon levels start at 5 for modes within ``atom_omega`` of the atomic
    transition, 3 within three times that and 2 beyond; each mode may grow
    by ``extra_photons`` and the atom up to ``atom_cap`` levels.  Levels are
    then added one at a time to whichever truncation is least filled
    relative to its cap (ties: smaller detuning, atom first).  The growth
    order does not depend on the budget and stops at the first increment
    that would exceed it, so a larger budget never shrinks any truncation.
    ``grow=False`` returns the starting allocation.
    """
    mode_omega = np.asarray(mode_omega, dtype=float)
    if budget < 64:
        raise TruncationError("budget must be at least 64")
    detuning = np.abs(mode_omega - atom_omega)
    start = np.where(detuning < atom_omega, 5, np.where(detuning < 3 * atom_omega, 3, 2))
    photons = [int(n) for n in start]
    if _plan_dim(atom_levels, photons) > budget:
        photons = [2] * mode_omega.size
        if _plan_dim(atom_levels, photons) > budget:
            raise TruncationError(
                f"budget {budget} cannot hold {atom_levels} atom levels and 2 photon levels "
                f"in each of {mode_omega.size} modes"
            )
        return TruncationPlan(atom_levels=atom_levels, photons=tuple(photons))
    if not grow:
        return TruncationPlan(atom_levels=atom_levels, photons=tuple(photons))

    # Index 0 is the atom, 1..M the modes.
    levels = [atom_levels, *photons]
    limits = [max(atom_cap, atom_levels), *(int(n) + extra_photons for n in start)]
    tie = [-1.0, *detuning]
    while True:
        open_ = [k for k in range(len(levels)) if levels[k] < limits[k]]
        if not open_:
            break
        k = min(open_, key=lambda q: (levels[q] / limits[q], tie[q], q))
        levels[k] += 1
        if _plan_dim(levels[0], levels[1:]) > budget:
            levels[k] -= 1
            break
    return TruncationPlan(atom_levels=levels[0], photons=tuple(levels[1:]))


@dataclass(frozen=True)
class SparseHamiltonian:
    """Real symmetric Hamiltonian as full COO triplets (J).

    Basis order: atom index slowest, then modes 0..M-1 with the last mode
    fastest.
    """

    dim: int
    rows: np.ndarray
    cols: np.ndarray
    vals: np.ndarray
    plan: TruncationPlan

    def index_of(self, atom: int, photons) -> int:
        photons = np.asarray(photons, dtype=np.int64)
        if photons.size != self.plan.m_count:
            raise ValueError("occupation vector has the wrong length")
        if not (0 <= atom < self.plan.atom_levels) or np.any(photons < 0) or np.any(
            photons >= np.asarray(self.plan.photons)
        ):
            raise IndexError("label outside the truncated basis")
        return int(atom * self.plan.fock_dim + photons @ strides(self.plan.photons))

    def label_of(self, index: int):
        atom, fock = divmod(int(index), self.plan.fock_dim)
        st = strides(self.plan.photons)
        occ = (fock // st) % np.asarray(self.plan.photons)
        return atom, tuple(int(n) for n in occ)

    def basis_labels(self):
        occ = occupations(self.plan.photons)
        atom = np.repeat(np.arange(self.plan.atom_levels), occ.shape[0])
        return atom, np.tile(occ, (self.plan.atom_levels, 1))

    def diagonal(self):
        mask = self.rows == self.cols
        out = np.zeros(self.dim)
        out[self.rows[mask]] = self.vals[mask]
        return out

    def to_csr(self):
        return sp.csr_matrix((self.vals, (self.rows, self.cols)), shape=(self.dim, self.dim))

    def to_dense(self):
        out = np.zeros((self.dim, self.dim))
        np.add.at(out, (self.rows, self.cols), self.vals)
        return out

    @property
    def nnz(self):
        return self.vals.size


def assemble_hamiltonian(cpb: CpbSpectrum, mode_omega, couplings, plan: TruncationPlan,
                         gmat=None, backend=None) -> SparseHamiltonian:
    """Build ``sum eps_i |i><i| + sum hbar w_m n_m + sum hbar g_mij |i><j| (a + a^dag)``.

    ``couplings`` has shape (M, n, n) in rad/s with n >= ``plan.atom_levels``;
    the optional ``gmat`` (J) adds ``sum_{m<m'} G (a_m + a_m^dag)(a_m' + a_m'^dag)``.
    """
    mode_omega = np.asarray(mode_omega, dtype=float)
    couplings = np.asarray(couplings, dtype=float)
    m_count = mode_omega.size
    n_a = plan.atom_levels
    if plan.m_count != m_count:
        raise ValueError(f"plan has {plan.m_count} modes, Hamiltonian has {m_count}")
    if couplings.ndim != 3 or couplings.shape[0] != m_count:
        raise ValueError("couplings must have shape (M, n, n)")
    if couplings.shape[1] < n_a or couplings.shape[2] < n_a or cpb.dim < n_a:
        raise ValueError("not enough atomic levels for the truncation plan")
    g = couplings[:, :n_a, :n_a]
    scale = np.abs(g).max() if g.size else 0.0
    if not np.allclose(g, np.transpose(g, (0, 2, 1)), rtol=0, atol=1e-12 * scale):
        raise ValueError("atom-mode couplings must be symmetric in the atomic indices")
    if gmat is not None:
        gmat = np.asarray(gmat, dtype=float)
        if gmat.shape != (m_count, m_count):
            raise ValueError("gmat shape does not match the mode count")
        if not np.allclose(gmat, gmat.T, rtol=0, atol=1e-12 * max(np.abs(gmat).max(), 1e-300)):
            raise ValueError("gmat must be symmetric")

    rows, cols, vals = upper_entries(
        cpb.eps[:n_a], HBAR * mode_omega, plan.photons, HBAR * g, gmat, backend=backend
    )
    off = rows != cols
    full_rows = np.concatenate([rows, cols[off]])
    full_cols = np.concatenate([cols, rows[off]])
    full_vals = np.concatenate([vals, vals[off]])
    return SparseHamiltonian(
        dim=plan.total_dim, rows=full_rows, cols=full_cols, vals=full_vals, plan=plan
    )
