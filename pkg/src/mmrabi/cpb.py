"""Cooper-pair box in the charge basis (offset charge fixed at zero)."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .constants import HBAR

DEFAULT_N_MAX = 20


@dataclass(frozen=True)
class CpbSpectrum:
    """Bare-atom eigensystem.

    ``eps`` are energies in J (ascending), ``vecs`` the eigenvectors as
    columns over charge states -n_max..n_max, and ``n_elem`` the matrix of
    the Cooper-pair number operator in the eigenbasis.
    """

    n_max: int
    e_c: float
    e_j: float
    eps: np.ndarray
    vecs: np.ndarray
    n_elem: np.ndarray

    @property
    def dim(self) -> int:
        return self.eps.size


def charge_states(n_max):
    return np.arange(-n_max, n_max + 1, dtype=float)


def build_cpb_hamiltonian(e_c, e_j, n_max=DEFAULT_N_MAX) -> np.ndarray:
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if e_c <= 0 or e_j < 0:
        raise ValueError("need e_c > 0 and e_j >= 0")
    n = charge_states(n_max)
    ham = np.diag(4.0 * e_c * n**2)
    off = np.full(n.size - 1, -0.5 * e_j)
    ham += np.diag(off, 1) + np.diag(off, -1)
    return ham


def _fix_signs(vecs):
    # Deterministic phase: the largest component of each eigenvector is positive.
    idx = np.argmax(np.abs(vecs), axis=0)
    signs = np.sign(vecs[idx, np.arange(vecs.shape[1])])
    signs[signs == 0] = 1.0
    return vecs * signs


def _sector(diag, off, n_max, even):
    """Eigenpairs of one charge-parity sector, expanded to the full basis."""
    eps, sub = scipy.linalg.eigh_tridiagonal(diag, off)
    full = np.zeros((2 * n_max + 1, eps.size))
    if even:
        full[n_max] = sub[0]
        full[n_max + 1:] = sub[1:] / np.sqrt(2.0)
        full[:n_max] = sub[1:][::-1] / np.sqrt(2.0)
    else:
        full[n_max + 1:] = sub / np.sqrt(2.0)
        full[:n_max] = -sub[::-1] / np.sqrt(2.0)
    return eps, full


def diagonalize_cpb(e_c, e_j, n_max=DEFAULT_N_MAX, edge_tol=1e-8) -> CpbSpectrum:
    """Eigensystem of ``4 E_C N^2 - E_J cos(delta)`` on charges -n_max..n_max.

    The even and odd combinations of |N> and |-N> are diagonalized
    separately, so every eigenvector has definite parity even where the
    upper levels are nearly degenerate.
    """
    build_cpb_hamiltonian(e_c, e_j, n_max)  # validation
    scale = max(e_c, e_j)
    pos = np.arange(0, n_max + 1, dtype=float)
    diag = 4.0 * (e_c / scale) * pos**2
    hop = -0.5 * e_j / scale
    off_even = np.full(n_max, hop)
    off_even[0] *= np.sqrt(2.0)
    eps_e, vec_e = _sector(diag, off_even, n_max, even=True)
    eps_o, vec_o = _sector(diag[1:], np.full(n_max - 1, hop), n_max, even=False)

    eps = np.concatenate([eps_e, eps_o])
    parity = np.concatenate([np.zeros(eps_e.size, int), np.ones(eps_o.size, int)])
    order = np.argsort(eps, kind="stable")
    eps = eps[order] * scale
    parity = parity[order]
    vecs = _fix_signs(np.hstack([vec_e, vec_o])[:, order])

    edge_weight = vecs[0, 0] ** 2 + vecs[-1, 0] ** 2
    if edge_weight > edge_tol:
        warnings.warn(
            f"charge basis truncated too tightly: ground-state weight {edge_weight:.1e} "
            f"on |N| = {n_max}",
            RuntimeWarning,
            stacklevel=2,
        )
    n = charge_states(n_max)
    n_elem = vecs.T @ (n[:, None] * vecs)
    n_elem = 0.5 * (n_elem + n_elem.T)
    # N flips parity, so same-parity elements vanish exactly.
    n_elem[parity[:, None] == parity[None, :]] = 0.0
    return CpbSpectrum(n_max=n_max, e_c=e_c, e_j=e_j, eps=eps, vecs=vecs, n_elem=n_elem)


def transition_frequency(spec: CpbSpectrum, i: int, j: int) -> float:
    """Angular frequency (eps_j - eps_i)/hbar."""
    if not (0 <= i <= j < spec.dim):
        raise IndexError(f"need 0 <= i <= j < {spec.dim}, got ({i}, {j})")
    return (spec.eps[j] - spec.eps[i]) / HBAR
