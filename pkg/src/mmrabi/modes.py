"""Normal modes of the quadratic bosonic sector.

The quadratic Hamiltonian is written as ``alpha^T h alpha`` with
``alpha = (a_0..a_{M-1}, a_0^dag..a_{M-1}^dag)`` and
``h = [[eta, xi], [xi, eta]]``.  Eigenvectors of ``h J`` assembled as
columns give ``F = [[A, B], [B, A]]``; the new operators follow from
``alpha = [[A, -B], [-B, A]] beta`` and the mode energies are ``2 mu``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circuit import CircuitParams, DerivedParams, derived_mode_parameters
from .constants import E_CHARGE, HBAR
from .cpb import CpbSpectrum
from .errors import BogoliubovError


@dataclass(frozen=True)
class QuadraticForm:
    eta: np.ndarray
    xi: np.ndarray

    @property
    def m_count(self):
        return self.eta.shape[0]

    def matrix(self):
        return np.block([[self.eta, self.xi], [self.xi, self.eta]])


@dataclass(frozen=True)
class BogoliubovResult:
    a_block: np.ndarray
    b_block: np.ndarray
    mu: np.ndarray
    f_matrix: np.ndarray

    @property
    def energies(self):
        """Normal-mode energies 2*mu (J)."""
        return 2.0 * self.mu

    @property
    def omega(self):
        return 2.0 * self.mu / HBAR


def symplectic_j(m_count):
    eye = np.eye(m_count)
    zero = np.zeros((m_count, m_count))
    return np.block([[zero, eye], [-eye, zero]])


def quadratic_form_from_couplings(energies, coupling) -> QuadraticForm:
    """Form for ``sum E_m a^dag a + sum_{m<m'} K (a+a^dag)(a'+a'^dag)``.

    ``coupling`` is the full symmetric matrix K; its diagonal is ignored.
    """
    energies = np.asarray(energies, dtype=float)
    coupling = np.array(coupling, dtype=float)
    if coupling.shape != (energies.size, energies.size):
        raise ValueError("coupling matrix shape does not match the mode count")
    if not np.allclose(coupling, coupling.T, rtol=0, atol=1e-12 * max(np.abs(coupling).max(), 1e-300)):
        raise ValueError("coupling matrix must be symmetric")
    half = 0.5 * coupling
    np.fill_diagonal(half, 0.0)
    eta = half.copy()
    xi = half.copy()
    xi[np.diag_indices_from(xi)] = 0.5 * energies
    return QuadraticForm(eta=eta, xi=xi)


def build_quadratic_form(derived: DerivedParams) -> QuadraticForm:
    return quadratic_form_from_couplings(HBAR * derived.omega, derived.gmat)


def _pair_sign(col, m_count):
    # Sign making the mode's leading coefficient positive; falls back to the
    # largest-magnitude coefficient when the leading one vanishes.
    a_part = col[m_count:]  # +mu eigenvector is [B; A]
    lead = a_part[0]
    if abs(lead) < 1e-12 * np.abs(col).max():
        lead = a_part[np.argmax(np.abs(a_part))]
    return -1.0 if lead < 0 else 1.0


def bogoliubov_diagonalize(form: QuadraticForm, imag_tol=1e-10) -> BogoliubovResult:
    m_count = form.m_count
    h = form.matrix()
    scale = np.abs(h).max()
    if not scale > 0:
        raise BogoliubovError("quadratic form is identically zero")
    hj = (h / scale) @ symplectic_j(m_count)
    evals, evecs = np.linalg.eig(hj)

    if np.abs(evals.imag).max() > imag_tol * np.abs(evals).max():
        raise BogoliubovError("complex normal-mode frequencies: quadratic form is not positive definite")
    evals = evals.real
    evecs = evecs.real if np.iscomplexobj(evecs) else evecs

    positive = np.flatnonzero(evals > 0)
    negative = np.flatnonzero(evals < 0)
    if positive.size != m_count or negative.size != m_count:
        raise BogoliubovError("eigenvalues of h J do not split into +/- pairs")
    # Ascending |mu|, ties broken by the dominant bare-mode index.
    dominant = np.argmax(np.abs(evecs[m_count:, positive]) + np.abs(evecs[:m_count, positive]), axis=0)
    order = np.lexsort((dominant, evals[positive]))
    positive = positive[order]
    mu_pos = evals[positive]
    mu_neg = np.sort(np.abs(evals[negative]))
    if not np.allclose(mu_pos, mu_neg, rtol=1e-8, atol=0):
        raise BogoliubovError("eigenvalues of h J are not paired as +/- mu")

    jmat = symplectic_j(m_count)
    f_matrix = np.empty((2 * m_count, 2 * m_count))
    for k, idx in enumerate(positive):
        upper = evecs[:, idx] / np.linalg.norm(evecs[:, idx])
        # The -mu partner is the block swap of the +mu vector (h J anticommutes
        # with the swap), so the leading coefficient of the -mu vector matches
        # the M-th coefficient of the +mu vector by construction.
        lower = np.concatenate([upper[m_count:], upper[:m_count]])
        norm = lower @ jmat @ upper
        if not norm > 1e-300:
            raise BogoliubovError(f"symplectic normalization failed for mode {k} (norm {norm:.3e})")
        sign = _pair_sign(upper, m_count)
        f_matrix[:, k] = sign * lower / math.sqrt(norm)
        f_matrix[:, m_count + k] = sign * upper / math.sqrt(norm)

    f_matrix = _symplectic_orthogonalize(f_matrix, mu_pos, m_count)
    a_block = f_matrix[:m_count, :m_count]
    b_block = f_matrix[m_count:, :m_count]
    return BogoliubovResult(a_block=a_block, b_block=b_block, mu=mu_pos * scale, f_matrix=f_matrix)


def _symplectic_orthogonalize(f_matrix, mu, m_count, rel_gap=1e-8):
    # Eigenvectors of near-degenerate pairs need not be J-orthogonal; fix them
    # with a symplectic Gram-Schmidt restricted to each degenerate cluster.
    jmat = symplectic_j(m_count)
    start = 0
    while start < m_count:
        stop = start + 1
        while stop < m_count and mu[stop] - mu[stop - 1] <= rel_gap * mu[stop]:
            stop += 1
        if stop - start > 1:
            for k in range(start, stop):
                for p in range(start, k):
                    low_k, up_k = f_matrix[:, k], f_matrix[:, m_count + k]
                    low_p, up_p = f_matrix[:, p], f_matrix[:, m_count + p]
                    c_up = low_p @ jmat @ up_k
                    c_low = up_p @ jmat @ low_k
                    f_matrix[:, m_count + k] = up_k - c_up * up_p
                    f_matrix[:, k] = low_k + c_low * low_p
                low_k, up_k = f_matrix[:, k], f_matrix[:, m_count + k]
                norm = low_k @ jmat @ up_k
                f_matrix[:, k] /= math.sqrt(norm)
                f_matrix[:, m_count + k] /= math.sqrt(norm)
        start = stop
    return f_matrix


def symplectic_residual(result: BogoliubovResult) -> float:
    m_count = result.mu.size
    jmat = symplectic_j(m_count)
    return float(np.abs(result.f_matrix.T @ jmat @ result.f_matrix - jmat).max())


def position_momentum_frequencies(form: QuadraticForm) -> np.ndarray:
    """Normal-mode energies from the x-p representation (independent oracle).

    With ``a = (x + i p)/sqrt(2)`` the form reads ``x^T X x + p^T P p`` where
    ``X = eta + xi`` and ``P = xi - eta``; energies are
    ``2 sqrt(eig(P^{1/2} X P^{1/2}))``.
    """
    x_mat = form.xi + form.eta
    p_mat = form.xi - form.eta
    evals, evecs = np.linalg.eigh(p_mat)
    if evals.min() <= 0:
        raise BogoliubovError("momentum block is not positive definite")
    root = (evecs * np.sqrt(evals)) @ evecs.T
    sq = np.linalg.eigvalsh(root @ x_mat @ root)
    if sq.min() <= 0:
        raise BogoliubovError("position block is not positive definite")
    return 2.0 * np.sqrt(np.sort(sq))


def effective_couplings(gbar, cpb: CpbSpectrum, result: BogoliubovResult) -> np.ndarray:
    """Couplings of the normal modes to atomic transitions, shape (M, n, n).

    ``g[m, i, j] = sum_m' gbar[m'] (A - B)[m', m] <i|N|j>`` in rad/s.
    """
    gbar = np.asarray(gbar, dtype=float)
    if gbar.size != result.mu.size:
        raise ValueError(f"{gbar.size} bare couplings for {result.mu.size} normal modes")
    mode_weights = gbar @ (result.a_block - result.b_block)
    return mode_weights[:, None, None] * cpb.n_elem[None, :, :]


def normal_mode_weights(gbar, result: BogoliubovResult) -> np.ndarray:
    """Dipole-free couplings of the normal modes, ``gbar @ (A - B)``."""
    return np.asarray(gbar, dtype=float) @ (result.a_block - result.b_block)


def josephson_inductance(e_j):
    return HBAR**2 / (4.0 * E_CHARGE**2 * e_j)


def linearized_quadratic_form(params: CircuitParams, m_count: int) -> QuadraticForm:
    """Atom (junction replaced by L_J) plus M modes as one quadratic form.

    Index 0 is the atom oscillator; 1..M are the bare resonator modes.
    """
    derived = derived_mode_parameters(params, m_count)
    l_j = josephson_inductance(params.ej)
    omega_atom = 1.0 / math.sqrt(l_j * derived.c_aa)
    # Charge zero-point fluctuation of the atom oscillator, in Cooper pairs.
    n_zpf = math.sqrt(HBAR / (2.0 * math.sqrt(l_j / derived.c_aa))) / (2.0 * E_CHARGE)
    energies = HBAR * np.concatenate([[omega_atom], derived.omega])
    coupling = np.zeros((m_count + 1, m_count + 1))
    coupling[1:, 1:] = derived.gmat
    coupling[0, 1:] = coupling[1:, 0] = HBAR * derived.gbar * n_zpf
    return quadratic_form_from_couplings(energies, coupling)


def linearized_normal_modes(params: CircuitParams, m_count: int) -> np.ndarray:
    """Angular frequencies (ascending) of the fully linearized circuit."""
    result = bogoliubov_diagonalize(linearized_quadratic_form(params, m_count))
    return np.sort(result.omega)
