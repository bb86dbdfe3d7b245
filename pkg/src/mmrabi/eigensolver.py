"""Lowest eigenpairs of real symmetric Hamiltonians and dressed-state labels."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import NumericalError
from .hamiltonian import SparseHamiltonian

DENSE_THRESHOLD = 4000


@dataclass(frozen=True)
class EigenResult:
    values: np.ndarray
    vectors: np.ndarray
    residuals: np.ndarray
    method: str = "dense"


@dataclass(frozen=True)
class DressedAssignment:
    index: dict
    overlap: dict
    ambiguous: dict = field(default_factory=dict)


def _as_operator(ham):
    if isinstance(ham, SparseHamiltonian):
        return ham.to_csr()
    if sp.issparse(ham):
        return ham.tocsr()
    return np.asarray(ham, dtype=float)


def _check_symmetric(mat):
    if mat.shape[0] != mat.shape[1]:
        raise ValueError("matrix must be square")
    if sp.issparse(mat):
        diff = abs(mat - mat.T)
        bad = diff.max() if diff.nnz else 0.0
        scale = abs(mat).max()
    else:
        bad = np.abs(mat - mat.T).max()
        scale = np.abs(mat).max()
    if bad > 1e-12 * scale:
        raise ValueError("matrix is not symmetric")


def _residuals(mat, values, vectors):
    return np.linalg.norm(mat @ vectors - vectors * values, axis=0)


def eigh_dense(ham, k=None) -> EigenResult:
    """``k`` smallest eigenpairs by full dense diagonalization."""
    mat = _as_operator(ham)
    _check_symmetric(mat)
    dense = mat.toarray() if sp.issparse(mat) else mat
    n = dense.shape[0]
    k = n if k is None else int(k)
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in 1..{n}")
    values, vectors = scipy.linalg.eigh(dense, subset_by_index=(0, k - 1))
    return EigenResult(values, vectors, _residuals(dense, values, vectors), "dense")


def eigsh_lanczos(ham, k, seed=0, tol=1e-13, maxiter=None) -> EigenResult:
    """``k`` smallest eigenpairs by restarted Lanczos (ARPACK).

    The start vector is drawn from a seeded generator so repeated runs are
    bit-identical.
    """
    mat = _as_operator(ham)
    if not sp.issparse(mat):
        mat = sp.csr_matrix(mat)
    _check_symmetric(mat)
    n = mat.shape[0]
    if not 1 <= k < n - 1:
        raise ValueError(f"iterative path needs 1 <= k < {n - 1}")
    scale = abs(mat).max()
    scaled = mat / scale
    v0 = np.random.default_rng(seed).standard_normal(n)
    ncv = min(n, max(2 * k + 1, 40))
    try:
        values, vectors = spla.eigsh(scaled, k=k, which="SA", v0=v0, tol=tol,
                                     ncv=ncv, maxiter=maxiter)
    except spla.ArpackNoConvergence as exc:
        raise NumericalError(
            f"Lanczos did not converge: {len(exc.eigenvalues)} of {k} eigenpairs found"
        ) from exc
    order = np.argsort(values)
    values = values[order] * scale
    vectors = vectors[:, order]
    return EigenResult(values, vectors, _residuals(mat, values, vectors), "lanczos")


def lowest_eigenpairs(ham, k, seed=0, dense_threshold=DENSE_THRESHOLD) -> EigenResult:
    """Dense path for small matrices, Lanczos above ``dense_threshold``."""
    dim = ham.dim if isinstance(ham, SparseHamiltonian) else ham.shape[0]
    if dim <= dense_threshold or k >= dim - 1:
        return eigh_dense(ham, k)
    return eigsh_lanczos(ham, k, seed=seed)


def identify_dressed_states(eig: EigenResult, labels, ham: SparseHamiltonian,
                            ambiguity=0.5) -> DressedAssignment:
    """Map each bare label ``(atom, photons)`` to the eigenvector it overlaps most.

    Ties within 1e-12 go to the lower eigenvalue; overlaps below
    ``ambiguity`` are flagged but still assigned.
    """
    index, overlap, ambiguous = {}, {}, {}
    taken = set()
    for label in labels:
        atom, photons = label
        row = ham.index_of(atom, photons)
        weights = eig.vectors[row, :] ** 2
        best = None
        for k in np.argsort(eig.values, kind="stable"):
            if k in taken:
                continue
            if best is None or weights[k] > weights[best] + 1e-12:
                best = k
        if best is None:
            raise ValueError("more labels than eigenvectors")
        taken.add(best)
        key = (atom, tuple(photons))
        index[key] = int(best)
        overlap[key] = float(weights[best])
        ambiguous[key] = bool(weights[best] < ambiguity)
    return DressedAssignment(index=index, overlap=overlap, ambiguous=ambiguous)
