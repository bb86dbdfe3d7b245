"""Sparse-entry generation for the atom x Fock-space Hamiltonian.

Both backends emit the upper triangle (diagonal included) in the same
deterministic order: the diagonal, then atom-mode entries grouped by
(mode, i, j), then mode-mode entries grouped by mode pair, each group in
increasing Fock index.  Basis index is
``atom * stride_atom + sum_m n_m * stride[m]`` with the last mode fastest.
"""

from __future__ import annotations

import numpy as np

from . import _accel
from ._accel import njit


def strides(photons):
    photons = np.asarray(photons, dtype=np.int64)
    out = np.ones(photons.size, dtype=np.int64)
    for m in range(photons.size - 2, -1, -1):
        out[m] = out[m + 1] * photons[m + 1]
    return out


def occupations(photons):
    """Array (n_fock, M) of photon numbers for every Fock configuration."""
    photons = np.asarray(photons, dtype=np.int64)
    n_fock = int(np.prod(photons))
    st = strides(photons)
    flat = np.arange(n_fock, dtype=np.int64)
    return (flat[:, None] // st[None, :]) % photons[None, :]


# --------------------------------------------------------------------------
# numpy backend


def _upper_numpy(atom_energy, mode_energy, photons, coupling, gmat):
    n_atom = atom_energy.size
    m_count = photons.size
    n_fock = int(np.prod(photons))
    st = strides(photons)
    occ = occupations(photons)
    fock = np.arange(n_fock, dtype=np.int64)

    rows, cols, vals = [], [], []
    idx = np.arange(n_atom * n_fock, dtype=np.int64)
    rows.append(idx)
    cols.append(idx)
    # Accumulate mode by mode, matching the compiled kernel bit for bit.
    diag = np.repeat(atom_energy[:, None], n_fock, axis=1)
    for m in range(m_count):
        diag += occ[None, :, m] * mode_energy[m]
    vals.append(diag.ravel())

    coup_r, coup_c, coup_v = [], [], []
    for m in range(m_count):
        can_raise = occ[:, m] < photons[m] - 1
        src = fock[can_raise]
        amp = np.sqrt(occ[can_raise, m] + 1.0)
        dst = src + st[m]
        for i in range(n_atom):
            for j in range(n_atom):
                g = coupling[m, i, j]
                if g == 0.0:
                    continue
                # (i, n) <-> (j, n + e_m); keep the upper-triangle orientation
                r = i * n_fock + src
                c = j * n_fock + dst
                lo = np.minimum(r, c)
                hi = np.maximum(r, c)
                coup_r.append(lo)
                coup_c.append(hi)
                coup_v.append(g * amp)
    _extend(rows, cols, vals, coup_r, coup_c, coup_v)

    mm_r, mm_c, mm_v = [], [], []
    if gmat is not None:
        for m in range(m_count):
            for mp in range(m + 1, m_count):
                gv = gmat[m, mp]
                if gv == 0.0:
                    continue
                up_m = occ[:, m] < photons[m] - 1
                # raise m, raise m'
                sel = up_m & (occ[:, mp] < photons[mp] - 1)
                src = fock[sel]
                amp = np.sqrt((occ[sel, m] + 1.0) * (occ[sel, mp] + 1.0))
                dst = src + st[m] + st[mp]
                for i in range(n_atom):
                    mm_r.append(i * n_fock + src)
                    mm_c.append(i * n_fock + dst)
                    mm_v.append(gv * amp)
                # raise m, lower m'
                sel = up_m & (occ[:, mp] > 0)
                src = fock[sel]
                amp = np.sqrt((occ[sel, m] + 1.0) * occ[sel, mp])
                dst = src + st[m] - st[mp]
                for i in range(n_atom):
                    r = i * n_fock + src
                    c = i * n_fock + dst
                    mm_r.append(np.minimum(r, c))
                    mm_c.append(np.maximum(r, c))
                    mm_v.append(gv * amp)
    _extend(rows, cols, vals, mm_r, mm_c, mm_v)
    return np.concatenate(rows), np.concatenate(cols), np.concatenate(vals)


def _extend(rows, cols, vals, r, c, v):
    rows.extend(r)
    cols.extend(c)
    vals.extend(v)


# --------------------------------------------------------------------------
# numba backend


@njit
def _count_numba(photons, st, coupling_mask, gmask, n_atom):
    m_count = photons.size
    n_fock = 1
    for m in range(m_count):
        n_fock *= photons[m]
    n_coup = 0
    n_mm = 0
    occ = np.zeros(m_count, dtype=np.int64)
    for f in range(n_fock):
        rem = f
        for m in range(m_count):
            occ[m] = (rem // st[m]) % photons[m]
        for m in range(m_count):
            if occ[m] < photons[m] - 1:
                n_coup += coupling_mask[m]
                for mp in range(m + 1, m_count):
                    if gmask[m, mp]:
                        if occ[mp] < photons[mp] - 1:
                            n_mm += n_atom
                        if occ[mp] > 0:
                            n_mm += n_atom
    return n_coup, n_mm


@njit
def _fill_numba(atom_energy, mode_energy, photons, st, coupling, gmat, use_g,
                rows, cols, vals):
    n_atom = atom_energy.size
    m_count = photons.size
    n_fock = 1
    for m in range(m_count):
        n_fock *= photons[m]
    k = 0
    for i in range(n_atom):
        for f in range(n_fock):
            e = atom_energy[i]
            for m in range(m_count):
                e += ((f // st[m]) % photons[m]) * mode_energy[m]
            s = i * n_fock + f
            rows[k] = s
            cols[k] = s
            vals[k] = e
            k += 1
    start_coup = k
    for m in range(m_count):
        for i in range(n_atom):
            for j in range(n_atom):
                g = coupling[m, i, j]
                if g == 0.0:
                    continue
                for f in range(n_fock):
                    om = (f // st[m]) % photons[m]
                    if om >= photons[m] - 1:
                        continue
                    r = i * n_fock + f
                    c = j * n_fock + f + st[m]
                    if r > c:
                        r, c = c, r
                    rows[k] = r
                    cols[k] = c
                    vals[k] = g * np.sqrt(om + 1.0)
                    k += 1
    start_mm = k
    if use_g:
        for m in range(m_count):
            for mp in range(m + 1, m_count):
                gv = gmat[m, mp]
                if gv == 0.0:
                    continue
                # raise m, raise m'
                for i in range(n_atom):
                    for f in range(n_fock):
                        om = (f // st[m]) % photons[m]
                        omp = (f // st[mp]) % photons[mp]
                        if om >= photons[m] - 1 or omp >= photons[mp] - 1:
                            continue
                        rows[k] = i * n_fock + f
                        cols[k] = i * n_fock + f + st[m] + st[mp]
                        vals[k] = gv * np.sqrt((om + 1.0) * (omp + 1.0))
                        k += 1
                # raise m, lower m'
                for i in range(n_atom):
                    for f in range(n_fock):
                        om = (f // st[m]) % photons[m]
                        omp = (f // st[mp]) % photons[mp]
                        if om >= photons[m] - 1 or omp == 0:
                            continue
                        r = i * n_fock + f
                        c = i * n_fock + f + st[m] - st[mp]
                        if r > c:
                            r, c = c, r
                        rows[k] = r
                        cols[k] = c
                        vals[k] = gv * np.sqrt((om + 1.0) * omp)
                        k += 1
    return start_coup, start_mm, k


def _upper_numba(atom_energy, mode_energy, photons, coupling, gmat):
    n_atom = atom_energy.size
    st = strides(photons)
    coupling_mask = (coupling != 0.0).sum(axis=(1, 2)).astype(np.int64)
    use_g = gmat is not None
    g_arr = gmat if use_g else np.zeros((photons.size, photons.size))
    gmask = np.triu(g_arr != 0.0, 1)
    n_coup, n_mm = _count_numba(photons, st, coupling_mask, gmask, n_atom)
    n_diag = n_atom * int(np.prod(photons))
    total = n_diag + n_coup + (n_mm if use_g else 0)
    rows = np.empty(total, dtype=np.int64)
    cols = np.empty(total, dtype=np.int64)
    vals = np.empty(total, dtype=np.float64)
    _, _, k = _fill_numba(
        atom_energy, mode_energy, photons, st, coupling, g_arr, use_g, rows, cols, vals
    )
    assert k == total
    return rows, cols, vals


def upper_entries(atom_energy, mode_energy, photons, coupling, gmat=None, backend=None):
    """Upper-triangle COO entries ``(rows, cols, vals)`` of the Hamiltonian.

    ``coupling`` has shape (M, n_atom, n_atom) and must already be in energy
    units; ``gmat`` is the optional symmetric mode-mode matrix.
    """
    atom_energy = np.ascontiguousarray(atom_energy, dtype=np.float64)
    mode_energy = np.ascontiguousarray(mode_energy, dtype=np.float64)
    photons = np.ascontiguousarray(photons, dtype=np.int64)
    coupling = np.ascontiguousarray(coupling, dtype=np.float64)
    if gmat is not None:
        gmat = np.ascontiguousarray(gmat, dtype=np.float64)
    if backend is None:
        backend = "numba" if _accel.USE_NUMBA else "numpy"
    if backend == "numba":
        return _upper_numba(atom_energy, mode_energy, photons, coupling, gmat)
    if backend == "numpy":
        return _upper_numpy(atom_energy, mode_energy, photons, coupling, gmat)
    raise ValueError(f"unknown backend {backend!r}")
