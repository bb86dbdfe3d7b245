import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mmrabi.circuit import charging_energy
from mmrabi.constants import GHZ, H_PLANCK, HBAR
from mmrabi.cpb import build_cpb_hamiltonian, charge_states, diagonalize_cpb, transition_frequency

EC = 0.4646 * GHZ * H_PLANCK
EJ = 20 * GHZ * H_PLANCK


def test_hamiltonian_shape_nmax1():
    h = build_cpb_hamiltonian(1.0, 2.0, 1)
    np.testing.assert_array_equal(h, [[4.0, -1.0, 0.0], [-1.0, 0.0, -1.0], [0.0, -1.0, 4.0]])


def test_hamiltonian_charge_symmetric():
    h = build_cpb_hamiltonian(EC, EJ, 7)
    np.testing.assert_array_equal(h, h[::-1, ::-1])
    np.testing.assert_array_equal(h, h.T)
    assert np.count_nonzero(np.triu(h, 2)) == 0


def test_hamiltonian_validation():
    with pytest.raises(ValueError):
        build_cpb_hamiltonian(EC, EJ, 0)
    with pytest.raises(ValueError):
        build_cpb_hamiltonian(0.0, EJ, 5)
    with pytest.raises(ValueError):
        build_cpb_hamiltonian(EC, -EJ, 5)


def test_free_charge_ladder():
    spec = diagonalize_cpb(EC, 0.0, 6)
    n = np.arange(0, 7)
    expect = np.sort(np.concatenate([4 * EC * n**2, 4 * EC * n[1:] ** 2]))
    np.testing.assert_allclose(spec.eps, expect, rtol=1e-14, atol=1e-14 * EC)
    assert transition_frequency(spec, 0, 1) == pytest.approx(4 * EC / HBAR, rel=1e-14)


def test_transmon_asymptotics():
    spec = diagonalize_cpb(EC, EJ, 20)
    f_ge = transition_frequency(spec, 0, 1) / (2 * math.pi)
    approx = (math.sqrt(8 * EJ * EC) - EC) / H_PLANCK
    assert approx / GHZ == pytest.approx(8.16, abs=0.01)
    assert f_ge == pytest.approx(approx, rel=0.02)


def test_matches_dense_eigensolver():
    h = build_cpb_hamiltonian(EC, EJ, 20)
    spec = diagonalize_cpb(EC, EJ, 20)
    np.testing.assert_allclose(spec.eps, np.linalg.eigvalsh(h), rtol=1e-12, atol=1e-12 * EJ)
    resid = np.linalg.norm(h @ spec.vecs - spec.vecs * spec.eps, axis=0)
    assert resid.max() <= 1e-9 * np.linalg.norm(h, 2)


def test_orthonormal_and_symmetric():
    spec = diagonalize_cpb(EC, EJ, 20)
    assert np.abs(spec.vecs.T @ spec.vecs - np.eye(spec.dim)).max() <= 1e-10
    np.testing.assert_array_equal(spec.n_elem, spec.n_elem.T)
    assert np.all(np.diff(spec.eps) >= 0)
    assert spec.dim == 41


def test_charge_matrix_elements():
    spec = diagonalize_cpb(EC, EJ, 20)
    n = charge_states(20)
    direct = spec.vecs.T @ (n[:, None] * spec.vecs)
    np.testing.assert_allclose(spec.n_elem, direct, atol=1e-12)
    assert abs(spec.n_elem[0, 0]) <= 1e-10
    # transmon: <g|N|e> ~ (E_J / 32 E_C)^(1/4)
    assert abs(spec.n_elem[0, 1]) == pytest.approx((EJ / (32 * EC)) ** 0.25, rel=0.05)


def test_parity_selection_rule_all_levels():
    # upper levels are nearly degenerate +-N pairs; parity must still be exact
    spec = diagonalize_cpb(EC, EJ, 20)
    even = np.abs(spec.vecs - spec.vecs[::-1]).max(axis=0) < 1e-12
    odd = np.abs(spec.vecs + spec.vecs[::-1]).max(axis=0) < 1e-12
    assert np.all(even ^ odd)
    same = even[:, None] == even[None, :]
    assert np.abs(spec.n_elem[same]).max() <= 1e-10


def test_sign_convention():
    spec = diagonalize_cpb(EC, EJ, 20)
    idx = np.argmax(np.abs(spec.vecs), axis=0)
    assert np.all(spec.vecs[idx, np.arange(spec.dim)] > 0)


def test_charge_cutoff_stability(params):
    e_c = charging_energy(params, 1)
    f20 = transition_frequency(diagonalize_cpb(e_c, params.ej, 20), 0, 1)
    f25 = transition_frequency(diagonalize_cpb(e_c, params.ej, 25), 0, 1)
    f30 = transition_frequency(diagonalize_cpb(e_c, params.ej, 30), 0, 1)
    assert abs(f25 - f20) / f20 < 1e-9
    assert abs(f30 - f20) / f20 <= 1e-9


def test_tight_truncation_warns():
    with pytest.warns(RuntimeWarning, match="truncated"):
        diagonalize_cpb(EC, EJ, 2)


def test_transition_frequency_indices():
    spec = diagonalize_cpb(EC, EJ, 5)
    assert transition_frequency(spec, 2, 2) == 0.0
    with pytest.raises(IndexError):
        transition_frequency(spec, 1, 0)
    with pytest.raises(IndexError):
        transition_frequency(spec, 0, spec.dim)


def test_atom_frequency_grows_with_modes(params):
    f = [transition_frequency(diagonalize_cpb(charging_energy(params, m), params.ej), 0, 1)
         for m in range(1, 8)]
    assert np.all(np.diff(f) > 0)


@settings(max_examples=30, deadline=None)
@given(ratio=st.floats(0.0, 200.0), n_max=st.integers(1, 25))
def test_random_spectra_match_dense(ratio, n_max):
    e_c = 1.0
    e_j = ratio * e_c
    h = build_cpb_hamiltonian(e_c, e_j, n_max)
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        spec = diagonalize_cpb(e_c, e_j, n_max)
    scale = max(e_c * n_max**2, e_j, 1.0)
    np.testing.assert_allclose(spec.eps, np.linalg.eigvalsh(h), atol=1e-11 * scale)
    assert np.abs(spec.vecs.T @ spec.vecs - np.eye(spec.dim)).max() <= 1e-10
