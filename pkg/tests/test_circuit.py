import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mmrabi.circuit import (
    CircuitParams,
    build_capacitance_matrix,
    charging_energy,
    charging_energy_limit,
    cutoff_mode,
    derived_mode_parameters,
    dressed_charging_energy,
    foster_decompose,
    foster_impedance,
    inverse_capacitance_closed_form,
    inverse_capacitance_numeric,
    line_impedance,
    naive_charging_energy,
)
from mmrabi.constants import E_CHARGE, GHZ, H_PLANCK, HBAR
from mmrabi.analysis import renormalization_invariant_residual

FF = 1e-15


def test_constants_are_exact_si():
    assert E_CHARGE == 1.602176634e-19
    assert H_PLANCK == 6.62607015e-34
    assert HBAR == H_PLANCK / (2 * math.pi)


def test_params_validation():
    with pytest.raises(ValueError):
        CircuitParams.from_io(cc_ff=-1)
    with pytest.raises(ValueError):
        CircuitParams.from_io(cj_ff=-1)
    with pytest.raises(ValueError):
        CircuitParams.from_io(f0_ghz=float("nan"))
    with pytest.raises(ValueError):
        CircuitParams.from_io(ej_ghz=0)


def test_foster_values(params):
    # hand-evaluated: C0 = pi/(4 w0 Z0), L0 = 4 Z0/(pi w0)
    w0 = 2 * math.pi * 10e9
    net = foster_decompose(params, 1)
    assert net.c0 == pytest.approx(math.pi / (4 * w0 * 50), rel=1e-15)
    assert net.c0 == pytest.approx(0.25e-12, rel=1e-12)
    assert net.l[0] == pytest.approx(1.01321e-9, rel=1e-5)
    net2 = foster_decompose(params, 2)
    assert net2.l[1] == pytest.approx(net2.l[0] / 9, rel=1e-15)
    assert net2.l[1] == pytest.approx(0.1126e-9, rel=1e-3)
    assert 1 / math.sqrt(net.l[0] * net.c0) == pytest.approx(w0, rel=1e-12)


def test_foster_rejects_zero_modes(params):
    with pytest.raises(ValueError):
        foster_decompose(params, 0)
    with pytest.raises(ValueError):
        foster_decompose(params, 2.5)


@pytest.mark.parametrize("m_count", [100, 1000, 5000])
def test_foster_impedance_tail_bound(params, m_count):
    w = 0.5 * params.omega0
    err = abs(foster_impedance(foster_decompose(params, m_count), w) - line_impedance(params, w))
    assert err / params.z0 <= 2.0 / m_count


def test_capacitance_matrix_m1(params):
    cap = build_capacitance_matrix(params, 1)
    cc, c0 = params.cc, params.c0
    np.testing.assert_array_equal(cap, [[cc, -cc], [-cc, c0 + cc]])
    assert np.linalg.det(cap) == pytest.approx(cc * c0, rel=1e-12)
    inv = inverse_capacitance_closed_form(params, 1)
    expect = [[(c0 + cc) / (c0 * cc), 1 / c0], [1 / c0, 1 / c0]]
    np.testing.assert_allclose(inv, expect, rtol=1e-14)


def test_capacitance_matrix_m2_with_junction(params_cj):
    cap = build_capacitance_matrix(params_cj, 2)
    assert cap.shape == (3, 3)
    assert cap[1, 2] == params_cj.cc
    assert cap[0, 0] == params_cj.cj + params_cj.cc
    np.testing.assert_array_equal(cap, cap.T)


@pytest.mark.parametrize("cj", [0.0, 5 * FF])
@pytest.mark.parametrize("m_count", [1, 2, 10, 50, 200])
def test_inverse_identity(params, cj, m_count):
    p = params.replace(cj=cj)
    cap = build_capacitance_matrix(p, m_count)
    inv = inverse_capacitance_closed_form(p, m_count)
    resid = np.abs(cap @ inv - np.eye(m_count + 1)).max()
    assert resid <= 1e-12 * np.linalg.norm(cap, 2) * np.linalg.norm(inv, 2)
    np.testing.assert_allclose(inv, inverse_capacitance_numeric(p, m_count),
                               rtol=1e-9, atol=1e-12 * np.abs(inv).max())


@settings(max_examples=40, deadline=None)
@given(
    cc=st.floats(1, 500),
    cj=st.floats(0, 50),
    z0=st.floats(10, 200),
    m_count=st.integers(1, 60),
)
def test_inverse_identity_random(cc, cj, z0, m_count):
    p = CircuitParams.from_io(cc_ff=cc, cj_ff=cj, z0_ohm=z0)
    cap = build_capacitance_matrix(p, m_count)
    inv = inverse_capacitance_closed_form(p, m_count)
    resid = np.abs(cap @ inv - np.eye(m_count + 1)).max()
    assert resid <= 1e-12 * np.linalg.norm(cap, 2) * np.linalg.norm(inv, 2)


def test_charging_energy_from_inverse(params_cj):
    inv = inverse_capacitance_closed_form(params_cj, 7)
    assert charging_energy(params_cj, 7) == pytest.approx(0.5 * E_CHARGE**2 * inv[0, 0], rel=1e-14)


def test_charging_energy_small_cc_limit():
    p = CircuitParams.from_io(cc_ff=0.05)
    assert charging_energy(p, 1) == pytest.approx(naive_charging_energy(p), rel=1e-3)


def test_charging_energy_reference_value(params):
    # e^2/2 (C0 + Cc)/(C0 Cc) with C0 = 0.25 pF, Cc = 50 fF
    value = charging_energy(params, 1) / H_PLANCK / GHZ
    expect = 0.5 * E_CHARGE**2 * (0.25e-12 + 50e-15) / (0.25e-12 * 50e-15) / H_PLANCK / GHZ
    assert value == pytest.approx(expect, rel=1e-12)
    # quoted as ~0.4646 GHz
    assert value == pytest.approx(0.4646, rel=1e-3)


def test_charging_energy_large_m_limit(params_cj):
    value = charging_energy(params_cj, 10**6)
    limit = charging_energy_limit(params_cj)
    assert limit == pytest.approx(0.5 * E_CHARGE**2 / (5 * FF), rel=1e-15)
    assert value == pytest.approx(limit, rel=1e-4)
    # e^2/2C_J for 5 fF is 3.874 GHz
    assert limit / H_PLANCK / GHZ == pytest.approx(3.874, rel=1e-3)


def test_charging_energy_limit_infinite_without_junction(params):
    assert charging_energy_limit(params) == math.inf


@pytest.mark.parametrize("cj", [0.0, 5 * FF])
def test_charging_energy_monotone_bounded(params, cj):
    p = params.replace(cj=cj)
    e = np.array([charging_energy(p, m) for m in range(1, 400)])
    assert np.all(np.diff(e) >= 0)
    assert np.all(e <= charging_energy_limit(p))


def test_derived_without_junction(params):
    d = derived_mode_parameters(params, 12)
    assert d.beta == 1.0
    assert d.c0_eff == params.c0
    assert not d.gmat.any()
    np.testing.assert_array_equal(d.omega, (2 * np.arange(12) + 1) * params.omega0)
    np.testing.assert_allclose(d.gbar / d.gbar[0], np.sqrt(2 * np.arange(12) + 1), rtol=1e-12)
    np.testing.assert_allclose(d.gbar * HBAR, 2 * E_CHARGE * d.beta * d.vzpf, rtol=1e-15)


def test_derived_with_junction(params_cj):
    d = derived_mode_parameters(params_cj, 20)
    np.testing.assert_array_equal(d.gmat, d.gmat.T)
    assert np.all(np.diag(d.gmat) == 0)
    off = d.gmat[~np.eye(20, dtype=bool)]
    assert np.all(off < 0)
    assert 0 < d.beta < 1
    assert np.all(d.omega > 0) and np.all(d.vzpf > 0)
    np.testing.assert_allclose(d.vzpf / d.vzpf[0], np.sqrt(2 * np.arange(20) + 1), rtol=1e-12)


def test_mode_mode_coupling_prefactor(params_cj):
    # Off-diagonal block of the inverse capacitance times the zero-point voltages
    # after rescaling the mode fluxes to the effective capacitance.
    m = 4
    d = derived_mode_parameters(params_cj, m)
    inv = inverse_capacitance_closed_form(params_cj, m)
    q_zpf = d.c0_eff * d.vzpf
    expect = inv[1, 2] * q_zpf[0] * q_zpf[1]
    assert d.gmat[0, 1] == pytest.approx(expect, rel=1e-12)


def test_atom_capacitance_matches_charging_energy(params_cj):
    d = derived_mode_parameters(params_cj, 9)
    assert d.e_c == pytest.approx(0.5 * E_CHARGE**2 / d.c_aa, rel=1e-14)


def test_renormalization_identity(params):
    for m in range(1, 51):
        assert renormalization_invariant_residual(params, m) <= 1e-12


def test_single_mode_dressing_is_e2_over_2c0(params):
    d = derived_mode_parameters(params, 9)
    dressing = HBAR * d.gbar**2 / (4 * d.omega)
    np.testing.assert_allclose(dressing, 0.5 * E_CHARGE**2 / params.c0, rtol=1e-12)


def test_dressed_charging_energy_telescopes(params):
    out = dressed_charging_energy(params, 1, 50)
    assert out.e_c_tilde == pytest.approx(charging_energy(params, 1), rel=1e-12)
    assert out.l_keep == 1 and out.m_limit == 50


def test_dressed_charging_energy_with_junction(params_cj):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        out = dressed_charging_energy(params_cj, 5, 4000)
    assert 0 < out.e_c_tilde < charging_energy_limit(params_cj)


def test_dressed_charging_energy_warns_when_short(params_cj):
    with pytest.warns(RuntimeWarning, match="not converged"):
        dressed_charging_energy(params_cj, 5, 10)


def test_dressed_charging_energy_rejects_bad_limits(params):
    with pytest.raises(ValueError):
        dressed_charging_energy(params, 5, 5)


def test_cutoff_mode(params_cj, params):
    assert cutoff_mode(params_cj) == pytest.approx(35.0, abs=0.1)
    doubled = params_cj.replace(z0=2 * params_cj.z0)
    assert cutoff_mode(doubled) == pytest.approx(cutoff_mode(params_cj) / 2, rel=1e-14)
    tiny = params.replace(cj=1e-20)
    assert cutoff_mode(tiny) > 1e5
    with pytest.raises(ValueError):
        cutoff_mode(params)
