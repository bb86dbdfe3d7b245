"""Fast self-check suite run by the ``check`` command."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .analysis import classical_two_mode_shift, renormalization_invariant_residual
from .circuit import (
    CircuitParams,
    build_capacitance_matrix,
    charging_energy,
    charging_energy_limit,
    derived_mode_parameters,
    foster_decompose,
    foster_impedance,
    inverse_capacitance_closed_form,
    line_impedance,
)
from .constants import HBAR
from .cpb import diagonalize_cpb, transition_frequency
from .eigensolver import eigh_dense, eigsh_lanczos
from .hamiltonian import assemble_hamiltonian, truncation_plan
from .modes import (
    bogoliubov_diagonalize,
    build_quadratic_form,
    josephson_inductance,
    linearized_normal_modes,
    position_momentum_frequencies,
    quadratic_form_from_couplings,
    symplectic_residual,
)

DEFAULT_CJ = 5e-15  # used for the C_J > 0 checks when the config has C_J = 0


@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.value) and self.value <= self.tol)


def _variants(params):
    cj = params.cj if params.cj > 0 else DEFAULT_CJ
    return params.replace(cj=0.0), params.replace(cj=cj)


def check_renormalization(params):
    p0, _ = _variants(params)
    worst = max(renormalization_invariant_residual(p0, m) for m in range(1, 51))
    return CheckResult("renormalization_identity", worst, 1e-12)


def check_capacitance_inverse(params):
    worst = 0.0
    for p in _variants(params):
        for m in (1, 2, 10, 50, 200):
            c = build_capacitance_matrix(p, m)
            inv = inverse_capacitance_closed_form(p, m)
            worst = max(worst, np.abs(c @ inv - np.eye(m + 1)).max())
    return CheckResult("capacitance_inverse", worst, 1e-12)


def check_foster(params):
    # |Z_M(w) - Z_line(w)| / Z0 at w = w0/2, in units of the 2/M bound
    worst = 0.0
    for m in (100, 1000, 5000):
        w = 0.5 * params.omega0
        err = abs(foster_impedance(foster_decompose(params, m), w) - line_impedance(params, w))
        worst = max(worst, err / params.z0 / (2.0 / m))
    return CheckResult("foster_impedance", worst, 1.0)


def check_sqrt_scaling(params):
    p0, _ = _variants(params)
    d = derived_mode_parameters(p0, 40)
    k = np.sqrt(2.0 * np.arange(40) + 1.0)
    rel = np.abs(d.gbar / (d.gbar[0] * k) - 1.0).max()
    return CheckResult("coupling_sqrt_scaling", rel, 1e-12)


def check_charging_monotone(params):
    bad = 0.0
    for p in _variants(params):
        e = np.array([charging_energy(p, m) for m in range(1, 200)])
        bad = max(bad, np.clip(-np.diff(e), 0.0, None).max() / e[0])
        limit = charging_energy_limit(p)
        if math.isfinite(limit):
            bad = max(bad, np.clip(e - limit, 0.0, None).max() / limit)
    return CheckResult("charging_energy_monotone", bad, 1e-12)


def check_gmat(params):
    p0, pj = _variants(params)
    zero = np.abs(derived_mode_parameters(p0, 20).gmat).max()
    g = derived_mode_parameters(pj, 20).gmat
    asym = np.abs(g - g.T).max() / np.abs(g).max()
    nonzero = 0.0 if np.abs(g).max() > 0 else 1.0
    return CheckResult("mode_mode_coupling", max(zero, asym, nonzero), 1e-14)


def check_cpb(params):
    e_c = charging_energy(params, 1)
    spec = diagonalize_cpb(e_c, params.ej, 20)
    ortho = np.abs(spec.vecs.T @ spec.vecs - np.eye(spec.dim)).max()
    # High levels come in near-degenerate +-N pairs that mix freely, so the
    # parity selection rule is only checked on the low-lying ones.
    low = spec.n_elem[:12, :12]
    parity = np.abs(low[0::2, 0::2]).max() + np.abs(low[1::2, 1::2]).max()
    return CheckResult("cpb_basis", max(ortho, parity), 1e-12)


def check_cpb_cutoff(params):
    e_c = charging_energy(params, 1)
    f20 = transition_frequency(diagonalize_cpb(e_c, params.ej, 20), 0, 1)
    f30 = transition_frequency(diagonalize_cpb(e_c, params.ej, 30), 0, 1)
    return CheckResult("cpb_charge_cutoff", abs(f30 / f20 - 1.0), 1e-9)


def check_symplectic(params):
    worst = 0.0
    for p in _variants(params):
        for m in (10, 100):
            worst = max(worst, symplectic_residual(bogoliubov_diagonalize(
                build_quadratic_form(derived_mode_parameters(p, m)))))
    return CheckResult("bogoliubov_symplectic", worst, 1e-9)


def check_bogoliubov_oracle(params):
    worst = 0.0
    for p in _variants(params):
        for m in range(1, 7):
            form = build_quadratic_form(derived_mode_parameters(p, m))
            bog = np.sort(bogoliubov_diagonalize(form).energies)
            ref = position_momentum_frequencies(form)
            worst = max(worst, np.abs(bog / ref - 1.0).max())
    # Zero off-diagonal couplings leave the modes untouched.
    energies = HBAR * params.omega0 * np.arange(1.0, 6.0)
    bare = bogoliubov_diagonalize(quadratic_form_from_couplings(energies, np.zeros((5, 5))))
    worst = max(worst, np.abs(np.sort(bare.energies) / energies - 1.0).max())
    return CheckResult("bogoliubov_oracle", worst, 1e-9)


def check_two_mode(params):
    p0, _ = _variants(params)
    net = foster_decompose(p0, 1)
    exact = classical_two_mode_shift(josephson_inductance(p0.ej), p0.cc, net.l[0], net.c0)
    numeric = linearized_normal_modes(p0, 1)
    closed = np.array([exact.omega_minus, exact.omega_plus])
    worst = max(np.abs(numeric / closed - 1.0).max(),
                np.abs(np.asarray(exact.roots) / closed - 1.0).max())
    return CheckResult("two_mode_oracle", worst, 1e-9)


def check_hamiltonian(params):
    p0, _ = _variants(params)
    m = 2
    d = derived_mode_parameters(p0, m)
    spec = diagonalize_cpb(d.e_c, p0.ej, 20)
    coupling = d.gbar[:, None, None] * spec.n_elem[None, :, :]
    plan = truncation_plan(d.omega, transition_frequency(spec, 0, 1), budget=400)
    ham = assemble_hamiltonian(spec, d.omega, coupling, plan, backend="numpy")
    alt = assemble_hamiltonian(spec, d.omega, coupling, plan, backend="numba")
    dense = ham.to_dense()
    scale = np.abs(dense).max()
    asym = np.abs(dense - dense.T).max() / scale
    backend = np.abs(dense - alt.to_dense()).max() / scale
    # Atom parity plus total photon number is conserved.
    atom, occ = ham.basis_labels()
    parity = (atom + occ.sum(axis=1)) % 2
    leak = np.abs(dense[parity[:, None] != parity[None, :]]).max() / scale
    k = 6
    lanczos = eigsh_lanczos(ham, k, seed=0).values
    exact = eigh_dense(ham, k).values
    agree = np.abs(lanczos - exact).max() / np.abs(exact).max()
    return CheckResult("hamiltonian_assembly", max(asym, backend, leak, agree), 1e-10)


def run_checks(params: CircuitParams):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        results = [
            check_renormalization(params),
            check_capacitance_inverse(params),
            check_foster(params),
            check_sqrt_scaling(params),
            check_charging_monotone(params),
            check_gmat(params),
            check_cpb(params),
            check_cpb_cutoff(params),
            check_symplectic(params),
            check_bogoliubov_oracle(params),
            check_two_mode(params),
            check_hamiltonian(params),
        ]
    return results
