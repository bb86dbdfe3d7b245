"""Convergence sweeps, Lamb-shift estimators and coupling-cutoff curves."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .circuit import (
    CircuitParams,
    charging_energy,
    cutoff_mode,
    derived_mode_parameters,
    naive_charging_energy,
)
from .constants import E_CHARGE, GHZ, H_PLANCK, HBAR
from .cpb import DEFAULT_N_MAX, diagonalize_cpb, transition_frequency
from .eigensolver import identify_dressed_states, lowest_eigenpairs
from .hamiltonian import DEFAULT_BUDGET, assemble_hamiltonian, truncation_plan
from .modes import (
    bogoliubov_diagonalize,
    build_quadratic_form,
    effective_couplings,
    normal_mode_weights,
)

TWO_PI = 2.0 * math.pi


@dataclass
class ConvergenceSeries:
    """Dressed and bare |g> -> |e> frequencies versus mode count (GHz)."""

    m_values: list = field(default_factory=list)
    f_dressed: list = field(default_factory=list)
    f_bare: list = field(default_factory=list)
    e_c: list = field(default_factory=list)
    g0: list = field(default_factory=list)
    ambiguous: list = field(default_factory=list)
    plan_used: list = field(default_factory=list)
    renormalized: bool = True

    def steps(self):
        """Successive differences f(M+1) - f(M) in GHz."""
        return np.diff(np.asarray(self.f_dressed))


@dataclass(frozen=True)
class ShiftEstimate:
    mode: int
    chi: float  # Hz
    formula_tag: str


@dataclass(frozen=True)
class TwoModeShift:
    """Linear two-oscillator problem: series L_J C_c against a parallel L_m C_0."""

    omega_plus: float
    omega_minus: float
    chi_bar: float
    omega_a: float
    omega_m: float
    eta: float
    roots: tuple  # positive roots of the quartic, ascending


@dataclass(frozen=True)
class CutoffCurve:
    m: np.ndarray
    g: np.ndarray  # |g_m| for the g -> e transition, Hz
    mode_freq: np.ndarray  # normal-mode frequencies, Hz
    low_asymptote: np.ndarray
    high_asymptote: float
    m_c: float
    knee: int


def _mode_sector(params, m_count, cpb, derived):
    """Mode frequencies (rad/s) and couplings g[m, i, j] (rad/s)."""
    if params.cj == 0:
        coupling = derived.gbar[:, None, None] * cpb.n_elem[None, :, :]
        return derived.omega, coupling
    result = bogoliubov_diagonalize(build_quadratic_form(derived))
    return result.omega, effective_couplings(derived.gbar, cpb, result)


def dressed_point(params: CircuitParams, m_count: int, budget=DEFAULT_BUDGET,
                  n_max=DEFAULT_N_MAX, renormalized=True, seed=0):
    """One point of a convergence sweep; returns a dict of GHz quantities."""
    derived = derived_mode_parameters(params, m_count)
    e_c = derived.e_c if renormalized else naive_charging_energy(params)
    cpb = diagonalize_cpb(e_c, params.ej, n_max)
    omega, coupling = _mode_sector(params, m_count, cpb, derived)
    omega_a = transition_frequency(cpb, 0, 1)
    plan = truncation_plan(omega, omega_a, budget=budget)
    ham = assemble_hamiltonian(cpb, omega, coupling, plan)

    vacuum = (0,) * m_count
    bare = ham.diagonal()
    bare_e = bare[ham.index_of(1, vacuum)]
    # Every bare state up to the excited-vacuum energy, with headroom for
    # level repulsion.
    k = int(np.count_nonzero(bare <= bare_e + 0.25 * (bare_e - bare.min()))) + 2
    k = min(max(k, 4), ham.dim)
    eig = lowest_eigenpairs(ham, k, seed=seed)
    assignment = identify_dressed_states(eig, [(0, vacuum), (1, vacuum)], ham)
    e_g = eig.values[assignment.index[(0, vacuum)]]
    e_e = eig.values[assignment.index[(1, vacuum)]]
    return {
        "M": m_count,
        "f_dressed": (e_e - e_g) / H_PLANCK / GHZ,
        "f_bare": omega_a / TWO_PI / GHZ,
        "e_c": e_c / H_PLANCK / GHZ,
        "g0": abs(coupling[0, 0, 1]) / TWO_PI / GHZ,
        "ambiguous": any(assignment.ambiguous.values()),
        "plan": plan.as_list(),
    }


def _series(params, m_range, budget, n_max, renormalized, seed):
    series = ConvergenceSeries(renormalized=renormalized)
    for m_count in m_range:
        point = dressed_point(params, m_count, budget=budget, n_max=n_max,
                              renormalized=renormalized, seed=seed)
        series.m_values.append(point["M"])
        series.f_dressed.append(point["f_dressed"])
        series.f_bare.append(point["f_bare"])
        series.e_c.append(point["e_c"])
        series.g0.append(point["g0"])
        series.ambiguous.append(point["ambiguous"])
        series.plan_used.append(point["plan"])
    return series


def dressed_transition_series(params: CircuitParams, m_range, budget=DEFAULT_BUDGET,
                              n_max=DEFAULT_N_MAX, seed=0) -> ConvergenceSeries:
    """Dressed transition of the renormalized model for each M in ``m_range``."""
    return _series(params, m_range, budget, n_max, True, seed)


def nonrenormalized_series(params: CircuitParams, m_range, budget=DEFAULT_BUDGET,
                           n_max=DEFAULT_N_MAX, seed=0) -> ConvergenceSeries:
    """Same pipeline with the charging energy pinned to e^2/2C_c."""
    return _series(params, m_range, budget, n_max, False, seed)


def _base_charging_energy(params):
    # The M-independent reference charging energy is taken at M = 1.
    return charging_energy(params, 1)


def lamb_shift_estimate(params: CircuitParams, m: int) -> ShiftEstimate:
    """Shift of the dressed transition caused by adding mode ``m``.

    Uses the linearized-atom result chi = -2 (g_m w_a)^2 / w_m^3 with
    hbar w_a = sqrt(8 E_J E_C) and the transmon coupling
    hbar g_m = 2e sqrt(hbar w_m / 2 C_0) (E_J / 32 E_C)^(1/4).
    """
    e_c = _base_charging_energy(params)
    omega_a = math.sqrt(8.0 * params.ej * e_c) / HBAR
    omega_m = (2 * m + 1) * params.omega0
    if omega_m < 3.0 * omega_a:
        warnings.warn(
            f"mode {m} is not far above the atom (w_m/w_a = {omega_m / omega_a:.2f}); "
            "the dispersive estimate is unreliable",
            RuntimeWarning,
            stacklevel=2,
        )
    gamma = (2.0 * E_CHARGE / HBAR) * math.sqrt(HBAR * omega_m / (2.0 * params.c0))
    gamma *= (params.ej / (32.0 * e_c)) ** 0.25
    chi = -2.0 * gamma**2 * omega_a**2 / omega_m**3
    return ShiftEstimate(mode=m, chi=chi / TWO_PI, formula_tag="classical-cubed")


def standard_lamb_shift(params: CircuitParams, m: int) -> ShiftEstimate:
    """The usual -2 g_m^2 / w_m, with the same transmon coupling."""
    e_c = _base_charging_energy(params)
    omega_m = (2 * m + 1) * params.omega0
    gamma = (2.0 * E_CHARGE / HBAR) * math.sqrt(HBAR * omega_m / (2.0 * params.c0))
    gamma *= (params.ej / (32.0 * e_c)) ** 0.25
    return ShiftEstimate(mode=m, chi=-2.0 * gamma**2 / omega_m / TWO_PI, formula_tag="standard-Lamb")


def classical_two_mode_shift(l_j, c_c, l_m, c_0) -> TwoModeShift:
    for name, value in (("l_j", l_j), ("c_c", c_c), ("l_m", l_m), ("c_0", c_0)):
        if not value > 0:
            raise ValueError(f"{name} must be positive")
    omega_a = 1.0 / math.sqrt(l_j * c_c)
    omega_m = 1.0 / math.sqrt(l_m * c_0)
    eta = l_m / l_j
    ratio = c_0 / c_c
    s = 1.0 + eta * (1.0 + ratio)
    disc = s * s - 4.0 * ratio * eta
    if disc < 0:
        raise ValueError("negative discriminant: no real normal modes")
    root = math.sqrt(disc)
    omega_plus = omega_m / math.sqrt(2.0) * math.sqrt(s + root)
    # s - root loses digits when eta is small; use the product of the roots.
    omega_minus = omega_a * omega_m / omega_plus
    chi_bar = -0.5 * omega_a * eta

    # Quartic in w/w_m: x^4 - x^2 (1 + (w_a/w_m)^2 + eta) + (w_a/w_m)^2 = 0
    a2 = (omega_a / omega_m) ** 2
    poly = [1.0, 0.0, -(1.0 + a2 + eta), 0.0, a2]
    roots = np.roots(poly)
    roots = roots[(np.abs(roots.imag) <= 1e-9 * np.abs(roots)) & (roots.real > 0)].real
    roots = tuple(float(r) for r in np.sort(roots) * omega_m)
    return TwoModeShift(omega_plus, omega_minus, chi_bar, omega_a, omega_m, eta, roots)


def renormalization_invariant_residual(params: CircuitParams, m: int) -> float:
    """|E_C^(M+1) - hbar gbar_M^2 / 4 w_M - E_C^(M)| / E_C^(M)."""
    if params.cj != 0:
        raise ValueError("the renormalization identity only holds for C_J = 0")
    upper = derived_mode_parameters(params, m + 1)
    lower = charging_energy(params, m)
    dressing = HBAR * upper.gbar[m] ** 2 / (4.0 * upper.omega[m])
    return abs(upper.e_c - dressing - lower) / lower


def find_knee(g, stop=None):
    """Index of strongest bending of log g against log(2m + 1).

    Only ``g[:stop]`` is searched (default: the lower half).  The top modes
    of a finite network are distorted by the truncation and bend much more
    sharply than the physical cutoff.
    """
    g = np.asarray(g, dtype=float)
    g = g[: g.size // 2 if stop is None else stop]
    if g.size < 3:
        raise ValueError("need at least three couplings to locate a knee")
    x = np.log(2.0 * np.arange(g.size) + 1.0)
    y = np.log(g)
    slope = np.diff(y) / np.diff(x)
    curvature = np.diff(slope) / (0.5 * (x[2:] - x[:-2]))
    return int(np.argmin(curvature)) + 1


def coupling_cutoff_curve(params: CircuitParams, m_count: int, n_max=DEFAULT_N_MAX) -> CutoffCurve:
    """Normal-mode couplings of the g -> e transition at fixed M (C_J > 0)."""
    m_c = cutoff_mode(params)
    if m_count < 10 * m_c:
        warnings.warn(f"m_count={m_count} is below 10 m_c = {10 * m_c:.0f}", RuntimeWarning,
                      stacklevel=2)
    derived = derived_mode_parameters(params, m_count)
    result = bogoliubov_diagonalize(build_quadratic_form(derived))
    cpb = diagonalize_cpb(derived.e_c, params.ej, n_max)
    weights = normal_mode_weights(derived.gbar, result)
    g = np.abs(weights * cpb.n_elem[0, 1]) / TWO_PI
    m = np.arange(m_count)
    low = g[0] * np.sqrt(2.0 * m + 1.0)
    # Both asymptotes meet at m_c, since 2 m_c + 1 = 1 + 1 / (w0 Z0 C) with
    # C the series combination of C_c and C_J.
    c_series = params.cc * params.cj / (params.cc + params.cj)
    high = g[0] * math.sqrt(1.0 + 1.0 / (params.omega0 * params.z0 * c_series))
    return CutoffCurve(
        m=m,
        g=g,
        mode_freq=result.omega / TWO_PI,
        low_asymptote=low,
        high_asymptote=high,
        m_c=m_c,
        knee=find_knee(g),
    )
