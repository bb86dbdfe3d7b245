"""Lumped-element model of a transmon capacitively coupled to a lambda/4 line.

The line is replaced by its Foster equivalent (M parallel LC branches in
series, sharing the capacitance ``C0``); the junction node sees ``C_J`` to
ground and ``C_c`` to the open end of the line.  Everything here is closed
form and in SI units.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .constants import E_CHARGE, FF, GHZ, H_PLANCK, HBAR


@dataclass(frozen=True)
class CircuitParams:
    """The five circuit inputs, in SI units.

    ``ej`` is the Josephson energy in joules; use :meth:`from_io` to build
    from the GHz/Ohm/fF units used in config files.
    """

    f0: float
    z0: float
    cc: float
    cj: float
    ej: float

    def __post_init__(self):
        for name in ("f0", "z0", "cc", "cj", "ej"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
        if self.f0 <= 0 or self.z0 <= 0 or self.cc <= 0 or self.ej <= 0:
            raise ValueError("f0, z0, cc and ej must be positive")
        if self.cj < 0:
            raise ValueError("cj must be non-negative")

    @classmethod
    def from_io(cls, f0_ghz=10.0, z0_ohm=50.0, cc_ff=50.0, cj_ff=0.0, ej_ghz=20.0):
        return cls(
            f0=f0_ghz * GHZ,
            z0=z0_ohm,
            cc=cc_ff * FF,
            cj=cj_ff * FF,
            ej=ej_ghz * GHZ * H_PLANCK,
        )

    @property
    def omega0(self) -> float:
        return 2.0 * math.pi * self.f0

    @property
    def c0(self) -> float:
        return math.pi / (4.0 * self.omega0 * self.z0)

    @property
    def l0(self) -> float:
        return 4.0 * self.z0 / (math.pi * self.omega0)

    def replace(self, **changes) -> "CircuitParams":
        fields = dict(f0=self.f0, z0=self.z0, cc=self.cc, cj=self.cj, ej=self.ej)
        fields.update(changes)
        return CircuitParams(**fields)


REFERENCE_PARAMS = CircuitParams.from_io()


@dataclass(frozen=True)
class FosterNetwork:
    c0: float
    l: np.ndarray


@dataclass(frozen=True)
class DerivedParams:
    """M-dependent Hamiltonian parameters of the truncated circuit.

    Energies in J, angular frequencies in rad/s, voltages in V.
    ``gmat`` holds the mode-mode coupling G (zero diagonal).
    """

    m_count: int
    e_c: float
    c_aa: float
    c0_eff: float
    beta: float
    omega: np.ndarray
    vzpf: np.ndarray
    gbar: np.ndarray
    gmat: np.ndarray


@dataclass(frozen=True)
class DressedChargingEnergy:
    l_keep: int
    e_c_tilde: float
    m_limit: int


def _check_modes(m_count):
    if isinstance(m_count, bool) or int(m_count) != m_count or m_count < 1:
        raise ValueError(f"mode count must be a positive integer, got {m_count!r}")
    return int(m_count)


def foster_decompose(params: CircuitParams, m_count: int) -> FosterNetwork:
    m_count = _check_modes(m_count)
    m = np.arange(m_count)
    return FosterNetwork(c0=params.c0, l=params.l0 / (2 * m + 1) ** 2)


def foster_impedance(network: FosterNetwork, omega):
    """Input impedance of the parallel-LC chain at angular frequency ``omega``."""
    omega = np.asarray(omega, dtype=float)
    w = omega[..., None]
    branch = 1.0 / (1j * network.c0 * w + 1.0 / (1j * network.l * w))
    return branch.sum(axis=-1)


def line_impedance(params: CircuitParams, omega):
    """Input impedance of the shorted lambda/4 line."""
    return 1j * params.z0 * np.tan(0.5 * math.pi * np.asarray(omega) / params.omega0)


def _denominator(params, m_count):
    # M Cc CJ + C0 (Cc + CJ)
    return m_count * params.cc * params.cj + params.c0 * (params.cc + params.cj)


def build_capacitance_matrix(params: CircuitParams, m_count: int) -> np.ndarray:
    """Capacitance matrix in the (junction, mode 0, ..., mode M-1) flux basis."""
    m_count = _check_modes(m_count)
    cc = params.cc
    cap = np.full((m_count + 1, m_count + 1), cc)
    cap[0, :] = -cc
    cap[:, 0] = -cc
    cap[0, 0] = params.cj + cc
    idx = np.arange(1, m_count + 1)
    cap[idx, idx] = params.c0 + cc
    return cap


def inverse_capacitance_closed_form(params: CircuitParams, m_count: int) -> np.ndarray:
    m_count = _check_modes(m_count)
    c0, cc, cj = params.c0, params.cc, params.cj
    denom = c0 * _denominator(params, m_count)
    if not denom > 0 or not math.isfinite(1.0 / denom):
        raise ArithmeticError("capacitance matrix is numerically singular")
    inv = np.full((m_count + 1, m_count + 1), -cj * cc)
    inv[0, :] = c0 * cc
    inv[:, 0] = c0 * cc
    inv[0, 0] = c0 * c0 + m_count * c0 * cc
    idx = np.arange(1, m_count + 1)
    inv[idx, idx] = c0 * (cc + cj) + (m_count - 1) * cc * cj
    return inv / denom


def inverse_capacitance_numeric(params: CircuitParams, m_count: int) -> np.ndarray:
    """Cholesky-based inverse, used to cross-check the closed form."""
    cap = build_capacitance_matrix(params, m_count)
    factor = np.linalg.cholesky(cap)
    ident = np.eye(cap.shape[0])
    y = np.linalg.solve(factor, ident)
    return y.T @ y


def charging_energy(params: CircuitParams, m_count: int) -> float:
    """E_C of the bare atom when M modes are kept (J)."""
    m_count = _check_modes(m_count)
    return 0.5 * E_CHARGE**2 * (params.c0 + m_count * params.cc) / _denominator(params, m_count)


def charging_energy_limit(params: CircuitParams) -> float:
    """M -> infinity limit of :func:`charging_energy`; infinite when C_J = 0."""
    if params.cj == 0:
        return math.inf
    return 0.5 * E_CHARGE**2 / params.cj


def naive_charging_energy(params: CircuitParams) -> float:
    """Textbook e^2/2C_c, used by the non-renormalized model."""
    return 0.5 * E_CHARGE**2 / params.cc


def _mode_arrays(params, m_count):
    c0, cc, cj = params.c0, params.cc, params.cj
    denom = _denominator(params, m_count)
    c0_eff = c0 * denom / ((m_count - 1) * cc * cj + c0 * (cc + cj))
    beta = cc * c0_eff / denom
    odd = 2.0 * np.arange(m_count) + 1.0
    # Without a junction capacitance C_0^(M) = C_0; keep w0 exact in that case.
    omega0_eff = params.omega0 if cj == 0 else 1.0 / math.sqrt(params.l0 * c0_eff)
    omega = odd * omega0_eff
    vzpf = np.sqrt(odd) * math.sqrt(HBAR * omega0_eff / (2.0 * c0_eff))
    gbar = beta * vzpf * 2.0 * E_CHARGE / HBAR
    return c0_eff, beta, omega, vzpf, gbar


def derived_mode_parameters(params: CircuitParams, m_count: int) -> DerivedParams:
    m_count = _check_modes(m_count)
    c0, cc, cj = params.c0, params.cc, params.cj
    denom = _denominator(params, m_count)
    c0_eff, beta, omega, vzpf, gbar = _mode_arrays(params, m_count)
    prefactor = -(c0 * cc * cj / denom) * (c0_eff / c0) ** 2
    gmat = prefactor * np.outer(vzpf, vzpf)
    np.fill_diagonal(gmat, 0.0)
    return DerivedParams(
        m_count=m_count,
        e_c=charging_energy(params, m_count),
        c_aa=denom / (c0 + m_count * cc),
        c0_eff=c0_eff,
        beta=beta,
        omega=omega,
        vzpf=vzpf,
        gbar=gbar,
        gmat=gmat,
    )


def cutoff_mode(params: CircuitParams) -> float:
    """Mode index where the loaded line end turns from antinode to node."""
    if params.cj <= 0:
        raise ValueError("no finite cutoff mode without junction capacitance")
    return (params.cj + params.cc) / (2.0 * params.omega0 * params.z0 * params.cj * params.cc)


def _dressed_value(params, l_keep, m_limit):
    _, _, omega, _, gbar = _mode_arrays(params, m_limit)
    tail = HBAR * gbar[l_keep:] ** 2 / (4.0 * omega[l_keep:])
    return charging_energy(params, m_limit) - tail.sum()


def dressed_charging_energy(params: CircuitParams, l_keep: int, m_limit: int,
                            rtol: float = 1e-3) -> DressedChargingEnergy:
    """Charging energy of an L-mode model dressed by modes L..m_limit-1.

    ``m_limit`` stands in for the infinite mode sum.  With C_J > 0 the
    result still moves with ``m_limit``; a warning is issued when doubling
    it changes the value by more than ``rtol``.
    """
    l_keep = _check_modes(l_keep)
    m_limit = _check_modes(m_limit)
    if m_limit <= l_keep:
        raise ValueError("m_limit must exceed l_keep")
    value = _dressed_value(params, l_keep, m_limit)
    if params.cj > 0:
        wider = _dressed_value(params, l_keep, 2 * m_limit)
        if abs(wider - value) > rtol * abs(value):
            warnings.warn(
                f"dressed charging energy not converged at m_limit={m_limit} "
                f"(relative change {abs(wider - value) / abs(value):.2e} on doubling)",
                RuntimeWarning,
                stacklevel=2,
            )
    return DressedChargingEnergy(l_keep=l_keep, e_c_tilde=value, m_limit=m_limit)
