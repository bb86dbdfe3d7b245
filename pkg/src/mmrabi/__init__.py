"""Multimode Rabi model of a Cooper-pair box coupled to a transmission line."""

__version__ = "0.1.0"

from .circuit import CircuitParams, REFERENCE_PARAMS, derived_mode_parameters, charging_energy, cutoff_mode
from .cpb import diagonalize_cpb
from .modes import bogoliubov_diagonalize, build_quadratic_form, linearized_normal_modes
from .hamiltonian import assemble_hamiltonian, truncation_plan
from .eigensolver import lowest_eigenpairs
from .analysis import dressed_transition_series, nonrenormalized_series, coupling_cutoff_curve
from .config import RunConfig, parse_config, render_config

__all__ = [
    "CircuitParams",
    "REFERENCE_PARAMS",
    "RunConfig",
    "assemble_hamiltonian",
    "bogoliubov_diagonalize",
    "build_quadratic_form",
    "charging_energy",
    "coupling_cutoff_curve",
    "cutoff_mode",
    "derived_mode_parameters",
    "diagonalize_cpb",
    "dressed_transition_series",
    "linearized_normal_modes",
    "lowest_eigenpairs",
    "nonrenormalized_series",
    "parse_config",
    "render_config",
    "truncation_plan",
]
