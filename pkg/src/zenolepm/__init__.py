"""Spectral analysis, exceptional-point manifolds and Zeno-limit dynamics
of two exchange-coupled qubits with single-qubit polarization dissipation.

All quantities are dimensionless (x-exchange strength and hbar set to 1).
"""

from .model import ModelParams, build_hamiltonian, build_liouvillian, build_blocks
from .spectra import (
    sigma_plus_spectrum,
    sigma_minus_spectrum,
    asymptotic_spectrum,
    jordan_structure,
    full_spectrum,
)
from .lepm import lep_poly_coeffs, lep_roots_minus, gamma_cr, boundary_curve, manifold_scan
from .dynamics import (
    ness_exact,
    ness_zeno,
    evolve,
    quench,
    relaxation_time,
    evolve_effective,
    gamma_ch,
    trace_gap,
)

__all__ = [
    "ModelParams",
    "build_hamiltonian",
    "build_liouvillian",
    "build_blocks",
    "sigma_plus_spectrum",
    "sigma_minus_spectrum",
    "asymptotic_spectrum",
    "jordan_structure",
    "full_spectrum",
    "lep_poly_coeffs",
    "lep_roots_minus",
    "gamma_cr",
    "boundary_curve",
    "manifold_scan",
    "ness_exact",
    "ness_zeno",
    "evolve",
    "quench",
    "relaxation_time",
    "evolve_effective",
    "gamma_ch",
    "trace_gap",
]

__version__ = "0.1.0"
