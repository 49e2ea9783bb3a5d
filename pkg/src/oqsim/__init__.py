"""Dissipative dynamics of open multi-level quantum systems.

Four master-equation generators ({non-secular, secular} x {Lindblad,
Redfield}) over a Drude bath, with either the traditional real spectral
correlation tensor (gamma1) or its exact complex closed form (gamma2).
"""

from .bath import BathSpec, SpectralTensor, gamma1, gamma2, gamma_quadrature_oracle, spectral_tensor
from .generators import build_lindblad, build_redfield, redfield_to_superoperator
from .models import pe545, three_level
from .operators import (
    EigenSystem,
    SiteHamiltonian,
    Superoperator,
    bohr_frequencies,
    eigendecompose,
    transform_superoperator,
)
from .propagator import (
    Trajectory,
    propagate_exact,
    propagate_rk4,
    relaxation_timescale,
    stationary_state,
)

__all__ = [
    "BathSpec",
    "SpectralTensor",
    "gamma1",
    "gamma2",
    "gamma_quadrature_oracle",
    "spectral_tensor",
    "build_lindblad",
    "build_redfield",
    "redfield_to_superoperator",
    "three_level",
    "pe545",
    "SiteHamiltonian",
    "EigenSystem",
    "Superoperator",
    "eigendecompose",
    "bohr_frequencies",
    "transform_superoperator",
    "Trajectory",
    "propagate_exact",
    "propagate_rk4",
    "stationary_state",
    "relaxation_timescale",
]

__version__ = "0.1.0"
