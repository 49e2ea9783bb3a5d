"""Built-in benchmark models: an open three-level system and the 8-site
PE545 light-harvesting complex.

The PE545 matrix as printed in the literature source is slightly
asymmetric (entry (1,4) = -35.9 vs (4,1) = -35.4, zero-based); the upper
triangle is taken as authoritative and mirrored, and the largest printed
asymmetry is recorded.
"""

from dataclasses import dataclass

import numpy as np

from .bath import BathSpec
from .operators import SiteHamiltonian

__all__ = ["ModelDef", "three_level", "pe545", "builtin_model", "MODEL_NAMES"]


@dataclass(frozen=True)
class ModelDef:
    name: str
    hamiltonian: SiteHamiltonian
    default_bath: BathSpec
    default_t_final: float  # ps
    printed_asymmetry_cm1: float = 0.0


THREE_LEVEL_CM1 = np.array([
    [0.00, 0.67, 0.00],
    [0.67, -2.67, 0.67],
    [0.00, 0.67, -3.67],
])

# upper triangle as printed; "-31,9" read as -31.9
PE545_UPPER_CM1 = np.array([
    [18008.0, -4.1, -31.9, 2.8, 2.1, -37.1, -10.5, 45.9],
    [0.0, 17973.0, -2.9, 30.9, -35.9, 2.5, -45.5, 11.0],
    [0.0, 0.0, 18711.0, -5.6, -19.6, -16.1, 6.7, 6.8],
    [0.0, 0.0, 0.0, 18960.0, 11.5, 25.5, 5.1, 7.4],
    [0.0, 0.0, 0.0, 0.0, 18532.0, 101.5, 36.3, 16.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 19574.0, 17.6, -38.6],
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 18040.0, 2.6],
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 19050.0],
])

# |(1,4) upper - (4,1) printed lower| = |-35.9 - (-35.4)|
PE545_PRINTED_ASYMMETRY_CM1 = 0.5


def three_level() -> ModelDef:
    return ModelDef(
        name="three_level",
        hamiltonian=SiteHamiltonian.from_cm1(THREE_LEVEL_CM1),
        default_bath=BathSpec(eta_cm1=0.125, omega_c_cm1=100.0,
                              temperature_k=300.0, matsubara_n=100),
        default_t_final=5.0,
    )


def pe545() -> ModelDef:
    m = PE545_UPPER_CM1 + np.triu(PE545_UPPER_CM1, 1).T
    return ModelDef(
        name="pe545",
        hamiltonian=SiteHamiltonian.from_cm1(m),
        default_bath=BathSpec(eta_cm1=12.5, omega_c_cm1=1000.0,
                              temperature_k=300.0, matsubara_n=10000),
        default_t_final=2.0,
        printed_asymmetry_cm1=PE545_PRINTED_ASYMMETRY_CM1,
    )


MODEL_NAMES = ("three_level", "pe545")


def builtin_model(name: str) -> ModelDef:
    if name == "three_level":
        return three_level()
    if name == "pe545":
        return pe545()
    raise KeyError(f"unknown built-in model {name!r}; choose from {MODEL_NAMES}")
