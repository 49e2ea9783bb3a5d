"""Unit conventions.

Inputs are quoted in wavenumbers (cm^-1) and Kelvin; all internal angular
frequencies and rates are in rad/ps (hbar = 1, so energy == angular
frequency). The coupling strength eta of the Drude density carries energy
units and is converted like any other cm^-1 quantity.
"""

import math

# speed of light in cm/s (exact)
C_CM_PER_S = 2.99792458e10

# 1 cm^-1 expressed as angular frequency in rad/ps
CM1_TO_RADPS = 2.0 * math.pi * C_CM_PER_S * 1e-12

# Boltzmann constant in cm^-1 per Kelvin: k_B / (h c)
KB_CM1_PER_K = 1.380649e-23 / (6.62607015e-34 * C_CM_PER_S)


def cm1_to_radps(x):
    return x * CM1_TO_RADPS


def radps_to_cm1(x):
    return x / CM1_TO_RADPS


def thermal_energy_radps(temperature_k: float) -> float:
    """k_B * T as an angular frequency in rad/ps."""
    return cm1_to_radps(KB_CM1_PER_K * temperature_k)
