"""Drude bath: spectral density, occupation factors, and the spectral
correlation tensor Gamma(omega) in two flavors.

gamma1 is the traditional real approximation (delta-function limit of the
half-Fourier transform, principal value discarded). gamma2 is the exact
complex closed form: Gamma = (Dbar + gbar) + i (fbar - kbar), where Dbar,
fbar are cosine/sine half-transforms of the symmetric correlation nu(tau)
(Matsubara expansions, with dedicated branches on the resonance
Omega = 2 k pi k_B T) and kbar, gbar the transforms of the antisymmetric
part mu(tau).

A damped-kernel quadrature oracle evaluates the same half-Fourier integral
numerically and is used to validate the closed forms.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .units import cm1_to_radps, thermal_energy_radps

__all__ = [
    "BathSpec",
    "SpectralTensor",
    "drude_j",
    "bose_n",
    "gamma1",
    "matsubara_freq",
    "is_resonant",
    "dbar",
    "fbar",
    "kappabar",
    "gammabar",
    "gamma2",
    "spectral_tensor",
    "gamma_quadrature_oracle",
    "matsubara_convergence",
]

RESONANCE_RTOL = 1e-6


class QuadratureError(RuntimeError):
    """Oracle quadrature failed to reach its error target."""


@dataclass(frozen=True)
class BathSpec:
    """Drude bath parameters in input units (cm^-1 / Kelvin)."""

    eta_cm1: float
    omega_c_cm1: float
    temperature_k: float
    matsubara_n: int
    variant: str = "gamma2"

    def __post_init__(self):
        if self.eta_cm1 < 0:
            raise ValueError(f"bath.eta must be >= 0, got {self.eta_cm1}")
        if self.omega_c_cm1 <= 0:
            raise ValueError(f"bath.omega_c must be > 0, got {self.omega_c_cm1}")
        if self.temperature_k <= 0:
            raise ValueError(f"bath.temperature must be > 0, got {self.temperature_k}")
        if self.matsubara_n < 1:
            raise ValueError(f"bath.matsubara_n must be >= 1, got {self.matsubara_n}")
        if self.variant not in ("gamma1", "gamma2"):
            raise ValueError(f"bath.variant must be 'gamma1' or 'gamma2', got {self.variant!r}")

    # internal (rad/ps) views
    @property
    def eta(self) -> float:
        return cm1_to_radps(self.eta_cm1)

    @property
    def omega_c(self) -> float:
        return cm1_to_radps(self.omega_c_cm1)

    @property
    def kt(self) -> float:
        return thermal_energy_radps(self.temperature_k)


def drude_j(omega: float, eta: float, omega_c: float) -> float:
    """J(w) = eta Wc w / (w^2 + Wc^2); peaks at w = Wc with value eta/2."""
    return eta * omega_c * omega / (omega * omega + omega_c * omega_c)


def bose_n(omega: float, kt: float) -> float:
    """Bose occupation 1/(exp(w/kT) - 1). Undefined at w = 0."""
    if omega == 0:
        raise ValueError("Bose occupation is singular at omega = 0; use explicit limits")
    x = omega / kt
    if x > 700.0:
        return 0.0
    if x < -700.0:
        return -1.0
    return 1.0 / math.expm1(x)


def gamma1(delta: float, spec: BathSpec) -> float:
    """Traditional real spectral tensor (imaginary part discarded)."""
    eta, wc, kt = spec.eta, spec.omega_c, spec.kt
    if delta > 0:
        return math.pi * drude_j(delta, eta, wc) * (1.0 + bose_n(delta, kt))
    if delta < 0:
        return math.pi * drude_j(-delta, eta, wc) * bose_n(-delta, kt)
    # limit of J(-d) N(-d) as d -> 0: J ~ eta w / Wc, N ~ kT / w
    return math.pi * eta * kt / wc


def matsubara_freq(j, kt: float):
    """j-th bosonic Matsubara frequency 2 j pi k_B T (j >= 1)."""
    return 2.0 * np.pi * np.asarray(j) * kt


def is_resonant(spec: BathSpec) -> int | None:
    """Index k with Omega = 2 k pi k_B T within RESONANCE_RTOL, else None."""
    k = int(round(spec.omega_c / (2.0 * math.pi * spec.kt)))
    if k >= 1 and abs(matsubara_freq(k, spec.kt) - spec.omega_c) / spec.omega_c < RESONANCE_RTOL:
        return k
    return None


def _matsubara_grid(spec: BathSpec, n: int | None):
    n = spec.matsubara_n if n is None else n
    j = np.arange(1, n + 1, dtype=float)
    return j, matsubara_freq(j, spec.kt)


def dbar(omega: float, spec: BathSpec, n: int | None = None) -> float:
    """Cosine half-transform of nu(tau)."""
    eta, wc, kt = spec.eta, spec.omega_c, spec.kt
    if omega != 0.0:
        return 0.5 * math.pi * drude_j(omega, eta, wc) / math.tanh(omega / (2.0 * kt))
    j, wj = _matsubara_grid(spec, n)
    k = is_resonant(spec)
    if k is not None:
        keep = j != k
        head = -kt * eta * math.pi / (2.0 * wc)
        return head + float(np.sum(2.0 * math.pi * eta * wc * kt / (wj[keep] ** 2 - wc * wc)))
    head = 0.5 * math.pi * eta / math.tan(wc / (2.0 * kt))
    return head + float(np.sum(2.0 * math.pi * eta * wc * kt / (wj * wj - wc * wc)))


def fbar(omega: float, spec: BathSpec, n: int | None = None) -> float:
    """Sine half-transform of nu(tau)."""
    eta, wc, kt = spec.eta, spec.omega_c, spec.kt
    j, wj = _matsubara_grid(spec, n)
    k = is_resonant(spec)
    if k is not None:
        keep = j != k
        head = 0.5 * eta * math.pi * kt * (omega ** 3 - 3.0 * omega * wc * wc) / (omega * omega + wc * wc) ** 2
        j, wj = j[keep], wj[keep]
    else:
        head = 0.5 * math.pi * eta * wc * omega / ((wc * wc + omega * omega) * math.tan(wc / (2.0 * kt)))
    tail = float(np.sum(eta * wc * wj * wj * omega / (j * (wj * wj - wc * wc) * (wj * wj + omega * omega))))
    return head + tail


def kappabar(omega: float, spec: BathSpec) -> float:
    """Cosine half-transform of mu(tau)."""
    eta, wc = spec.eta, spec.omega_c
    return eta * math.pi * wc * wc / (2.0 * (wc * wc + omega * omega))


def gammabar(omega: float, spec: BathSpec) -> float:
    """Sine half-transform of mu(tau): (pi/2) J(omega), 0 at omega = 0."""
    if omega == 0.0:
        return 0.0
    return 0.5 * math.pi * drude_j(omega, spec.eta, spec.omega_c)


def gamma2(delta: float, spec: BathSpec, n: int | None = None) -> complex:
    """Exact complex spectral tensor (Dbar + gbar) + i (fbar - kbar)."""
    return complex(
        dbar(delta, spec, n) + gammabar(delta, spec),
        fbar(delta, spec, n) - kappabar(delta, spec),
    )


def gamma_value(delta: float, spec: BathSpec) -> complex:
    """Gamma(delta) of the spec's selected variant."""
    if spec.variant == "gamma1":
        return complex(gamma1(delta, spec))
    return gamma2(delta, spec)


@dataclass(frozen=True)
class SpectralTensor:
    """Per-site, per-Bohr-frequency-cluster values Gamma_aa(omega_c).

    Off-diagonal (alpha != beta) entries vanish because the site baths are
    uncorrelated; with identical baths the rows are identical too.
    """

    freqs: np.ndarray      # cluster representatives, rad/ps
    values: np.ndarray     # (n_sites, n_clusters) complex
    variant: str

    @property
    def n_sites(self) -> int:
        return self.values.shape[0]

    def gamma_rates(self) -> np.ndarray:
        """gamma_aa(w) = 2 Re Gamma_aa(w)."""
        return 2.0 * self.values.real

    def shifts(self) -> np.ndarray:
        """T_aa(w) = Im Gamma_aa(w)."""
        return self.values.imag


def spectral_tensor(freqs: np.ndarray, spec: BathSpec, n_sites: int) -> SpectralTensor:
    """Evaluate Gamma at each clustered Bohr frequency for identical baths."""
    row = np.array([gamma_value(float(w), spec) for w in freqs], dtype=complex)
    values = np.tile(row, (n_sites, 1))
    values.setflags(write=False)
    return SpectralTensor(freqs=np.asarray(freqs), values=values, variant=spec.variant)


def _oracle_single(delta: float, spec: BathSpec, eps: float, upper: float) -> complex:
    eta, wc, kt = spec.eta, spec.omega_c, spec.kt

    def integrand(w, part):
        jw = drude_j(w, eta, wc)
        nw = bose_n(w, kt) if w > 0 else 0.0
        k1 = (eps + 1j * (delta - w)) / (eps * eps + (delta - w) ** 2)
        k2 = (eps + 1j * (delta + w)) / (eps * eps + (delta + w) ** 2)
        v = jw * ((1.0 + nw) * k1 + nw * k2)
        return v.real if part == 0 else v.imag

    pts = sorted(p for p in (abs(delta) - 3 * eps, abs(delta), abs(delta) + 3 * eps, wc, kt)
                 if 0.0 < p < upper)
    parts = []
    for part in (0, 1):
        val, err = quad(integrand, 0.0, upper, args=(part,), points=pts, limit=400)
        # tail on [upper, inf) via x = 1/w; integrand decays like 1/w^2
        tval, terr = quad(lambda x, p=part: integrand(1.0 / x, p) / (x * x),
                          0.0, 1.0 / upper, limit=200)
        total = val + tval
        bound = abs(err) + abs(terr)
        if bound > 1e-6 * max(1.0, abs(total)):
            raise QuadratureError(
                f"oracle quadrature at delta={delta}: error bound {bound:.3e} too large")
        parts.append(total)
    return complex(parts[0], parts[1])


def gamma_quadrature_oracle(delta: float, spec: BathSpec,
                            eps_ladder=None, upper: float | None = None) -> complex:
    """Numerical Gamma(delta) by damped half-Fourier quadrature.

    The half-Fourier integral is regularized with exp(-eps tau), evaluated
    on a geometric eps ladder, and Richardson-extrapolated to eps -> 0
    (eliminating the O(eps) and O(eps^2) error terms).
    """
    wc = spec.omega_c
    if eps_ladder is None:
        eps_ladder = (wc / 10.0, wc / 20.0, wc / 40.0)
    if upper is None:
        upper = 50.0 * max(wc, spec.kt, abs(delta))
    f = [_oracle_single(delta, spec, eps, upper) for eps in eps_ladder]
    g1 = 2.0 * f[1] - f[0]
    g2 = 2.0 * f[2] - f[1]
    return (4.0 * g2 - g1) / 3.0


@dataclass(frozen=True)
class ConvergenceReport:
    n: int
    max_rel_change_dbar: float
    max_rel_change_fbar: float
    threshold: float

    @property
    def converged(self) -> bool:
        return max(self.max_rel_change_dbar, self.max_rel_change_fbar) <= self.threshold


def matsubara_convergence(spec: BathSpec, grid, threshold: float = 1e-6) -> ConvergenceReport:
    """Relative change of Dbar and fbar over a frequency grid when the
    Matsubara cutoff is doubled (N -> 2N)."""
    n = spec.matsubara_n
    grid = np.asarray(grid, dtype=float)
    d1 = np.array([dbar(w, spec, n) for w in grid])
    d2 = np.array([dbar(w, spec, 2 * n) for w in grid])
    f1 = np.array([fbar(w, spec, n) for w in grid])
    f2 = np.array([fbar(w, spec, 2 * n) for w in grid])
    dscale = np.maximum(np.abs(d2), 1e-12 * max(1.0, float(np.max(np.abs(d2)))))
    fscale = np.maximum(np.abs(f2), 1e-12 * max(1.0, float(np.max(np.abs(f2)))))
    return ConvergenceReport(
        n=n,
        max_rel_change_dbar=float(np.max(np.abs(d1 - d2) / dscale)),
        max_rel_change_fbar=float(np.max(np.abs(f1 - f2) / fscale)),
        threshold=threshold,
    )
