"""Time evolution under a fixed generator: exact propagation through the
Liouvillian spectral decomposition, a fixed-step RK4 fallback, and
stationary-state / relaxation-timescale extraction.
"""

from dataclasses import dataclass, field

import numpy as np

from .operators import Superoperator, devectorize, vectorize

__all__ = [
    "Trajectory",
    "SpectralSummary",
    "IllConditionedError",
    "DegenerateStationaryState",
    "propagate_exact",
    "propagate_rk4",
    "liouvillian_spectrum",
    "stationary_state",
    "relaxation_timescale",
]


class IllConditionedError(RuntimeError):
    """Liouvillian eigenvectors too ill-conditioned for exact propagation."""


class DegenerateStationaryState(RuntimeError):
    """The generator's null space is not one-dimensional."""

    def __init__(self, multiplicity: int):
        super().__init__(f"stationary state not unique: null-space multiplicity {multiplicity}")
        self.multiplicity = multiplicity


@dataclass(frozen=True)
class Trajectory:
    """Time grid (ps) and density-matrix snapshots."""

    times: np.ndarray
    states: np.ndarray  # (n_times, dim, dim)
    method: str
    meta: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.states.shape[1]

    def populations(self) -> np.ndarray:
        return np.real(np.einsum("tii->ti", self.states))

    def max_trace_error(self) -> float:
        return float(np.max(np.abs(np.einsum("tii->t", self.states) - 1.0)))

    def max_hermiticity_error(self) -> float:
        return float(np.max(np.abs(self.states - np.conj(np.swapaxes(self.states, 1, 2)))))

    def min_eigenvalue(self) -> float:
        herm = (self.states + np.conj(np.swapaxes(self.states, 1, 2))) / 2.0
        return float(min(np.min(np.linalg.eigvalsh(h)) for h in herm))


def default_times(t_final: float, samples: int = 500) -> np.ndarray:
    return np.linspace(0.0, t_final, samples)


def propagate_exact(l: Superoperator, rho0: np.ndarray, times,
                    cond_limit: float = 1e8) -> Trajectory:
    """rho(t) = devec(V exp(Lambda t) V^-1 vec(rho0)).

    Raises IllConditionedError when the eigenvector matrix condition
    number exceeds cond_limit; callers should fall back to RK4.
    """
    times = np.asarray(times, dtype=float)
    lam, v = np.linalg.eig(l.matrix)
    cond = np.linalg.cond(v)
    if not np.isfinite(cond) or cond > cond_limit:
        raise IllConditionedError(
            f"Liouvillian eigenvector condition number {cond:.3e} exceeds {cond_limit:.1e}")
    c = np.linalg.solve(v, vectorize(rho0))
    states = np.empty((times.shape[0], l.dim, l.dim), dtype=complex)
    for i, t in enumerate(times):
        states[i] = devectorize(v @ (np.exp(lam * t) * c))
    return Trajectory(times=times, states=states, method="exact",
                      meta={"eigenvector_condition": float(cond)})


def propagate_rk4(l: Superoperator, rho0: np.ndarray, t_final: float, dt: float,
                  samples: int = 500, trace_drift_limit: float = 1e-6) -> Trajectory:
    """Classical fixed-step RK4 on vec(rho), sampled on a uniform grid.

    Aborts with a step-size diagnostic when the trace drifts beyond
    trace_drift_limit.
    """
    if dt <= 0:
        raise ValueError(f"dt must be > 0, got {dt}")
    times = default_times(t_final, samples)
    m = l.matrix
    y = vectorize(np.asarray(rho0, dtype=complex))
    states = np.empty((times.shape[0], l.dim, l.dim), dtype=complex)
    states[0] = devectorize(y)
    t = 0.0
    for i in range(1, times.shape[0]):
        span = times[i] - t
        nsub = max(1, int(np.ceil(span / dt - 1e-12)))
        h = span / nsub
        for _ in range(nsub):
            k1 = m @ y
            k2 = m @ (y + 0.5 * h * k1)
            k3 = m @ (y + 0.5 * h * k2)
            k4 = m @ (y + h * k3)
            y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t = times[i]
        states[i] = devectorize(y)
        drift = abs(np.trace(states[i]) - 1.0)
        if drift > trace_drift_limit:
            raise RuntimeError(
                f"RK4 trace drift {drift:.3e} at t={t:.4g} ps exceeds "
                f"{trace_drift_limit:.1e}; reduce dt (currently {dt:.4g} ps)")
    return Trajectory(times=times, states=states, method="rk4", meta={"dt": dt})


@dataclass(frozen=True)
class SpectralSummary:
    eigenvalues: np.ndarray
    gap: float                      # min |Re lambda| over decaying modes
    stationary: np.ndarray | None   # unique stationary state, if any
    null_multiplicity: int


def liouvillian_spectrum(l: Superoperator) -> SpectralSummary:
    lam = np.linalg.eigvals(l.matrix)
    scale = max(float(np.max(np.abs(l.matrix))), 1e-300)
    thr = 1e-9 * scale
    decaying = lam[lam.real < -thr]
    gap = float(np.min(-decaying.real)) if decaying.size else 0.0
    try:
        rho_ss = stationary_state(l)
        mult = 1
    except DegenerateStationaryState as exc:
        rho_ss = None
        mult = exc.multiplicity
    return SpectralSummary(eigenvalues=lam, gap=gap, stationary=rho_ss, null_multiplicity=mult)


def stationary_state(l: Superoperator, residual_tol: float = 1e-9) -> np.ndarray:
    """Unique trace-one Hermitian null vector of the generator."""
    m = l.matrix
    scale = max(float(np.max(np.abs(m))), 1e-300)
    _, sv, vh = np.linalg.svd(m)
    null_mask = sv <= 1e-9 * scale
    mult = int(np.sum(null_mask))
    if mult != 1:
        raise DegenerateStationaryState(mult)
    rho = devectorize(vh[-1].conj())
    rho = (rho + rho.conj().T) / 2.0
    tr = np.trace(rho).real
    if abs(tr) < 1e-12:
        raise DegenerateStationaryState(0)
    rho = rho / tr
    res = float(np.max(np.abs(m @ vectorize(rho))))
    if res > residual_tol * scale:
        raise RuntimeError(f"stationary-state residual {res:.3e} exceeds {residual_tol:.1e} * |L|")
    return rho


def relaxation_timescale(l: Superoperator) -> float:
    """1 / gap, with gap the smallest decay rate |Re lambda| among
    eigenvalues below the numerical-zero threshold. Units: ps."""
    lam = np.linalg.eigvals(l.matrix)
    scale = max(float(np.max(np.abs(l.matrix))), 1e-300)
    thr = 1e-9 * scale
    decaying = lam[lam.real < -max(thr, 1e-12)]
    if decaying.size == 0:
        raise RuntimeError("generator has no decaying mode; relaxation timescale undefined")
    gap = float(np.min(-decaying.real))
    return 1.0 / gap
