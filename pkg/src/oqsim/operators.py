"""Dense complex operator types: Hermitian system Hamiltonians, eigen
systems with degeneracy bookkeeping, Bohr frequency clustering, density
matrices, and superoperators on column-major vectorized density matrices.

Vectorization convention: vec stacks columns (Fortran order), so
vec(A rho B) = (B^T kron A) vec(rho).
"""

from dataclasses import dataclass, field

import numpy as np

from .units import cm1_to_radps

__all__ = [
    "SiteHamiltonian",
    "EigenSystem",
    "BohrFrequencyTable",
    "Superoperator",
    "eigendecompose",
    "site_projector",
    "vectorize",
    "devectorize",
    "left_right_superoperator",
    "commutator_superoperator",
    "transform_superoperator",
    "check_density_matrix",
]


class EigenSolverError(RuntimeError):
    """Raised when the dense Hermitian eigensolver fails to converge."""


@dataclass(frozen=True)
class SiteHamiltonian:
    """System Hamiltonian in the site basis, internal units (rad/ps).

    The constructor symmetrizes the input as (M + M^dagger)/2 and records
    the maximum asymmetry of the raw matrix.
    """

    matrix: np.ndarray
    max_asymmetry: float = 0.0

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"Hamiltonian must be square, got shape {m.shape}")
        if m.shape[0] < 2:
            raise ValueError(f"Hamiltonian dimension must be >= 2, got {m.shape[0]}")
        asym = float(np.max(np.abs(m - m.conj().T)))
        sym = (m + m.conj().T) / 2.0
        sym.setflags(write=False)
        object.__setattr__(self, "matrix", sym)
        object.__setattr__(self, "max_asymmetry", asym)

    @classmethod
    def from_cm1(cls, matrix_cm1) -> "SiteHamiltonian":
        return cls(cm1_to_radps(np.asarray(matrix_cm1, dtype=complex)))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class EigenSystem:
    """Eigenvalues (ascending, rad/ps), unitary eigenvector matrix, and the
    partition of levels into degeneracy groups at tolerance tol_deg."""

    omegas: np.ndarray
    vectors: np.ndarray
    tol_deg: float
    groups: tuple = field(default=())

    @property
    def dim(self) -> int:
        return self.omegas.shape[0]

    def hamiltonian(self) -> np.ndarray:
        """Reconstruct H = U diag(omega) U^dagger."""
        return self.vectors @ np.diag(self.omegas) @ self.vectors.conj().T

    def projector(self, group) -> np.ndarray:
        """Projector onto the eigenspace of one degeneracy group."""
        cols = self.vectors[:, list(group)]
        return cols @ cols.conj().T


def default_tol_deg(omegas) -> float:
    return 1e-9 * max(1.0, float(np.max(np.abs(omegas))))


def eigendecompose(h: SiteHamiltonian, tol_deg: float | None = None) -> EigenSystem:
    """Diagonalize a site Hamiltonian.

    Eigenvalues come out ascending; each eigenvector's phase is fixed by
    making its largest-magnitude component real and positive, so output is
    deterministic across platforms.
    """
    try:
        omegas, vectors = np.linalg.eigh(h.matrix)
    except np.linalg.LinAlgError as exc:
        raise EigenSolverError(f"eigensolver failed on {h.dim}x{h.dim} Hamiltonian: {exc}") from exc
    vectors = np.array(vectors, dtype=complex)
    for n in range(vectors.shape[1]):
        k = int(np.argmax(np.abs(vectors[:, n])))
        phase = vectors[k, n] / abs(vectors[k, n])
        vectors[:, n] /= phase
    if tol_deg is None:
        tol_deg = default_tol_deg(omegas)
    groups = []
    current = [0]
    for n in range(1, len(omegas)):
        if omegas[n] - omegas[current[-1]] <= tol_deg:
            current.append(n)
        else:
            groups.append(tuple(current))
            current = [n]
    groups.append(tuple(current))
    omegas.setflags(write=False)
    vectors.setflags(write=False)
    return EigenSystem(omegas=omegas, vectors=vectors, tol_deg=tol_deg, groups=tuple(groups))


@dataclass(frozen=True)
class BohrFrequencyTable:
    """Clustered Bohr frequencies omega_mn = omega_m - omega_n.

    reps[c] is the representative value of cluster c; index[m, n] maps the
    ordered level pair (m, n) to its cluster. The cluster of 0 exists for
    any system (diagonal pairs) and its representative is exactly 0.0.
    """

    reps: np.ndarray
    index: np.ndarray
    tol_deg: float

    @property
    def n_clusters(self) -> int:
        return self.reps.shape[0]

    def cluster_of(self, value: float) -> int:
        c = int(np.argmin(np.abs(self.reps - value)))
        if abs(self.reps[c] - value) > max(self.tol_deg, 1e-12 * max(1.0, abs(value))):
            raise KeyError(f"no Bohr-frequency cluster at {value}")
        return c

    def mirror(self, c: int) -> int:
        """Cluster containing the negated representative."""
        return self.cluster_of(-float(self.reps[c]))


def bohr_frequencies(eig: EigenSystem) -> BohrFrequencyTable:
    dim = eig.dim
    values = np.subtract.outer(eig.omegas, eig.omegas)  # values[m, n] = w_m - w_n
    flat = values.flatten()
    order = np.argsort(flat, kind="stable")
    tol = eig.tol_deg
    cluster_id = np.empty(flat.shape, dtype=int)
    reps = []
    members = []
    for pos in order:
        v = flat[pos]
        if reps and v - members[-1][-1] <= tol:
            members[-1].append(v)
            cluster_id[pos] = len(reps) - 1
            reps[-1] = float(np.mean(members[-1]))
        else:
            members.append([v])
            reps.append(float(v))
            cluster_id[pos] = len(reps) - 1
    reps = np.array(reps)
    # diagonal pairs are exactly zero; pin that cluster's representative
    zero_c = cluster_id[0]  # flat element (0, 0)
    reps[zero_c] = 0.0
    index = cluster_id.reshape(dim, dim)
    reps.setflags(write=False)
    index.setflags(write=False)
    return BohrFrequencyTable(reps=reps, index=index, tol_deg=tol)


def site_projector(alpha: int, dim: int) -> np.ndarray:
    """S_alpha = |alpha><alpha| in the site basis."""
    if not 0 <= alpha < dim:
        raise IndexError(f"site index {alpha} out of range for dim {dim}")
    s = np.zeros((dim, dim), dtype=complex)
    s[alpha, alpha] = 1.0
    return s


def vectorize(rho: np.ndarray) -> np.ndarray:
    return np.asarray(rho).flatten(order="F")


def devectorize(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v)
    dim = int(round(np.sqrt(v.shape[0])))
    if dim * dim != v.shape[0]:
        raise ValueError(f"vector length {v.shape[0]} is not a perfect square")
    return v.reshape((dim, dim), order="F")


def left_right_superoperator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix of rho -> A rho B under column-major vectorization."""
    if a.shape != b.shape:
        raise ValueError("dimension mismatch between left and right factors")
    return np.kron(b.T, a)


def commutator_superoperator(h: np.ndarray) -> np.ndarray:
    """Matrix of rho -> -i [H, rho]."""
    eye = np.eye(h.shape[0])
    return -1j * (left_right_superoperator(h, eye) - left_right_superoperator(eye, h))


@dataclass(frozen=True)
class Superoperator:
    """dim^2 x dim^2 matrix acting on vectorized density matrices."""

    matrix: np.ndarray
    basis: str  # 'site' or 'eigen'

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        dim = int(round(np.sqrt(m.shape[0])))
        if m.ndim != 2 or m.shape[0] != m.shape[1] or dim * dim != m.shape[0]:
            raise ValueError(f"superoperator must be d^2 x d^2, got {m.shape}")
        if self.basis not in ("site", "eigen"):
            raise ValueError(f"unknown basis tag {self.basis!r}")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return int(round(np.sqrt(self.matrix.shape[0])))

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return devectorize(self.matrix @ vectorize(rho))


def transform_superoperator(l: Superoperator, u: np.ndarray) -> Superoperator:
    """Express a superoperator in the basis rho' = U^dagger rho U.

    For the eigenvector matrix U of H_s this converts a site-basis
    generator to the eigenbasis (and vice versa with U^dagger).
    """
    if u.shape[0] != l.dim:
        raise ValueError(f"dimension mismatch: superoperator dim {l.dim}, unitary {u.shape}")
    w = np.kron(u.conj(), u)
    new_basis = "eigen" if l.basis == "site" else "site"
    return Superoperator(matrix=w.conj().T @ l.matrix @ w, basis=new_basis)


def check_density_matrix(rho: np.ndarray, require_psd: bool = False,
                         herm_tol: float = 1e-10, trace_tol: float = 1e-10) -> np.ndarray:
    """Validate a density matrix; returns it as a complex array."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"density matrix must be square, got {rho.shape}")
    herm = float(np.max(np.abs(rho - rho.conj().T)))
    if herm > herm_tol:
        raise ValueError(f"density matrix not Hermitian: max asymmetry {herm:.3e}")
    tr = complex(np.trace(rho))
    if abs(tr - 1.0) > trace_tol:
        raise ValueError(f"density matrix trace {tr} differs from 1")
    if require_psd:
        lo = float(np.min(np.linalg.eigvalsh((rho + rho.conj().T) / 2)))
        if lo < -1e-12:
            raise ValueError(f"density matrix not positive semidefinite: min eigenvalue {lo:.3e}")
    return rho
