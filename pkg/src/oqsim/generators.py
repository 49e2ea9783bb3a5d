"""Master-equation generators built from an eigen system and a spectral
tensor: non-secular and secular Lindblad (jump operators, chi/Theta
coefficient tables, Lamb shift) and non-secular and secular Redfield.

Both non-secular forms are exact rewrites of the same Born-Markov
generator, so after transforming to a common basis they must agree to
round-off; the test suite enforces this.
"""

from dataclasses import dataclass

import numpy as np

from .bath import SpectralTensor
from .operators import (
    BohrFrequencyTable,
    EigenSystem,
    Superoperator,
    bohr_frequencies,
    commutator_superoperator,
    left_right_superoperator,
    site_projector,
)

__all__ = [
    "JumpOperatorSet",
    "CoefficientTables",
    "RedfieldTensor",
    "build_jump_operators",
    "build_coefficients",
    "build_lamb_shift",
    "build_lindblad",
    "build_redfield",
    "redfield_to_superoperator",
]


class InternalConsistencyError(RuntimeError):
    """A generator invariant failed during assembly (coefficient bug)."""


@dataclass(frozen=True)
class JumpOperatorSet:
    """F_alpha(w_c) = sum over pairs (m, n) in cluster c of
    Pi(w_n) S_alpha Pi(w_m), stored in the site basis."""

    table: BohrFrequencyTable
    ops: np.ndarray  # (n_sites, n_clusters, dim, dim)

    @property
    def n_sites(self) -> int:
        return self.ops.shape[0]

    @property
    def dim(self) -> int:
        return self.ops.shape[2]


def build_jump_operators(eig: EigenSystem, table: BohrFrequencyTable | None = None) -> JumpOperatorSet:
    """Decompose each site projector into eigen-operators per Bohr cluster."""
    dim = eig.dim
    if table is None:
        table = bohr_frequencies(eig)
    u = eig.vectors
    ncl = table.n_clusters
    ops = np.zeros((dim, ncl, dim, dim), dtype=complex)
    proj = [np.outer(u[:, n], u[:, n].conj()) for n in range(dim)]
    for alpha in range(dim):
        s = site_projector(alpha, dim)
        for m in range(dim):
            for n in range(dim):
                c = table.index[m, n]
                ops[alpha, c] += proj[n] @ s @ proj[m]
    ops.setflags(write=False)
    return JumpOperatorSet(table=table, ops=ops)


@dataclass(frozen=True)
class CoefficientTables:
    """chi(w, w') = Gamma*(w) + Gamma(w') and Theta(w, w') = Gamma*(w') - Gamma(w)
    per site, over all cluster pairs (first argument pairs with the
    daggered jump operator)."""

    chi: np.ndarray    # (n_sites, C, C)
    theta: np.ndarray  # (n_sites, C, C)


def build_coefficients(tensor: SpectralTensor, table: BohrFrequencyTable) -> CoefficientTables:
    if tensor.values.shape[1] != table.n_clusters:
        raise ValueError(
            f"spectral tensor covers {tensor.values.shape[1]} clusters, "
            f"table has {table.n_clusters}")
    g = tensor.values  # (n_sites, C)
    chi = g.conj()[:, :, None] + g[:, None, :]
    theta = g.conj()[:, None, :] - g[:, :, None]
    return CoefficientTables(chi=chi, theta=theta)


def build_lamb_shift(jumps: JumpOperatorSet, tensor: SpectralTensor,
                     secular: bool, herm_tol: float = 1e-10) -> np.ndarray:
    """Lamb-shift Hamiltonian H_ls = (i/2) sum (Gamma*(w) - Gamma(w'))
    F_alpha(w)^dag F_alpha(w').

    The coefficient pairs the conjugated Gamma with the daggered
    operator's frequency; this is the orientation under which H_ls comes
    out Hermitian and the generator matches the Redfield rewrite.
    Hermiticity is checked, not enforced.
    """
    dim = jumps.dim
    ncl = jumps.table.n_clusters
    g = tensor.values
    h_ls = np.zeros((dim, dim), dtype=complex)
    for alpha in range(jumps.n_sites):
        for a in range(ncl):
            fd = jumps.ops[alpha, a].conj().T
            bs = (a,) if secular else range(ncl)
            for b in bs:
                coeff = 0.5j * (np.conj(g[alpha, a]) - g[alpha, b])
                if coeff != 0:
                    h_ls += coeff * (fd @ jumps.ops[alpha, b])
    herm = float(np.max(np.abs(h_ls - h_ls.conj().T)))
    scale = max(1.0, float(np.max(np.abs(h_ls))))
    if herm > herm_tol * scale:
        raise InternalConsistencyError(
            f"Lamb shift not Hermitian: max asymmetry {herm:.3e} (scale {scale:.3e})")
    return h_ls


def build_lindblad(eig: EigenSystem, tensor: SpectralTensor, secular: bool) -> Superoperator:
    """Assemble the Lindblad-form generator in the site basis.

    L rho = -i [H_s + H_ls, rho]
            + sum chi(w, w') [F(w') rho F(w)^dag - (1/2){F(w)^dag F(w'), rho}],
    over all cluster pairs, or only the diagonal w' = w in secular mode.
    """
    dim = eig.dim
    table = bohr_frequencies(eig)
    jumps = build_jump_operators(eig, table)
    coeffs = build_coefficients(tensor, table)
    h_ls = build_lamb_shift(jumps, tensor, secular)

    eye = np.eye(dim)
    n2 = dim * dim
    l = np.zeros((n2, n2), dtype=complex)
    ncl = table.n_clusters
    for alpha in range(dim):
        for a in range(ncl):
            fa = jumps.ops[alpha, a]
            fd = fa.conj().T
            bs = (a,) if secular else range(ncl)
            for b in bs:
                chi = coeffs.chi[alpha, a, b]
                if chi == 0:
                    continue
                fb = jumps.ops[alpha, b]
                fdf = fd @ fb
                l += chi * (left_right_superoperator(fb, fd)
                            - 0.5 * left_right_superoperator(fdf, eye)
                            - 0.5 * left_right_superoperator(eye, fdf))
    h_eff = eig.hamiltonian() + h_ls
    l += commutator_superoperator(h_eff)
    return Superoperator(matrix=l, basis="site")


@dataclass(frozen=True)
class RedfieldTensor:
    """Four-index relaxation tensor R[s', s, m, n] in the eigenbasis."""

    tensor: np.ndarray
    eig: EigenSystem
    secular: bool

    @property
    def dim(self) -> int:
        return self.tensor.shape[0]


def build_redfield(eig: EigenSystem, tensor: SpectralTensor, secular: bool) -> RedfieldTensor:
    """Contract the spectral tensor with eigenbasis coupling matrix
    elements into the Redfield tensor.

    R_{s's,mn} = delta_{sn} sum_k Gp_{s'kkm} - Gp_{nss'm}
                 - Gm_{s'mns} + delta_{s'm} sum_k Gm_{ksnk},
    with Gp_{abcd} = sum_a' A[a',ab] A[a',cd] Gamma(w_dc) and
    Gm_{abcd} = sum_a' A[a',ab] A[a',cd] Gamma*(w_cd).
    """
    dim = eig.dim
    table = bohr_frequencies(eig)
    u = eig.vectors
    # A[alpha, a, b] = <a|S_alpha|b> = conj(U[alpha, a]) U[alpha, b]
    a_mat = u.conj()[:, :, None] * u[:, None, :]
    # per-pair Gamma values looked up through the cluster table
    gm = np.empty((dim, dim, dim), dtype=complex)  # gm[alpha, a, b] = Gamma_alpha(w_ab)
    for alpha in range(dim):
        gm[alpha] = tensor.values[alpha][table.index]
    gc = gm.conj()

    # delta_{sn} sum_k Gp_{s'kkm}: P1[s', m]
    p1 = np.einsum("apk,akm,amk->pm", a_mat, a_mat, gm)
    # delta_{s'm} sum_k Gm_{ksnk}: P2[s, n]
    p2 = np.einsum("aks,ank,ank->sn", a_mat, a_mat, gc)
    # Gp_{nss'm} with Gamma(w_{m s'})
    t2 = np.einsum("ans,apm,amp->psmn", a_mat, a_mat, gm)
    # Gm_{s'mns} with Gamma*(w_{ns})
    t3 = np.einsum("apm,ans,ans->psmn", a_mat, a_mat, gc)

    eye = np.eye(dim)
    r = (np.einsum("sn,pm->psmn", eye, p1)
         - t2 - t3
         + np.einsum("pm,sn->psmn", eye, p2))

    if secular:
        w = eig.omegas
        gaps = np.subtract.outer(w, w)  # gaps[a, b] = w_a - w_b
        keep = np.abs(gaps[:, :, None, None] - gaps[None, None, :, :]) <= eig.tol_deg
        r = np.where(keep, r, 0.0)
    r.setflags(write=False)
    return RedfieldTensor(tensor=r, eig=eig, secular=secular)


def redfield_to_superoperator(red: RedfieldTensor) -> Superoperator:
    """Map the Redfield tensor plus the coherent -i w_{s's} diagonal onto a
    dim^2 x dim^2 superoperator in the eigenbasis (column-major vec)."""
    dim = red.dim
    n2 = dim * dim
    w = red.eig.omegas
    l = np.zeros((n2, n2), dtype=complex)
    for sp in range(dim):
        for s in range(dim):
            row = sp + dim * s
            l[row, row] += -1j * (w[sp] - w[s])
            for m in range(dim):
                for n in range(dim):
                    l[row, m + dim * n] -= red.tensor[sp, s, m, n]
    return Superoperator(matrix=l, basis="eigen")
