"""Biorthogonal eigendecomposition of the discretized kernel.

The kernel operator acts on grid functions through the weighted matrix
M[l, m] = w_m K(w_l, w_m), and its adjoint with respect to the weighted
inner product <u, v> = sum_l w_l conj(u_l) v_l is D^-1 M^H D (D = diag(w)),
whose spectrum is the complex conjugate of M's. Right eigenfunctions phi_n
and adjoint eigenfunctions theta_n are paired and scaled so that
<theta_n, phi_m> = delta_nm, which turns the second-kind equation
f + K f = d into f_n = d_n / (1 + xi_n) per eigenvalue xi_n (the eigenvalue
multiplies the eigenfunction, so the resolvent denominator is 1 + xi).

Degenerate eigenvalue clusters are re-paired blockwise when possible and
flagged; clusters whose left/right pairing is numerically singular are marked
defective and the expansion path refuses them (the direct solve remains
available).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import NumericalError
from .kernel import KernelSystem
from .solver import AmplitudeSolution, b2bar_from_f

DEGENERACY_RTOL = 1e-8
RESONANCE_TOL = 1e-8
COMPLETENESS_RTOL = 1e-6
PAIRING_COND_LIMIT = 1e8


@dataclass(frozen=True)
class BiorthogonalSystem:
    """Eigenvalues with paired right/left eigenfunctions on the grid.

    ``degenerate`` marks members of near-degenerate clusters (excluded from
    strict pairwise biorthogonality assertions); ``defective`` marks clusters
    whose pairing could not be normalized.
    """

    xi: np.ndarray
    right_fns: np.ndarray  # columns phi_n
    left_fns: np.ndarray   # columns theta_n
    weights: np.ndarray
    degenerate: np.ndarray
    defective: np.ndarray
    cluster_id: np.ndarray

    @property
    def n(self) -> int:
        return len(self.xi)


def weighted_inner(weights: np.ndarray, u: np.ndarray, v: np.ndarray):
    """Grid inner product <u, v> = sum_l w_l conj(u_l) v_l (matrix columns ok)."""
    return (weights[:, None] * u.conj()).T @ v if u.ndim > 1 else weights @ (u.conj() * v)


def adjoint_matrix(system: KernelSystem) -> np.ndarray:
    """Matrix of the adjoint operator in the grid basis: D^-1 M^H D."""
    w = system.grid.weights
    return (system.k_matrix.conj().T * w[None, :]) / w[:, None]


def _clusters(xi: np.ndarray) -> np.ndarray:
    """Greedy clustering of sorted eigenvalues by the degeneracy gap."""
    radius = max(np.abs(xi).max(), np.finfo(float).tiny)
    gap = DEGENERACY_RTOL * radius
    ids = np.zeros(len(xi), dtype=int)
    order = np.argsort(np.abs(xi))
    assigned = np.full(len(xi), -1)
    nxt = 0
    for i in order:
        if assigned[i] >= 0:
            continue
        members = np.flatnonzero(np.abs(xi - xi[i]) < gap)
        members = members[assigned[members] < 0]
        assigned[members] = nxt
        nxt += 1
    ids[:] = assigned
    return ids


def decompose_matrix(k_matrix: np.ndarray, weights: np.ndarray) -> BiorthogonalSystem:
    """Eigendecomposition of a weighted kernel matrix with biorthogonal pairing."""
    if not np.all(np.isfinite(k_matrix)):
        raise NumericalError("kernel matrix has non-finite entries")
    xi, vl, vr = scipy.linalg.eig(k_matrix, left=True, right=True)
    order = np.lexsort((xi.imag, xi.real))
    xi, vl, vr = xi[order], vl[:, order], vr[:, order]

    # vl are Euclidean left eigenvectors of M; theta = vl / w are the adjoint
    # eigenfunctions, and <theta_n, phi_m>_w reduces to vl^H vr.
    theta = vl / weights[:, None]
    phi = vr.copy()

    cluster = _clusters(xi)
    degenerate = np.zeros(len(xi), dtype=bool)
    defective = np.zeros(len(xi), dtype=bool)
    theta_norm = np.sqrt(np.abs(np.einsum("l,ln->n", weights, np.abs(theta) ** 2)))
    phi_norm = np.sqrt(np.abs(np.einsum("l,ln->n", weights, np.abs(phi) ** 2)))
    for cid in np.unique(cluster):
        idx = np.flatnonzero(cluster == cid)
        block = weighted_inner(weights, theta[:, idx], phi[:, idx])
        if len(idx) > 1:
            degenerate[idx] = True
        # pairing cosines: defectiveness shows as a pairing block that is
        # singular relative to the eigenvector norms, regardless of its
        # absolute scale
        scaled = block / np.outer(theta_norm[idx], phi_norm[idx])
        smin = np.linalg.svd(scaled, compute_uv=False).min()
        if not np.isfinite(smin) or smin < 1.0 / PAIRING_COND_LIMIT:
            defective[idx] = True
            continue
        # theta' = theta inv(block)^H gives <theta'_n, phi_m> = I on the block
        theta[:, idx] = theta[:, idx] @ np.linalg.inv(block).conj().T
    return BiorthogonalSystem(
        xi=xi, right_fns=phi, left_fns=theta, weights=weights.copy(),
        degenerate=degenerate, defective=defective, cluster_id=cluster,
    )


def decompose(system: KernelSystem) -> BiorthogonalSystem:
    """Biorthogonal eigensystem of a kernel system's weighted matrix."""
    return decompose_matrix(system.k_matrix, system.grid.weights)


def biorthogonality_check(bio: BiorthogonalSystem) -> float:
    """Largest off-diagonal pairing magnitude across distinct clusters.

    Pairs inside a degenerate cluster are excluded (the orthogonality
    argument needs distinct eigenvalues); defective columns are skipped.
    """
    keep = ~bio.defective
    gram = weighted_inner(bio.weights, bio.left_fns[:, keep], bio.right_fns[:, keep])
    cid = bio.cluster_id[keep]
    same_cluster = cid[:, None] == cid[None, :]
    off = np.abs(gram - np.eye(gram.shape[0]))
    off[same_cluster] = 0.0
    return float(off.max()) if off.size else 0.0


def solve_by_expansion(system: KernelSystem, bio: BiorthogonalSystem) -> AmplitudeSolution:
    """Spectral solution f = sum_n [d_n / (1 + xi_n)] phi_n.

    Requires a complete, non-defective eigenbasis and no eigenvalue near -1
    (a resonance of the resolvent).
    """
    if bio.defective.any():
        bad = bio.xi[bio.defective]
        raise NumericalError(f"defective eigenvalue cluster(s) near {bad[:4]}; expansion refused")
    near = np.abs(bio.xi + 1.0) < RESONANCE_TOL
    if near.any():
        raise NumericalError(f"eigenvalue(s) within {RESONANCE_TOL} of -1: {bio.xi[near]}")
    d = system.d_vals
    d_n = weighted_inner(bio.weights, bio.left_fns, d)
    recon = bio.right_fns @ d_n
    resid = np.abs(recon - d).max()
    bound = COMPLETENESS_RTOL * np.abs(d).max()
    if resid > bound:
        raise NumericalError(
            f"eigenbasis incomplete: rhs reconstruction residual {resid:.3e} > {bound:.3e}"
        )
    f = bio.right_fns @ (d_n / (1.0 + bio.xi))
    return AmplitudeSolution(s=system.s, f_vals=f, b2bar=b2bar_from_f(system, f))
