"""Direct solution of the discretized integral equation at one Laplace node.

The primary path is a dense complex LU solve of (K + I) f = d. The real
2N x 2N block form, which splits the system into real and imaginary parts for
real s, is retained as a fidelity cross-check; both must agree to 1e-10 on
the real axis.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgWarning, get_lapack_funcs, lu_factor, lu_solve

from .errors import SingularSystemError
from .kernel import KernelSystem

RESIDUAL_RTOL = 1e-10
COND_LIMIT = 1e12


@dataclass(frozen=True)
class AmplitudeSolution:
    """Mode amplitudes f(w_l) and the excited-state transform b2bar at node s."""

    s: complex
    f_vals: np.ndarray
    b2bar: complex


def b2bar_from_f(system: KernelSystem, f_vals: np.ndarray) -> complex:
    """b2bar(s) = 1/s - (i/s) sum_l w_l R2(w_l) f(w_l)."""
    s = system.s
    return 1.0 / s - (1j / s) * complex(system.r2_weighted @ f_vals)


def _check_residual(mat, f, d, s):
    resid = np.abs(mat @ f - d).max()
    bound = RESIDUAL_RTOL * np.abs(d).max()
    if not np.isfinite(resid) or resid > bound:
        raise SingularSystemError(
            f"solve residual {resid:.3e} exceeds {bound:.3e} at s={s}", s=s
        )


def solve_complex(system: KernelSystem) -> AmplitudeSolution:
    """Dense LU solve of (K + I) f = d with a condition estimate guard."""
    mat = system.k_matrix.copy()
    n = mat.shape[0]
    mat.flat[:: n + 1] += 1.0
    anorm = np.abs(mat).sum(axis=1).max()
    try:
        with warnings.catch_warnings():
            # exact singularity surfaces as rcond = 0 below; the warning is noise
            warnings.simplefilter("ignore", LinAlgWarning)
            lu, piv = lu_factor(mat)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(f"singular system at s={system.s}: {exc}", s=system.s) from exc
    (gecon,) = get_lapack_funcs(("gecon",), (lu,))
    rcond, _ = gecon(lu, anorm, norm="I")
    if rcond == 0 or 1.0 / rcond > COND_LIMIT:
        raise SingularSystemError(
            f"system too ill-conditioned at s={system.s} (cond estimate "
            f"{np.inf if rcond == 0 else 1.0 / rcond:.3e})",
            s=system.s,
        )
    f = lu_solve((lu, piv), system.d_vals)
    _check_residual(mat, f, system.d_vals, system.s)
    return AmplitudeSolution(s=system.s, f_vals=f, b2bar=b2bar_from_f(system, f))


def solve_real_block(system: KernelSystem) -> AmplitudeSolution:
    """Real/imaginary block solve, valid for s on the real axis.

    Solves [[Kr + I, -Ki], [Ki, Kr + I]] (fr, fi) = (dr, di) and recombines
    f = fr + i fi. b2bar comes from the split scalar-product form
    Re b2bar = (1 + r.fi)/s, Im b2bar = -(r.fr)/s.
    """
    s = system.s
    if abs(s.imag) > 1e-14 * max(1.0, abs(s.real)):
        raise ValueError(f"real block solve requires a real Laplace node, got s={s}")
    n = system.grid.n
    kr, ki = system.k_matrix.real, system.k_matrix.imag
    block = np.zeros((2 * n, 2 * n))
    block[:n, :n] = kr
    block[:n, :n].flat[:: n + 1] += 1.0
    block[:n, n:] = -ki
    block[n:, :n] = ki
    block[n:, n:] = kr
    block[n:, n:].flat[:: n + 1] += 1.0
    rhs = np.concatenate([system.d_vals.real, system.d_vals.imag])
    try:
        sol = np.linalg.solve(block, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(f"singular block system at s={s}: {exc}", s=s) from exc
    f = sol[:n] + 1j * sol[n:]
    mat = system.k_matrix.copy()
    mat.flat[:: n + 1] += 1.0
    _check_residual(mat, f, system.d_vals, s)
    r = system.r2_weighted
    sr = s.real
    b2bar = (1.0 + float(r @ sol[n:])) / sr - 1j * float(r @ sol[:n]) / sr
    return AmplitudeSolution(s=s, f_vals=f, b2bar=b2bar)


def solve_batch(k_matrices: np.ndarray, d_vecs: np.ndarray, s_nodes: np.ndarray) -> np.ndarray:
    """Stacked LU solve of (K + I) f = d over the leading axis.

    Fixed evaluation order keeps results deterministic; each node's residual
    is verified against the same bound as ``solve_complex``.
    """
    m, n, _ = k_matrices.shape
    mats = k_matrices.copy()
    mats[:, np.arange(n), np.arange(n)] += 1.0
    try:
        f = np.linalg.solve(mats, d_vecs[..., None])[..., 0]
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(f"singular system in node batch: {exc}") from exc
    resid = np.abs(np.einsum("jlk,jk->jl", mats, f) - d_vecs).max(axis=1)
    bound = RESIDUAL_RTOL * np.abs(d_vecs).max(axis=1)
    bad = ~(resid <= bound)
    if bad.any():
        j = int(np.flatnonzero(bad)[0])
        raise SingularSystemError(
            f"solve residual {resid[j]:.3e} exceeds {bound[j]:.3e} at s={s_nodes[j]}",
            s=complex(s_nodes[j]),
        )
    return f
