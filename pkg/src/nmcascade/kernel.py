"""Laplace-domain kernel assembly for the discretized integral equation.

At each Laplace node s the eliminated amplitude equation reads

    A(w_l) f(w_l) + integral dw_m B(w_l, w_m) f(w_m) = C,     C = -i/s

which is rescaled to the second-kind form f + K f = d with K = B/A and
d = C/A. The Nystrom discretization folds the quadrature weights into the
kernel matrix, K[l, m] = w_m K(w_l, w_m).

For Lorentzian profiles the frequency integral inside A is evaluated in
closed form by the residue at the profile's lower-half-plane pole,

    A(w) = s + i(w - omega2) + Omega1^2 / (s + Gamma1/2 + i(w + c1 - omega1 - omega2)),

valid on or off resonance. Other profiles fall back to adaptive quadrature.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from ._backend import kernels
from .errors import ConfigError, NumericalError
from .reservoir import (
    AtomParams,
    LorentzianProfile,
    ReservoirSpec,
    Topology,
    eval_r,
)

QUAD_RTOL = 1e-8


@dataclass(frozen=True)
class FrequencyGrid:
    """Uniform collocation grid over [center - halfwidth, center + halfwidth].

    ``weights`` are trapezoid quadrature weights (h at interior points, h/2 at
    the two endpoints).
    """

    points: np.ndarray
    weights: np.ndarray
    halfwidth: float
    center: float

    @classmethod
    def uniform(cls, center: float, halfwidth: float, n: int) -> "FrequencyGrid":
        if n < 2:
            raise ConfigError("frequency grid needs at least 2 points")
        if halfwidth <= 0:
            raise ConfigError("grid halfwidth must be positive")
        points = np.linspace(center - halfwidth, center + halfwidth, n)
        h = 2.0 * halfwidth / (n - 1)
        weights = np.full(n, h)
        weights[0] = weights[-1] = 0.5 * h
        return cls(points=points, weights=weights, halfwidth=halfwidth, center=center)

    @property
    def n(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class KernelSystem:
    """Discretized system f + K f = d at one Laplace node.

    ``k_matrix`` carries the quadrature weights; the identity is added by the
    solver. ``r2_weighted`` caches w_l R2(w_l), the row vector that turns a
    solution f into b2bar.
    """

    s: complex
    grid: FrequencyGrid
    a_vals: np.ndarray
    d_vals: np.ndarray
    k_matrix: np.ndarray
    r2_weighted: np.ndarray
    topology: Topology


def _check_node(spec: ReservoirSpec, s: complex) -> complex:
    s = complex(s)
    if s.real < spec.sigma_min():
        raise ConfigError(
            f"Laplace node s={s} has Re(s) below the admissible minimum "
            f"{spec.sigma_min():.3e}"
        )
    return s


def _both_lorentzian(spec: ReservoirSpec) -> bool:
    return isinstance(spec.r1, LorentzianProfile) and isinstance(spec.r2, LorentzianProfile)


def _a_integral_quad(spec: ReservoirSpec, atom: AtomParams, s: complex, omega: float) -> complex:
    """Adaptive-quadrature evaluation of the frequency integral in A."""
    shift = omega - atom.omega1 - atom.omega2

    def integrand_re(w):
        return (eval_r(spec, 1, w) / (s + 1j * (shift + w))).real

    def integrand_im(w):
        return (eval_r(spec, 1, w) / (s + 1j * (shift + w))).imag

    lo, hi = getattr(spec.r1, "support", (-np.inf, np.inf))
    total = 0.0 + 0.0j
    err = 0.0
    with warnings.catch_warnings():
        # poor accuracy becomes a NumericalError below; the warning is noise
        warnings.simplefilter("ignore", IntegrationWarning)
        for f in (integrand_re, integrand_im):
            val, e = quad(f, lo, hi, limit=400, epsabs=1e-12, epsrel=1e-10)
            total += val if f is integrand_re else 1j * val
            err += e
    if err > QUAD_RTOL * max(abs(total), 1.0):
        raise NumericalError(
            f"frequency integral in A did not converge at s={s}, omega={omega} "
            f"(estimated error {err:.3e})"
        )
    return total


def build_A(spec: ReservoirSpec, atom: AtomParams, s: complex, omega) -> np.ndarray | complex:
    """A(omega) at Laplace node s, vectorized over ``omega``.

    Uses the residue closed form for Lorentzian profiles, adaptive quadrature
    otherwise.
    """
    s = _check_node(spec, s)
    om = np.asarray(omega, dtype=float)
    if isinstance(spec.r1, LorentzianProfile):
        p = spec.r1
        a = np.asarray(
            s
            + 1j * (om - atom.omega2)
            + p.omega_big**2 / (s + 0.5 * p.gamma + 1j * (om + p.omega0 - atom.omega1 - atom.omega2)),
            dtype=np.complex128,
        )
    else:
        a = np.array(
            [s + 1j * (w - atom.omega2) + _a_integral_quad(spec, atom, s, w) for w in np.atleast_1d(om)]
        ).reshape(om.shape)
    return a if a.ndim else complex(a)


def assemble_batch(
    spec: ReservoirSpec,
    atom: AtomParams,
    grid: FrequencyGrid,
    s_nodes: np.ndarray,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Weighted kernel matrices, A values and rhs vectors for many nodes.

    Returns ``(k, a, d)`` with shapes (m, n, n), (m, n), (m, n). Kernel
    assembly at distinct nodes is independent; this is the hot loop that the
    compiled backend accelerates.
    """
    s_nodes = np.ascontiguousarray(s_nodes, dtype=np.complex128)
    for s in s_nodes:
        _check_node(spec, s)
    n, m = grid.n, len(s_nodes)
    out_k = np.empty((m, n, n), dtype=np.complex128)
    out_a = np.empty((m, n), dtype=np.complex128)
    out_d = np.empty((m, n), dtype=np.complex128)
    points = np.ascontiguousarray(grid.points)
    weights = np.ascontiguousarray(grid.weights)

    if _both_lorentzian(spec):
        p1, p2 = spec.r1, spec.r2
        if spec.topology is Topology.SINGLE:
            kernels.fill_single(
                points, weights, s_nodes,
                p1.gamma, p1.omega_big, p1.omega0,
                p2.gamma, p2.omega_big, p2.omega0,
                spec.alpha, atom.omega1, atom.omega2,
                out_k, out_a, out_d,
            )
        else:
            kernels.fill_two(
                points, weights, s_nodes,
                p1.gamma, p1.omega_big, p1.omega0,
                p2.gamma, p2.omega_big, p2.omega0,
                atom.omega1, atom.omega2,
                out_k, out_a, out_d,
            )
    else:
        r1 = eval_r(spec, 1, points)
        r2 = eval_r(spec, 2, points)
        pair_sum = points[:, None] + points[None, :] - atom.omega1 - atom.omega2
        for j, s in enumerate(s_nodes):
            a = build_A(spec, atom, s, points)
            out_a[j] = a
            out_d[j] = (-1j / s) / a
            if spec.topology is Topology.SINGLE:
                b = spec.alpha * (weights * r1)[None, :] / (s + 1j * pair_sum) + (weights * r2)[None, :] / s
            else:
                b = np.broadcast_to((weights * r2)[None, :] / s, (n, n))
            out_k[j] = b / a[:, None]

    bad = ~np.isfinite(out_a).all(axis=1)
    if bad.any():
        j = int(np.flatnonzero(bad)[0])
        l = int(np.flatnonzero(~np.isfinite(out_a[j]))[0])
        raise NumericalError(
            f"singular A at grid point omega={grid.points[l]} for s={s_nodes[j]}"
        )
    return out_k, out_a, out_d


def _system_from_batch(spec, grid, s, k, a, d) -> KernelSystem:
    r2w = grid.weights * np.asarray(eval_r(spec, 2, grid.points), dtype=float)
    return KernelSystem(
        s=complex(s), grid=grid, a_vals=a, d_vals=d, k_matrix=k,
        r2_weighted=r2w, topology=spec.topology,
    )


def build_kernel_single(spec: ReservoirSpec, atom: AtomParams, s: complex, grid: FrequencyGrid) -> KernelSystem:
    """Single-reservoir kernel system at one node."""
    if spec.topology is not Topology.SINGLE:
        raise ConfigError("spec topology is not single-reservoir")
    k, a, d = assemble_batch(spec, atom, grid, np.array([s]))
    return _system_from_batch(spec, grid, s, k[0], a[0], d[0])


def build_kernel_two(spec: ReservoirSpec, atom: AtomParams, s: complex, grid: FrequencyGrid) -> KernelSystem:
    """Two-reservoir (separable, rank-1) kernel system at one node."""
    if spec.topology is not Topology.TWO_RESERVOIRS:
        raise ConfigError("spec topology is not two-reservoir")
    k, a, d = assemble_batch(spec, atom, grid, np.array([s]))
    return _system_from_batch(spec, grid, s, k[0], a[0], d[0])


def build_system(spec: ReservoirSpec, atom: AtomParams, s: complex, grid: FrequencyGrid) -> KernelSystem:
    """Topology-dispatching convenience wrapper."""
    if spec.topology is Topology.SINGLE:
        return build_kernel_single(spec, atom, s, grid)
    return build_kernel_two(spec, atom, s, grid)


def build_rhs(spec: ReservoirSpec, atom: AtomParams, s: complex, grid: FrequencyGrid) -> np.ndarray:
    """Right-hand side d(w_l) = (-i/s)/A(w_l) on the grid."""
    s = _check_node(spec, s)
    a = build_A(spec, atom, s, grid.points)
    if not np.all(np.isfinite(a)):
        l = int(np.flatnonzero(~np.isfinite(np.atleast_1d(a)))[0])
        raise NumericalError(f"singular A at grid point omega={grid.points[l]} for s={s}")
    return (-1j / s) / a
