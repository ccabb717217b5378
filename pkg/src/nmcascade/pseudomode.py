"""Markovian pseudo-mode master equation for the Lorentzian single reservoir.

The structured reservoir is replaced by one damped harmonic oscillator (one
pseudo-mode per pole of the structure function). On the product space of the
three atomic levels and a truncated Fock ladder the state obeys

    drho/dt = -i [V, rho] - (Gamma/2) (ad.a rho + rho ad.a - 2 a rho ad)

with the excitation-conserving coupling

    V = Omega (ad |0><1| + a |1><0| + ad |1><2| + a |2><1|).

Starting from atom |2> and an empty mode, total excitation never exceeds 2,
so a Fock cutoff of 2 is exact; larger cutoffs are allowed for robustness
checks. Tracing out the mode gives the atomic populations used as the
independent oracle for the matrix method.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .errors import ConfigError, NumericalError


@dataclass(frozen=True)
class PseudomodeParams:
    omega_big: float
    gamma: float
    n_max: int = 2

    def __post_init__(self):
        if self.gamma < 0:
            raise ConfigError("pseudo-mode decay rate must be >= 0")
        if self.n_max < 2:
            raise ConfigError("Fock cutoff must be at least 2")

    @property
    def dim(self) -> int:
        return 3 * (self.n_max + 1)


def _operators(params: PseudomodeParams):
    """Coupling operator V and mode annihilation a on atom (x) mode."""
    nm = params.n_max + 1
    a_mode = np.diag(np.sqrt(np.arange(1, nm)), 1).astype(complex)
    lower01 = np.zeros((3, 3), dtype=complex)
    lower01[0, 1] = 1.0  # |0><1|
    lower12 = np.zeros((3, 3), dtype=complex)
    lower12[1, 2] = 1.0  # |1><2|
    eye_m = np.eye(nm, dtype=complex)
    a_full = np.kron(np.eye(3, dtype=complex), a_mode)
    adag = a_full.conj().T
    down = np.kron(lower01 + lower12, eye_m)
    v = params.omega_big * (adag @ down + a_full @ down.conj().T)
    return v, a_full


def initial_state(params: PseudomodeParams) -> np.ndarray:
    """Atom in |2>, mode empty."""
    psi = np.zeros(params.dim, dtype=complex)
    psi[2 * (params.n_max + 1)] = 1.0
    return np.outer(psi, psi.conj())


def lindblad_rhs(rho: np.ndarray, params: PseudomodeParams) -> np.ndarray:
    """Right-hand side of the master equation for a density matrix."""
    if rho.shape != (params.dim, params.dim):
        raise ValueError(f"state has shape {rho.shape}, expected {(params.dim, params.dim)}")
    v, a = _operators(params)
    num = a.conj().T @ a
    drho = -1j * (v @ rho - rho @ v)
    drho -= (params.gamma / 2.0) * (num @ rho + rho @ num - 2.0 * a @ rho @ a.conj().T)
    return drho


def atom_populations(rho: np.ndarray, params: PseudomodeParams) -> np.ndarray:
    """Diagonal of the reduced atomic density matrix (levels 0, 1, 2)."""
    nm = params.n_max + 1
    blocks = rho.reshape(3, nm, 3, nm)
    reduced = np.einsum("injn->ij", blocks)
    return reduced.diagonal().real.copy()


@dataclass(frozen=True)
class PseudomodeResult:
    t: np.ndarray
    p2: np.ndarray
    p1: np.ndarray
    p0: np.ndarray
    max_trace_error: float
    max_herm_error: float


def evolve(params: PseudomodeParams, t_grid: np.ndarray,
           rtol: float = 1e-10, atol: float = 1e-12) -> PseudomodeResult:
    """Integrate the master equation and return atomic populations over time."""
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid[0] != 0.0 or np.any(np.diff(t_grid) <= 0):
        raise ConfigError("time grid must ascend from 0")
    v, a = _operators(params)
    num = a.conj().T @ a
    adag = a.conj().T
    g_half = params.gamma / 2.0
    dim = params.dim

    def rhs(_t, y):
        rho = y.reshape(dim, dim)
        drho = -1j * (v @ rho - rho @ v)
        drho -= g_half * (num @ rho + rho @ num - 2.0 * a @ rho @ adag)
        return drho.reshape(-1)

    sol = solve_ivp(
        rhs, (0.0, float(t_grid[-1])), initial_state(params).reshape(-1),
        t_eval=t_grid, method="DOP853", rtol=rtol, atol=atol,
    )
    if not sol.success:
        raise NumericalError(f"master equation integration stopped at t={sol.t[-1]}: {sol.message}")

    p = np.empty((len(t_grid), 3))
    trace_err = 0.0
    herm_err = 0.0
    for i in range(len(t_grid)):
        rho = sol.y[:, i].reshape(dim, dim)
        herm_err = max(herm_err, float(np.abs(rho - rho.conj().T).max()))
        rho = 0.5 * (rho + rho.conj().T)
        trace_err = max(trace_err, abs(np.trace(rho).real - 1.0))
        p[i] = atom_populations(rho, params)
    return PseudomodeResult(
        t=t_grid, p2=p[:, 2], p1=p[:, 1], p0=p[:, 0],
        max_trace_error=trace_err, max_herm_error=herm_err,
    )
