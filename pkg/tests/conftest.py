"""Shared fixtures. The pipeline runs are expensive (tens of seconds), so the
canonical configurations are computed once per session and reused by the
module tests and the acceptance suite."""

import numpy as np
import pytest

from nmcascade import (
    AtomParams,
    FrequencyGrid,
    LorentzianProfile,
    ReservoirSpec,
    Topology,
)
from nmcascade.cli import run_compare, run_convergence, run_two_res
from nmcascade.config import SimulationConfig

OMEGA0 = 100.0


def canonical_spec(omega_big=1.0, gamma=1.0, topology=Topology.SINGLE, alpha=1.0):
    profile = LorentzianProfile(gamma=gamma, omega_big=omega_big, omega0=OMEGA0)
    return ReservoirSpec(r1=profile, r2=profile, alpha=alpha, topology=topology)


def canonical_atom():
    return AtomParams(omega1=OMEGA0, omega2=OMEGA0)


def canonical_grid(n=150, halfwidth=30.0):
    return FrequencyGrid.uniform(center=OMEGA0, halfwidth=halfwidth, n=n)


@pytest.fixture(scope="session")
def twores_default():
    """Two-reservoir pipeline at the reference defaults (N=150, W=30, Gamma=Omega=1)."""
    cfg = SimulationConfig(topology="two-res", n_time=101)
    numeric, analytic, dev = run_two_res(cfg)
    return numeric, analytic, dev


@pytest.fixture(scope="session")
def single_vs_pseudomode():
    """Matrix method vs Lindblad oracle for Omega in {0.3, 1, 5}."""
    out = {}
    for omega_big, n_time in [(0.3, 101), (1.0, 101), (5.0, 201)]:
        cfg = SimulationConfig(omega_coupling=omega_big, n_time=n_time)
        series, oracle_p2, dev = run_compare(cfg)
        out[omega_big] = (series, oracle_p2, dev)
    return out


@pytest.fixture(scope="session")
def convergence_rows():
    """Grid study at N = 50, 100, 150 against the pseudo-mode oracle."""
    return run_convergence(SimulationConfig(n_time=101), [50, 100, 150])


@pytest.fixture(scope="session")
def twores_omega5():
    """Two-reservoir run in the strongly oscillatory regime (Omega=5)."""
    cfg = SimulationConfig(topology="two-res", omega_coupling=5.0, n_time=201)
    numeric, analytic, dev = run_two_res(cfg)
    return numeric, analytic, dev


def local_maxima(t, y, floor=0.0):
    """Indices and parabola-refined times of strict interior maxima above floor."""
    idx = [i for i in range(1, len(y) - 1) if y[i] > y[i - 1] and y[i] > y[i + 1] and y[i] > floor]
    refined = []
    for i in idx:
        denom = y[i - 1] - 2.0 * y[i] + y[i + 1]
        shift = 0.0 if denom == 0 else 0.5 * (y[i - 1] - y[i + 1]) / denom
        refined.append(t[i] + shift * (t[1] - t[0]))
    return np.array(idx), np.array(refined)
