"""Compiled core vs pure-Python fallback: identical outputs, same contract."""

import importlib

import numpy as np
import pytest

from nmcascade import _kernels_py
from nmcascade._backend import BACKEND_NAME

compiled = pytest.importorskip("nmcascade._kernels_cy")


def random_inputs(seed, n=37, m=5):
    rng = np.random.default_rng(seed)
    points = np.sort(rng.uniform(70.0, 130.0, n))
    weights = rng.uniform(0.1, 0.5, n)
    s_nodes = (rng.uniform(0.05, 3.0, m) + 1j * rng.uniform(-20.0, 20.0, m)).astype(np.complex128)
    prof1 = (rng.uniform(0.5, 2.0), rng.uniform(0.1, 3.0), rng.uniform(95.0, 105.0))
    prof2 = (rng.uniform(0.5, 2.0), rng.uniform(0.1, 3.0), rng.uniform(95.0, 105.0))
    return points, weights, s_nodes, prof1, prof2


def alloc(m, n):
    return (
        np.empty((m, n, n), dtype=np.complex128),
        np.empty((m, n), dtype=np.complex128),
        np.empty((m, n), dtype=np.complex128),
    )


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_fill_single_equivalent(seed):
    points, weights, s_nodes, p1, p2 = random_inputs(seed)
    n, m = len(points), len(s_nodes)
    k_c, a_c, d_c = alloc(m, n)
    k_p, a_p, d_p = alloc(m, n)
    args = (points, weights, s_nodes, *p1, *p2, 1.3, 99.0, 101.0)
    compiled.fill_single(*args, k_c, a_c, d_c)
    _kernels_py.fill_single(*args, k_p, a_p, d_p)
    np.testing.assert_allclose(k_c, k_p, rtol=1e-12, atol=1e-18)
    np.testing.assert_allclose(a_c, a_p, rtol=1e-13)
    np.testing.assert_allclose(d_c, d_p, rtol=1e-13)


@pytest.mark.parametrize("seed", [3, 4])
def test_fill_two_equivalent(seed):
    points, weights, s_nodes, p1, p2 = random_inputs(seed)
    n, m = len(points), len(s_nodes)
    k_c, a_c, d_c = alloc(m, n)
    k_p, a_p, d_p = alloc(m, n)
    args = (points, weights, s_nodes, *p1, *p2, 99.0, 101.0)
    compiled.fill_two(*args, k_c, a_c, d_c)
    _kernels_py.fill_two(*args, k_p, a_p, d_p)
    np.testing.assert_allclose(k_c, k_p, rtol=1e-12, atol=1e-18)
    np.testing.assert_allclose(a_c, a_p, rtol=1e-13)
    np.testing.assert_allclose(d_c, d_p, rtol=1e-13)


def test_env_var_forces_fallback(monkeypatch):
    import nmcascade._backend as backend_module

    monkeypatch.setenv("NMCASCADE_PURE_PYTHON", "1")
    reloaded = importlib.reload(backend_module)
    try:
        assert reloaded.BACKEND_NAME == "python"
        assert reloaded.kernels.__name__.endswith("_kernels_py")
    finally:
        monkeypatch.delenv("NMCASCADE_PURE_PYTHON")
        importlib.reload(backend_module)
        assert backend_module.BACKEND_NAME == BACKEND_NAME
