"""Numerical inverse Laplace transforms.

Two methods:

* Bromwich Fourier series with Euler acceleration (default). For each time t
  the transform is sampled on the vertical ladder sigma_t +/- i pi k / t,
  k = 0..2M, the alternating series is summed, and the last M+1 partial sums
  are binomially averaged. The working abscissa is
  sigma_t = max(sigma, M ln(10) / (3 t)); the configured ``sigma`` is a floor
  that keeps every node clear of singularities near the imaginary axis.
  Both half-ladders are sampled, so complex-valued time signals invert
  correctly (for real signals the lower ladder is the conjugate and the
  formula reduces to the usual real-part series).

* Gaver-Stehfest, which samples on the real axis only, s = k ln(2) / t. It
  pairs naturally with the real block solve but fails on oscillatory
  signals; its order is capped at 16 to bound coefficient cancellation in
  double precision.

At t = 0 both methods substitute the initial-value limit s F(s) evaluated at
a single large real node.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import ConfigError, InversionError

SIGMA_FLOOR = 1e-3
STEHFEST_MAX_ORDER = 16
INITIAL_VALUE_NODE = 1e12
ACCEL_RTOL = 1e-3


class InversionMethod(enum.Enum):
    BROMWICH_FOURIER = "bromwich-fourier"
    GAVER_STEHFEST = "gaver-stehfest"


@dataclass(frozen=True)
class InversionConfig:
    """Inversion settings; ``terms`` is the Euler parameter M (node count
    4M+1 per time point) or the Stehfest order."""

    method: InversionMethod = InversionMethod.BROMWICH_FOURIER
    sigma: float | None = None
    terms: int = 24
    t_max: float = 10.0
    n_time: int = 200

    def __post_init__(self):
        if self.t_max <= 0:
            raise ConfigError("t_max must be positive")
        if self.n_time < 2:
            raise ConfigError("n_time must be at least 2")
        if self.terms < 8:
            raise ConfigError("inversion needs terms >= 8")
        if self.sigma is not None and self.sigma < SIGMA_FLOOR:
            raise ConfigError(f"sigma must be >= {SIGMA_FLOOR}")

    @property
    def sigma_floor(self) -> float:
        if self.sigma is not None:
            return self.sigma
        return max(SIGMA_FLOOR, 2.0 / self.t_max)

    def time_grid(self) -> np.ndarray:
        return np.linspace(0.0, self.t_max, self.n_time)


@lru_cache(maxsize=None)
def _euler_weights(m: int) -> np.ndarray:
    return np.array([math.comb(m, j) for j in range(m + 1)], dtype=float) / 2.0**m


def euler_nodes(t: float, terms: int, sigma_floor: float) -> tuple[float, np.ndarray]:
    """Ladder of 4M+1 Laplace nodes for time t: sigma, then k=1..2M up, then down."""
    if t <= 0:
        raise ValueError("euler_nodes requires t > 0")
    sigma = max(sigma_floor, terms * math.log(10.0) / (3.0 * t))
    k = np.arange(1, 2 * terms + 1)
    up = sigma + 1j * np.pi * k / t
    return sigma, np.concatenate(([sigma], up, up.conj()))


def euler_combine(values: np.ndarray, sigma: float, t: float, terms: int,
                  check: bool = True) -> np.ndarray | complex:
    """Euler-accelerated evaluation of the damped Fourier series.

    ``values`` holds the sampler output in ``euler_nodes`` order; extra
    trailing axes are combined independently. Summation order is fixed for
    reproducibility.
    """
    m = terms
    values = np.asarray(values)
    if not np.all(np.isfinite(values)):
        bad = int(np.flatnonzero(~np.isfinite(values).reshape(len(values), -1).all(axis=1))[0])
        raise InversionError(f"non-finite transform value at node index {bad} (t={t})")
    g0 = values[0]
    signs = np.where(np.arange(1, 2 * m + 1) % 2 == 0, 1.0, -1.0)
    shape_tail = (1,) * (values.ndim - 1)
    gk = signs.reshape(-1, *shape_tail) * (values[1 : 2 * m + 1] + values[2 * m + 1 :])
    partial = g0 + np.cumsum(gk, axis=0)
    sums = np.concatenate([g0[None, ...], partial], axis=0)  # S_0 .. S_2M
    w = _euler_weights(m).reshape(-1, *shape_tail)
    scale = math.exp(sigma * t) / (2.0 * t)
    est = scale * np.sum(w * sums[m : 2 * m + 1], axis=0)
    if check:
        w_prev = _euler_weights(m - 1).reshape(-1, *shape_tail)
        est_prev = scale * np.sum(w_prev * sums[m - 1 : 2 * m - 1], axis=0)
        resid = np.abs(est - est_prev).max()
        if resid > ACCEL_RTOL * max(1.0, np.abs(est).max()):
            raise InversionError(
                f"series acceleration stalled at t={t}", residual=float(resid)
            )
    return est if est.shape else complex(est)


@lru_cache(maxsize=None)
def _stehfest_coeffs(order: int) -> np.ndarray:
    n2 = order // 2
    zeta = np.zeros(order)
    for k in range(1, order + 1):
        acc = 0.0
        for j in range((k + 1) // 2, min(k, n2) + 1):
            acc += (
                j**n2
                * math.factorial(2 * j)
                / (
                    math.factorial(n2 - j)
                    * math.factorial(j)
                    * math.factorial(j - 1)
                    * math.factorial(k - j)
                    * math.factorial(2 * j - k)
                )
            )
        zeta[k - 1] = (-1.0) ** (k + n2) * acc
    return zeta


def stehfest_order(terms: int) -> int:
    order = min(terms, STEHFEST_MAX_ORDER)
    return order - (order % 2)


def _invert_initial_value(sampler) -> complex:
    s = np.array([INITIAL_VALUE_NODE], dtype=np.complex128)
    val = np.asarray(sampler(s))[0]
    if not np.isfinite(val):
        raise InversionError(f"non-finite transform value at node s={INITIAL_VALUE_NODE}")
    return complex(INITIAL_VALUE_NODE * val)


def invert(sampler, cfg: InversionConfig) -> tuple[np.ndarray, np.ndarray]:
    """Invert a Laplace-domain sampler on the config's time grid.

    ``sampler`` must accept a 1-D complex array of nodes and return the
    transform values elementwise. Returns ``(t, f)`` with complex ``f``.
    """
    t_grid = cfg.time_grid()
    out = np.empty(len(t_grid), dtype=np.complex128)
    for i, t in enumerate(t_grid):
        if t == 0.0:
            out[i] = _invert_initial_value(sampler)
        elif cfg.method is InversionMethod.BROMWICH_FOURIER:
            sigma, nodes = euler_nodes(t, cfg.terms, cfg.sigma_floor)
            out[i] = euler_combine(np.asarray(sampler(nodes)), sigma, t, cfg.terms)
        else:
            order = stehfest_order(cfg.terms)
            nodes = np.arange(1, order + 1) * (math.log(2.0) / t)
            vals = np.asarray(sampler(nodes.astype(np.complex128)))
            if not np.all(np.isfinite(vals)):
                bad = int(np.flatnonzero(~np.isfinite(vals))[0])
                raise InversionError(f"non-finite transform value at s={nodes[bad]}", s=nodes[bad])
            out[i] = (math.log(2.0) / t) * (_stehfest_coeffs(order) @ vals)
    return t_grid, out


@dataclass(frozen=True)
class PairResult:
    name: str
    max_error: float
    tol: float
    oscillatory: bool

    @property
    def passed(self) -> bool:
        return self.max_error <= self.tol


@dataclass(frozen=True)
class MethodReport:
    method: InversionMethod
    results: tuple[PairResult, ...] = field(default_factory=tuple)

    def passed(self) -> bool:
        """Overall verdict; oscillatory pairs are a documented limitation of
        the real-node method and do not gate it."""
        skip_osc = self.method is InversionMethod.GAVER_STEHFEST
        return all(r.passed for r in self.results if not (skip_osc and r.oscillatory))


_BATTERY = (
    ("exp-decay", lambda s: 1.0 / (s + 1.0), lambda t: np.exp(-t), False),
    ("sine", lambda s: 1.0 / (s * s + 1.0), np.sin, True),
    ("damped-cosine", lambda s: (s + 0.5) / ((s + 0.5) ** 2 + 4.0),
     lambda t: np.exp(-0.5 * t) * np.cos(2.0 * t), True),
    ("ramp-exp", lambda s: 1.0 / (s + 1.0) ** 2, lambda t: t * np.exp(-t), False),
    ("step", lambda s: 1.0 / s, lambda t: np.ones_like(t), False),
)


def validate_method(cfg: InversionConfig, tol: float | None = None) -> MethodReport:
    """Run the built-in transform-pair battery and report max error per pair.

    Default tolerance is method-appropriate: 1e-6 for the Euler-accelerated
    Fourier series, 2e-4 for order-16 Gaver-Stehfest (its truncation error on
    smooth pairs is a few 1e-5 absolute by late times even in exact
    arithmetic).
    """
    if tol is None:
        tol = 1e-6 if cfg.method is InversionMethod.BROMWICH_FOURIER else 2e-4
    results = []
    for name, transform, exact, oscillatory in _BATTERY:
        t, vals = invert(transform, cfg)
        err = float(np.abs(vals - exact(t)).max())
        results.append(PairResult(name=name, max_error=err, tol=tol, oscillatory=oscillatory))
    return MethodReport(method=cfg.method, results=tuple(results))
