"""Reservoir structure functions and atom parameters.

The decay dynamics of the cascade atom depends on the field only through the
two reservoir structure functions

    R_1(w) = rho(w) g_1(w)^2      (lower transition, 0 <-> 1)
    R_2(w) = rho(w) g_2(w)^2      (upper transition, 1 <-> 2)

plus a single frequency-independent coupling ratio ``alpha`` of order unity.
The worked high-Q cavity case uses the Lorentzian profile

    R(w) = (Gamma Omega^2 / 2 pi) / ((w - w0)^2 + (Gamma/2)^2)

whose total weight is Omega^2 and whose single lower-half-plane pole at
``w0 - i Gamma/2`` lets every frequency integral be done by residues.

Units: angular frequencies, scaled so the reference profile width Gamma is 1
unless configured otherwise.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import ConfigError


class Topology(enum.Enum):
    """How the two transitions share field modes."""

    SINGLE = "single"
    TWO_RESERVOIRS = "two-res"


@dataclass(frozen=True)
class AtomParams:
    """Transition angular frequencies of the three-level ladder.

    ``omega1`` is the 0 <-> 1 transition, ``omega2`` the 1 <-> 2 transition.
    """

    omega1: float
    omega2: float

    def __post_init__(self):
        if self.omega1 <= 0 or self.omega2 <= 0:
            raise ConfigError("atomic transition frequencies must be positive")


@dataclass(frozen=True)
class LorentzianProfile:
    """Lorentzian reservoir structure function.

    gamma     : full width Gamma of the line (> 0)
    omega_big : coupling strength Omega (>= 0); integral of R equals Omega^2
    omega0    : line center
    """

    gamma: float
    omega_big: float
    omega0: float = 0.0

    def __post_init__(self):
        if self.gamma <= 0:
            raise ConfigError("profile width gamma must be positive")
        if self.omega_big < 0:
            raise ConfigError("coupling strength omega_big must be >= 0")

    def value(self, omega):
        """R(omega), vectorized over ``omega``."""
        g, ob = self.gamma, self.omega_big
        return (g * ob**2 / (2.0 * np.pi)) / ((np.asarray(omega) - self.omega0) ** 2 + (g / 2.0) ** 2)


@dataclass(frozen=True)
class NumericalProfile:
    """Reservoir structure function given as a plain callable R(omega).

    Used for profiles without a known pole decomposition; frequency integrals
    over such a profile fall back to adaptive quadrature. ``support`` bounds
    where R is non-negligible (quadrature breakpoints).
    """

    fn: Callable[[np.ndarray], np.ndarray]
    support: tuple[float, float]

    def value(self, omega):
        return self.fn(np.asarray(omega))


Profile = Union[LorentzianProfile, NumericalProfile]


@dataclass(frozen=True)
class ReservoirSpec:
    """The pair of reservoir structure functions driving the dynamics.

    ``alpha`` is the dimensionless, frequency-independent ratio
    g_1(w) g_2(w') / (g_2(w) g_1(w')); it multiplies the photon-exchange part
    of the single-reservoir kernel and is of order unity (1 for equal dipole
    moments). For ``Topology.TWO_RESERVOIRS`` the exchange term is absent and
    ``alpha`` is unused.
    """

    r1: Profile
    r2: Profile
    alpha: float = 1.0
    topology: Topology = Topology.SINGLE

    def sigma_min(self) -> float:
        """Smallest admissible Re(s) for Laplace-domain evaluations.

        The right-hand side and kernel carry explicit 1/s factors, so nodes
        are kept a fixed fraction of the narrowest linewidth away from s = 0.
        """
        widths = [p.gamma for p in (self.r1, self.r2) if isinstance(p, LorentzianProfile)]
        return 1e-3 * (min(widths) if widths else 1.0)


def eval_r(spec: ReservoirSpec, which: int, omega):
    """Evaluate reservoir structure function ``which`` (1 or 2) at ``omega``."""
    if which == 1:
        return spec.r1.value(omega)
    if which == 2:
        return spec.r2.value(omega)
    raise ConfigError(f"reservoir index must be 1 or 2, got {which}")


def lorentzian_pole(profile: LorentzianProfile) -> tuple[complex, complex]:
    """Lower-half-plane pole of the Lorentzian R and the residue of R there.

    Returns ``(w0 - i Gamma/2, i Omega^2 / 2 pi)``. Closing the frequency
    integral downward (clockwise) gives -2 pi i times the residue, so
    ``integral of R = Omega^2``.
    """
    g, ob = profile.gamma, profile.omega_big
    pole = profile.omega0 - 0.5j * g
    residue = 1j * ob**2 / (2.0 * np.pi)
    return pole, residue
