"""Closed-form solution for the two-separate-reservoir cascade.

When each transition couples to its own reservoir with the same resonant
Lorentzian structure function (width Gamma, strength Omega), the separable
kernel admits the exact transform

    b2bar(s) = 1/s - Omega^2 (s + Gamma) / (s (s + Gamma/2) [s(s + Gamma) + 2 Omega^2])

whose inverse is, with beta^2 = 2 Omega^2 - (Gamma/2)^2,

    b2(t) = e^{-Gamma t/2} [ Omega^2/beta^2
            + (1 - Omega^2/beta^2) cos(beta t) + (Gamma/(2 beta)) sin(beta t) ].

The implementation keeps everything real: the oscillatory (beta^2 > 0) and
overdamped (beta^2 < 0) branches are handled by functions of z = beta^2 tau^2
that are analytic through z = 0, so the critical boundary needs no special
casing and b2(0) = 1 holds exactly.

This module is the ground truth the numerical pipeline is validated against.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, RegimeError

_SERIES_CUT = 1e-6
POLE_TOL = 1e-12


class Regime(enum.Enum):
    STRONG = "strong"
    WEAK = "weak"
    CRITICAL = "critical"


def _cos_sqrt(z):
    """cos(sqrt(z)) continued through z <= 0 (cosh for negative z)."""
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    small = np.abs(z) < _SERIES_CUT
    zn = z[small]
    out[small] = 1.0 - zn / 2.0 + zn**2 / 24.0 - zn**3 / 720.0
    pos = ~small & (z > 0)
    out[pos] = np.cos(np.sqrt(z[pos]))
    neg = ~small & (z < 0)
    out[neg] = np.cosh(np.sqrt(-z[neg]))
    return out


def _sinc_sqrt(z):
    """sin(sqrt(z))/sqrt(z) continued through z <= 0 (sinh for negative z)."""
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    small = np.abs(z) < _SERIES_CUT
    zn = z[small]
    out[small] = 1.0 - zn / 6.0 + zn**2 / 120.0 - zn**3 / 5040.0
    pos = ~small & (z > 0)
    r = np.sqrt(z[pos])
    out[pos] = np.sin(r) / r
    neg = ~small & (z < 0)
    r = np.sqrt(-z[neg])
    out[neg] = np.sinh(r) / r
    return out


@dataclass(frozen=True)
class TwoReservoirClosedForm:
    """Exact resonant two-reservoir solution for given Gamma and Omega."""

    gamma: float
    omega_big: float

    @property
    def beta2(self) -> float:
        """2 Omega^2 - (Gamma/2)^2; sign selects the coupling regime."""
        return 2.0 * self.omega_big**2 - (self.gamma / 2.0) ** 2

    @property
    def regime(self) -> Regime:
        """Coupling regime; beta^2 = 0 is classified within a relative
        rounding tolerance (the exact boundary is unreachable in floats)."""
        scale = max((self.gamma / 2.0) ** 2, 2.0 * self.omega_big**2)
        if abs(self.beta2) <= 1e-12 * scale:
            return Regime.CRITICAL
        return Regime.STRONG if self.beta2 > 0 else Regime.WEAK

    def b2bar(self, s):
        """Laplace transform of the excited-state amplitude."""
        s = np.asarray(s, dtype=complex)
        g, ob = self.gamma, self.omega_big
        dens = (np.abs(s), np.abs(s + g / 2.0), np.abs(s * (s + g) + 2.0 * ob**2))
        for dn in dens:
            if np.any(dn < POLE_TOL):
                raise NumericalError(f"b2bar evaluated too close to a pole (s={s})")
        out = np.asarray(
            1.0 / s - ob**2 * (s + g) / (s * (s + g / 2.0) * (s * (s + g) + 2.0 * ob**2))
        )
        return out if out.ndim else complex(out)

    def b2(self, t):
        """Excited-state amplitude b2(t), real for t >= 0."""
        t = np.asarray(t, dtype=float)
        g, ob, b2sq = self.gamma, self.omega_big, self.beta2
        envelope = np.exp(-g * t / 2.0)
        out = np.asarray(
            envelope
            * (
                _cos_sqrt(b2sq * t**2)
                + (g * t / 2.0) * _sinc_sqrt(b2sq * t**2)
                + (ob**2 * t**2 / 2.0) * _sinc_sqrt(b2sq * (t / 2.0) ** 2) ** 2
            )
        )
        return out if out.ndim else float(out)

    def p2(self, t):
        """Excited-state population |b2(t)|^2."""
        return np.asarray(self.b2(t)) ** 2

    def b2_strong(self, t):
        """Damped sin^2 form valid for 2 Omega^2 > (Gamma/2)^2."""
        if self.beta2 <= 0:
            raise RegimeError("strong-coupling form requires 2 Omega^2 > (Gamma/2)^2")
        t = np.asarray(t, dtype=float)
        beta = np.sqrt(self.beta2)
        phi = np.arccos(self.gamma / (2.0 * np.sqrt(2.0) * self.omega_big))
        out = np.asarray(
            (2.0 * self.omega_big**2 / self.beta2)
            * np.sin(beta * t / 2.0 + phi) ** 2
            * np.exp(-self.gamma * t / 2.0)
        )
        return out if out.ndim else float(out)

    def b2_weak(self, t):
        """Damped sinh^2 form valid for 2 Omega^2 < (Gamma/2)^2."""
        if self.beta2 >= 0:
            raise RegimeError("weak-coupling form requires 2 Omega^2 < (Gamma/2)^2")
        t = np.asarray(t, dtype=float)
        gam = np.sqrt(-self.beta2)
        xi = np.arccosh(self.gamma / (2.0 * np.sqrt(2.0) * self.omega_big))
        out = np.asarray(
            (2.0 * self.omega_big**2 / (-self.beta2))
            * np.sinh(gam * t / 2.0 + xi) ** 2
            * np.exp(-self.gamma * t / 2.0)
        )
        return out if out.ndim else float(out)

    def f_bar(self, omega, s, omega0: float = 0.0):
        """Exact mode amplitude fbar(omega) at node s (reservoir centered at
        ``omega0``). ``omega`` may be complex, e.g. for contour checks."""
        s = complex(s)
        g, ob = self.gamma, self.omega_big
        delta = np.asarray(omega, dtype=complex) - omega0
        q = (s + 1j * delta) * (s + 1j * delta + g / 2.0) + ob**2
        denom = (s + g / 2.0) * (s * (s + g) + 2.0 * ob**2)
        if abs(denom) < POLE_TOL or np.any(np.abs(q) < POLE_TOL):
            raise NumericalError(f"f_bar evaluated too close to a pole (s={s})")
        out = np.asarray(
            -1j
            * ((s + g / 2.0) * (s + g) + ob**2)
            * (s + 1j * delta + g / 2.0)
            / (denom * q)
        )
        return out if out.ndim else complex(out)

    def kernel_trace_integral(self, s):
        """Closed form of the diagonal kernel integral, the rank-1 eigenvalue
        of the separable kernel in the wide-grid limit."""
        s = np.asarray(s, dtype=complex)
        g, ob = self.gamma, self.omega_big
        out = np.asarray((ob**2 / s) * (s + g) / ((s + g / 2.0) * (s + g) + ob**2))
        return out if out.ndim else complex(out)
