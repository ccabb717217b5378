"""Pure-numpy kernel assembly, the fallback backend.

Same call signatures as the compiled core in ``_kernels_cy``; both fill
preallocated complex arrays for a batch of Laplace nodes. Profiles are passed
as (gamma, omega_big, center) triples of a Lorentzian.
"""

import numpy as np


def lorentz_values(om, gamma, omega_big, center):
    return (gamma * omega_big**2 / (2.0 * np.pi)) / ((om - center) ** 2 + (gamma / 2.0) ** 2)


def fill_single(points, weights, s_nodes, g1, ob1, c1, g2, ob2, c2,
                alpha, omega1, omega2, out_k, out_a, out_d):
    """Weighted single-reservoir kernel, A values and rhs for each node.

    out_k[j, l, m] = w_m * (alpha*R1(w_m)/(s + i(w_l + w_m - omega1 - omega2))
                            + R2(w_m)/s) / A(w_l)
    out_a[j, l]    = s + i(w_l - omega2) + ob1^2/(s + g1/2 + i(w_l + c1 - omega1 - omega2))
    out_d[j, l]    = (-i/s) / A(w_l)
    """
    om = np.asarray(points)
    wr1 = alpha * np.asarray(weights) * lorentz_values(om, g1, ob1, c1)
    wr2 = np.asarray(weights) * lorentz_values(om, g2, ob2, c2)
    pair_sum = om[:, None] + om[None, :] - omega1 - omega2
    for j, s in enumerate(np.asarray(s_nodes)):
        a = s + 1j * (om - omega2) + ob1**2 / (s + 0.5 * g1 + 1j * (om + c1 - omega1 - omega2))
        out_a[j] = a
        out_d[j] = (-1j / s) / a
        out_k[j] = (wr1[None, :] / (s + 1j * pair_sum) + wr2[None, :] / s) / a[:, None]


def fill_two(points, weights, s_nodes, g1, ob1, c1, g2, ob2, c2,
             omega1, omega2, out_k, out_a, out_d):
    """Two-reservoir variant: the kernel is separable, K = (w_m R2(w_m)/s) / A(w_l)."""
    om = np.asarray(points)
    wr2 = np.asarray(weights) * lorentz_values(om, g2, ob2, c2)
    for j, s in enumerate(np.asarray(s_nodes)):
        a = s + 1j * (om - omega2) + ob1**2 / (s + 0.5 * g1 + 1j * (om + c1 - omega1 - omega2))
        out_a[j] = a
        out_d[j] = (-1j / s) / a
        out_k[j] = np.outer(1.0 / a, wr2 / s)
