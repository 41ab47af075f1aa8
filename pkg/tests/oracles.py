"""Independent reference implementations used only to cross-check the library.

Everything here is deliberately written without the library's convolution
helpers: powers of the exponential series are expanded by brute-force
enumeration of index tuples, so agreement with the package is meaningful.
"""

import itertools


def brute_force_power_coeffs(coeffs, q, max_harmonic):
    """Coefficient list of (sum_k U_k e^{k zeta})^q by literal expansion.

    Enumerates all q-tuples (i_1..i_q) of term indices and bins the product
    U_{i_1} ... U_{i_q} at harmonic i_1 + ... + i_q.
    """
    out = [0j] * (max_harmonic + 1)
    for combo in itertools.product(range(len(coeffs)), repeat=q):
        m = sum(combo)
        if m > max_harmonic:
            continue
        prod = 1.0 + 0j
        for i in combo:
            prod *= coeffs[i]
        out[m] += prod
    return out


def brute_force_system(a, b, c, r, p, coeffs, max_harmonic):
    """P_m for m = 0..max_harmonic, assembled from brute-force powers."""
    up1 = brute_force_power_coeffs(coeffs, p + 1, max_harmonic)
    up2 = brute_force_power_coeffs(coeffs, 2 * p + 1, max_harmonic)
    values = []
    for m in range(max_harmonic + 1):
        u_m = coeffs[m] if m < len(coeffs) else 0j
        values.append((m * m + c * m - r) * u_m + a * up1[m] + b * up2[m])
    return values


def once_integrated_residual(params, u, du, ddu):
    """Residual of the once-integrated physical equation (d = 0), unnormalized.

    Only valid for integer p (complex powers of complex u).
    """
    p = int(params.p)
    return (
        -params.v * u
        + params.alpha / (p + 1) * u ** (p + 1)
        + params.beta / (2 * p + 1) * u ** (2 * p + 1)
        + params.gamma * du
        + params.mu * ddu
    )
