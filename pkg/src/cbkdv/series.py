"""Truncated exponential-series arithmetic and the harmonic-balance system.

A wave ansatz u(zeta) = sum_{k=0..N} U_k exp(k zeta) turns the normalized
traveling ODE into polynomial conditions on the coefficients: collecting
exp(m zeta) gives

    P_m(U) = (m^2 + c m - r) U_m  +  a (u^(p+1))_m  +  b (u^(2p+1))_m

where (.)_m is the m-th convolution coefficient of the powered series and
the linear term is present only for m <= N.  Equating P_m to zero over a
chosen harmonic range yields the system solved by the solver module.  Only
positive integer p is supported here; the powered series would otherwise
not be a finite exponential sum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import NonIntegerExponent, OrderMismatch, OverflowToInfinity
from .model import NormalizedParams, ProfilePoint

__all__ = [
    "SAFE_ZETA_MIN",
    "SAFE_ZETA_MAX",
    "ExpSeries",
    "TruncationMode",
    "HarmonicSystem",
    "series_product",
    "series_power",
    "build_system",
    "eval_system",
    "eval_jacobian",
    "evaluate_series",
    "evaluate_profile",
]

# Default window where exp(k zeta) stays meaningful for a truncated series
# of order <= 8; callers venturing outside opt in explicitly.
SAFE_ZETA_MIN = -20.0
SAFE_ZETA_MAX = 3.0

# exp argument beyond which doubles overflow
_EXP_ARG_LIMIT = 709.0


@dataclass(frozen=True)
class ExpSeries:
    """Coefficients U_0..U_N of a truncated series sum U_k exp(k zeta)."""

    coeffs: tuple[complex, ...]

    def __post_init__(self):
        coeffs = tuple(complex(c) for c in self.coeffs)
        if not coeffs:
            raise ValueError("a series needs at least the constant coefficient")
        if not all(math.isfinite(c.real) and math.isfinite(c.imag) for c in coeffs):
            raise ValueError("series coefficients must be finite")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def array(self) -> np.ndarray:
        return np.asarray(self.coeffs, dtype=complex)

    @staticmethod
    def from_array(values) -> "ExpSeries":
        return ExpSeries(tuple(complex(v) for v in values))


class TruncationMode(str, Enum):
    """Which harmonics are equated to zero.

    SQUARE keeps m = 0..N (as many equations as coefficients); FULL keeps
    every harmonic the nonlinear terms generate, m = 0..(2p+1)N, which is
    overdetermined for N >= 1 whenever a or b is nonzero.
    """

    SQUARE = "square"
    FULL = "full"


@dataclass(frozen=True)
class HarmonicSystem:
    """The polynomial system P_m(U) = 0 for fixed parameters and order."""

    norm: NormalizedParams
    order: int
    mode: TruncationMode

    @property
    def p_int(self) -> int:
        return int(self.norm.p)

    @property
    def max_harmonic(self) -> int:
        if self.mode is TruncationMode.SQUARE:
            return self.order
        return (2 * self.p_int + 1) * self.order

    @property
    def equation_count(self) -> int:
        return self.max_harmonic + 1


def build_system(
    norm: NormalizedParams, order: int, mode: TruncationMode = TruncationMode.SQUARE
) -> HarmonicSystem:
    """Assemble the harmonic system for an order-N ansatz.

    Rejects non-integer p: the powered series u^(p+1) is then no longer a
    finite exponential sum and the method does not apply.
    """
    if not norm.p_is_integer:
        raise NonIntegerExponent(
            f"series method requires integer p, got p = {norm.p}"
        )
    if order < 0:
        raise ValueError(f"order must be nonnegative, got {order}")
    return HarmonicSystem(norm=norm, order=order, mode=TruncationMode(mode))


def series_product(x: ExpSeries, y: ExpSeries, out_order: int) -> ExpSeries:
    """Cauchy product of two series, truncated to out_order.

    Exact (no truncation loss) when out_order >= x.order + y.order.
    """
    if out_order < 0:
        raise ValueError(f"out_order must be nonnegative, got {out_order}")
    full = np.convolve(x.array(), y.array())
    return ExpSeries.from_array(_truncate(full, out_order))


def series_power(x: ExpSeries, m: int, out_order: int) -> ExpSeries:
    """m-th power of a series by repeated convolution, truncated to out_order."""
    if m < 1:
        raise ValueError(f"power must be >= 1, got {m}")
    return ExpSeries.from_array(_power(x.array(), m, out_order))


def _truncate(values: np.ndarray, out_order: int) -> np.ndarray:
    out = np.zeros(out_order + 1, dtype=complex)
    n = min(len(values), out_order + 1)
    out[:n] = values[:n]
    return out


def _power(coeffs: np.ndarray, m: int, out_order: int) -> np.ndarray:
    # Truncating after each convolution is safe: coefficient m of a product
    # never depends on factors' coefficients above m.
    acc = np.ones(1, dtype=complex)
    for _ in range(m):
        acc = _truncate(np.convolve(acc, coeffs), out_order)
    return acc


def _linear_factors(sys: HarmonicSystem) -> np.ndarray:
    m = np.arange(sys.equation_count, dtype=float)
    return m * m + sys.norm.c * m - sys.norm.r


def _system_values(sys: HarmonicSystem, coeffs: np.ndarray) -> np.ndarray:
    """P_m for m = 0..max_harmonic at the given coefficient vector."""
    p = sys.p_int
    M = sys.max_harmonic
    lin = _linear_factors(sys)
    padded = np.zeros(M + 1, dtype=complex)
    padded[: len(coeffs)] = coeffs
    values = lin * padded
    if sys.norm.a != 0.0:
        values += sys.norm.a * _power(coeffs, p + 1, M)
    if sys.norm.b != 0.0:
        values += sys.norm.b * _power(coeffs, 2 * p + 1, M)
    return values

def _system_jacobian(sys: HarmonicSystem, coeffs: np.ndarray) -> np.ndarray:
    """d P_m / d U_k: the product rule gives d(u^q)_m/dU_k = q (u^(q-1))_{m-k}."""
    p = sys.p_int
    M = sys.max_harmonic
    n = len(coeffs)
    jac = np.zeros((M + 1, n), dtype=complex)
    lin = _linear_factors(sys)
    for k in range(min(n, M + 1)):
        jac[k, k] = lin[k]
    if sys.norm.a != 0.0:
        base = sys.norm.a * (p + 1) * _power(coeffs, p, M)
        for k in range(n):
            jac[k:, k] += base[: M + 1 - k]
    if sys.norm.b != 0.0:
        base = sys.norm.b * (2 * p + 1) * _power(coeffs, 2 * p, M)
        for k in range(n):
            jac[k:, k] += base[: M + 1 - k]
    return jac


def _check_order(sys: HarmonicSystem, series: ExpSeries) -> None:
    if series.order != sys.order:
        raise OrderMismatch(
            f"series order {series.order} does not match system order {sys.order}"
        )


def eval_system(sys: HarmonicSystem, series: ExpSeries) -> np.ndarray:
    """Evaluate (P_0, ..., P_M) at the given coefficients."""
    _check_order(sys, series)
    return _system_values(sys, series.array())


def eval_jacobian(sys: HarmonicSystem, series: ExpSeries) -> np.ndarray:
    """Analytic Jacobian of eval_system, shape (equation_count, order + 1)."""
    _check_order(sys, series)
    return _system_jacobian(sys, series.array())


def evaluate_series(series: ExpSeries, zeta: float) -> complex:
    """Sum U_k exp(k zeta) by Horner recurrence in w = exp(zeta)."""
    if series.order * zeta > _EXP_ARG_LIMIT:
        raise OverflowToInfinity(
            f"exp({series.order} * {zeta}) exceeds the floating-point range"
        )
    w = math.exp(zeta)
    acc = 0.0 + 0.0j
    for coeff in reversed(series.coeffs):
        acc = acc * w + coeff
    if not (math.isfinite(acc.real) and math.isfinite(acc.imag)):
        raise OverflowToInfinity(f"series evaluation overflowed at zeta = {zeta}")
    return acc


def evaluate_profile(series: ExpSeries, zeta: float) -> ProfilePoint:
    """Evaluate (u, u', u''); differentiating scales U_k by k and k^2."""
    ks = np.arange(len(series.coeffs))
    base = series.array()
    u = evaluate_series(series, zeta)
    du = evaluate_series(ExpSeries.from_array(ks * base), zeta)
    ddu = evaluate_series(ExpSeries.from_array(ks * ks * base), zeta)
    return ProfilePoint(zeta=zeta, u=u, du=du, ddu=ddu)
