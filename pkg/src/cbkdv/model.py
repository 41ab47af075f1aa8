"""Parameter models and residual evaluation for the compound Burgers-KdV equation.

The physical equation is

    u_t + alpha u^p u_x + beta u^(2p) u_x + gamma u_xx + mu u_xxx = 0

and the traveling-frame substitution u(x, t) = u(zeta), zeta = x - v t,
followed by one integration (constant d = 0) and division by mu, reduces it
to the normalized second-order ODE

    -r u + a u^(p+1) + b u^(2p+1) + c u' + u'' = 0

with a = alpha / (mu (p+1)), b = beta / (mu (2p+1)), c = gamma / mu,
r = v / mu.  Everything in this module is a pure function of immutable
inputs.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

from .errors import (
    DegenerateDispersion,
    DomainError,
    InvalidExponent,
    StencilOutOfDomain,
    StepSizeInvalid,
    UnsupportedIntegrationConstant,
)

__all__ = [
    "CbkdvParams",
    "GeneralizedNonlinearity",
    "GeneralizedOde",
    "NormalizedParams",
    "ProfilePoint",
    "normalize",
    "denormalize",
    "ode_residual",
    "pde_residual_traveling",
    "generalized_ode_rhs",
    "real_power",
]


def _is_integer(x: float) -> bool:
    return float(x).is_integer()


def real_power(base: float, exponent: float) -> float:
    """base**exponent on the real branch.

    Integer exponents are exact powers and accept any sign of base.
    Non-integer exponents require base >= 0; a negative base raises
    DomainError instead of silently picking a complex branch.
    """
    if _is_integer(exponent):
        return float(base) ** int(exponent)
    if base < 0.0:
        raise DomainError(
            f"negative base {base} with non-integer exponent {exponent}"
        )
    return float(base) ** float(exponent)


def _complex_power(u: complex, exponent: float) -> complex:
    """u**exponent, allowing complex u only for integer exponents."""
    if _is_integer(exponent):
        return complex(u) ** int(exponent)
    if u.imag != 0.0:
        raise DomainError(
            f"complex value {u} with non-integer exponent {exponent}"
        )
    return complex(real_power(u.real, exponent))


@dataclass(frozen=True)
class CbkdvParams:
    """Physical coefficients of the compound Burgers-KdV equation.

    alpha, beta: nonlinear advection coefficients of u^p u_x and u^(2p) u_x
    gamma: dissipation coefficient, mu: dispersion coefficient (must be
    nonzero), v: wave velocity, p: positive nonlinearity exponent,
    d: integration constant (stored; normalized operations require d = 0).
    """

    alpha: float
    beta: float
    gamma: float
    mu: float
    v: float
    p: float
    d: float = 0.0

    def __post_init__(self):
        if self.mu == 0.0:
            raise DegenerateDispersion("mu must be nonzero")
        if not self.p > 0.0:
            raise InvalidExponent(f"p must be positive, got {self.p}")


@dataclass(frozen=True)
class GeneralizedNonlinearity:
    """Finite sum of power terms P(u) = sum_j coeff_j * u**exp_j.

    terms holds (coefficient, exponent) pairs; exponents must be pairwise
    distinct and nonnegative.  An empty term list means P == 0.
    """

    terms: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        terms = tuple((float(c), float(e)) for c, e in self.terms)
        object.__setattr__(self, "terms", terms)
        exps = [e for _, e in terms]
        if any(e < 0.0 for e in exps):
            raise InvalidExponent("nonlinearity exponents must be >= 0")
        if len(set(exps)) != len(exps):
            raise InvalidExponent("nonlinearity exponents must be pairwise distinct")


@dataclass(frozen=True)
class NormalizedParams:
    """Reduced coefficients (a, b, c, r) of the normalized traveling ODE."""

    a: float
    b: float
    c: float
    r: float
    p: float

    def __post_init__(self):
        if not self.p > 0.0:
            raise InvalidExponent(f"p must be positive, got {self.p}")

    @property
    def p_is_integer(self) -> bool:
        return _is_integer(self.p)


@dataclass(frozen=True)
class ProfilePoint:
    """One sample (u, u', u'') of a wave profile at traveling coordinate zeta."""

    zeta: float
    u: complex
    du: complex
    ddu: complex

    def __post_init__(self):
        values = (complex(self.u), complex(self.du), complex(self.ddu))
        object.__setattr__(self, "u", values[0])
        object.__setattr__(self, "du", values[1])
        object.__setattr__(self, "ddu", values[2])
        if not (math.isfinite(self.zeta) and all(cmath.isfinite(v) for v in values)):
            raise ValueError("profile point components must be finite")


@dataclass(frozen=True)
class GeneralizedOde:
    """Mu-normalized traveling ODE data for the generalized nonlinearity.

    nonlinearity carries mu-divided coefficients alpha_j / mu; beta is
    beta / mu, gamma_over_mu is gamma / mu and r is v / mu.  The per-term
    integration factors 1/(exp+1) and 1/(2p+1) are applied by
    generalized_ode_rhs, mirroring how normalize() builds a and b.
    """

    nonlinearity: GeneralizedNonlinearity
    beta: float
    p: float
    gamma_over_mu: float
    r: float

    def __post_init__(self):
        if not self.p > 0.0:
            raise InvalidExponent(f"p must be positive, got {self.p}")


def normalize(params: CbkdvParams) -> NormalizedParams:
    """Reduce physical coefficients to the normalized (a, b, c, r) set.

    Requires d = 0: the normalized ODE absorbs the integration constant.
    """
    if params.d != 0.0:
        raise UnsupportedIntegrationConstant(
            f"normalized operations require d = 0, got d = {params.d}"
        )
    mu, p = params.mu, params.p
    return NormalizedParams(
        a=params.alpha / (mu * (p + 1.0)),
        b=params.beta / (mu * (2.0 * p + 1.0)),
        c=params.gamma / mu,
        r=params.v / mu,
        p=p,
    )


def denormalize(norm: NormalizedParams, mu: float) -> CbkdvParams:
    """Inverse of normalize for a chosen dispersion coefficient mu (d = 0)."""
    if mu == 0.0:
        raise DegenerateDispersion("mu must be nonzero")
    p = norm.p
    return CbkdvParams(
        alpha=norm.a * mu * (p + 1.0),
        beta=norm.b * mu * (2.0 * p + 1.0),
        gamma=norm.c * mu,
        mu=mu,
        v=norm.r * mu,
        p=p,
        d=0.0,
    )


def ode_residual(norm: NormalizedParams, pt: ProfilePoint) -> complex:
    """Residual -r u + a u^(p+1) + b u^(2p+1) + c u' + u'' at one point.

    Complex u is accepted only for integer p; for non-integer p the value
    must be real and nonnegative (real power branch).
    """
    p = norm.p
    u = pt.u
    return (
        -norm.r * u
        + norm.a * _complex_power(u, p + 1.0)
        + norm.b * _complex_power(u, 2.0 * p + 1.0)
        + norm.c * pt.du
        + pt.ddu
    )


def pde_residual_traveling(
    params: CbkdvParams,
    profile: Callable[[float], float],
    x: float,
    t: float,
    h: float,
    domain: tuple[float, float] | None = None,
) -> float:
    """Magnitude of the full PDE residual for a traveling profile u(zeta).

    u_t, u_x, u_xx, u_xxx are estimated with 2nd-order central differences
    on the profile (5-point stencil for u_xxx); for an exact solution the
    result decays like O(h^2).  `domain`, when given, is the profile's
    valid (lo, hi) range in zeta; a stencil point outside it raises
    StencilOutOfDomain.
    """
    if not h > 0.0:
        raise StepSizeInvalid(f"finite-difference step must be positive, got {h}")
    zeta = x - params.v * t
    reach = max(2.0 * h, abs(params.v) * h)
    if domain is not None:
        lo, hi = domain
        if zeta - reach < lo or zeta + reach > hi:
            raise StencilOutOfDomain(
                f"stencil [{zeta - reach}, {zeta + reach}] leaves domain [{lo}, {hi}]"
            )

    u_m2 = profile(zeta - 2.0 * h)
    u_m1 = profile(zeta - h)
    u_0 = profile(zeta)
    u_p1 = profile(zeta + h)
    u_p2 = profile(zeta + 2.0 * h)

    # d/dt of u(x - v t) via central difference in t
    u_t = (profile(zeta - params.v * h) - profile(zeta + params.v * h)) / (2.0 * h)
    u_x = (u_p1 - u_m1) / (2.0 * h)
    u_xx = (u_p1 - 2.0 * u_0 + u_m1) / (h * h)
    u_xxx = (u_p2 - 2.0 * u_p1 + 2.0 * u_m1 - u_m2) / (2.0 * h**3)

    residual = (
        u_t
        + params.alpha * real_power(u_0, params.p) * u_x
        + params.beta * real_power(u_0, 2.0 * params.p) * u_x
        + params.gamma * u_xx
        + params.mu * u_xxx
    )
    return abs(residual)


def generalized_ode_rhs(
    nl: GeneralizedNonlinearity,
    beta: float,
    p: float,
    gamma_over_mu: float,
    r: float,
    u: float,
    du: float,
) -> float:
    """u'' from the once-integrated, mu-normalized generalized equation.

    Coefficients arrive pre-divided by mu (nl terms hold alpha_j / mu,
    beta is beta / mu); the integration factors 1/(exp+1) and 1/(2p+1)
    are applied here:

        u'' = r u - sum_j coeff_j u^(exp_j+1) / (exp_j+1)
                  - beta u^(2p+1) / (2p+1) - (gamma/mu) u'
    """
    if not p > 0.0:
        raise InvalidExponent(f"p must be positive, got {p}")
    acc = r * u
    for coeff, exp in nl.terms:
        acc -= coeff * real_power(u, exp + 1.0) / (exp + 1.0)
    acc -= beta * real_power(u, 2.0 * p + 1.0) / (2.0 * p + 1.0)
    acc -= gamma_over_mu * du
    return acc
