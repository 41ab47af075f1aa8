"""Phase surface evaluation and trajectory tracing for arbitrary positive p.

Solutions of the normalized traveling ODE live on the implicit surface

    -r X + a X^(p+1) + b X^(2p+1) + c Y + Z = 0

with X = u, Y = u', Z = u''.  For non-integer p the series method does not
apply, but the surface can still be sampled on a grid and trajectories can
be traced by integrating the ODE directly; both are exported as plain data
for external plotting or surface fitting.  Non-integer powers live on the
real branch, so trajectories must keep u >= 0; crossing zero truncates the
trajectory with a domain_exit flag rather than continuing on a complex
branch.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError, StepSizeInvalid
from .model import (
    GeneralizedOde,
    NormalizedParams,
    ProfilePoint,
    generalized_ode_rhs,
    real_power,
)

__all__ = [
    "BLOWUP_LIMIT",
    "SurfaceSpec",
    "Trajectory",
    "TrajectoryStatus",
    "surface_z",
    "sample_surface",
    "integrate_ode",
    "reconstruct_point_cloud",
]

BLOWUP_LIMIT = 1e12


@dataclass(frozen=True)
class SurfaceSpec:
    """A rectangular (X, Y) grid on which to sample the surface.

    Each range is (min, max, count) with count grid nodes; X must stay
    nonnegative when p is not an integer.
    """

    norm: NormalizedParams
    x_range: tuple[float, float, int]
    y_range: tuple[float, float, int]

    def __post_init__(self):
        for name, (lo, hi, count) in (("x", self.x_range), ("y", self.y_range)):
            if count < 2:
                raise ValueError(f"{name} grid needs at least 2 nodes, got {count}")
            if not lo < hi:
                raise ValueError(f"{name} range needs min < max, got [{lo}, {hi}]")
        if not self.norm.p_is_integer and self.x_range[0] < 0.0:
            raise DomainError(
                f"x_min = {self.x_range[0]} < 0 is outside the real-power domain "
                f"for p = {self.norm.p}"
            )


class TrajectoryStatus(str, Enum):
    COMPLETE = "complete"
    DOMAIN_EXIT = "domain_exit"
    BLOWUP = "blowup"


@dataclass(frozen=True)
class Trajectory:
    """Equally spaced ODE samples; step is the signed zeta increment used."""

    points: tuple[ProfilePoint, ...]
    step: float
    params: NormalizedParams | GeneralizedOde
    status: TrajectoryStatus


def surface_z(norm: NormalizedParams, x: float, y: float) -> float:
    """Z = r X - a X^(p+1) - b X^(2p+1) - c Y, the third surface coordinate."""
    p = norm.p
    return (
        norm.r * x
        - norm.a * real_power(x, p + 1.0)
        - norm.b * real_power(x, 2.0 * p + 1.0)
        - norm.c * y
    )


def sample_surface(spec: SurfaceSpec) -> np.ndarray:
    """Sample Z over the grid; rows are (x, y, z), row-major with X fastest."""
    x_lo, x_hi, nx = spec.x_range
    y_lo, y_hi, ny = spec.y_range
    xs = np.linspace(x_lo, x_hi, nx)
    ys = np.linspace(y_lo, y_hi, ny)
    rows = np.empty((nx * ny, 3))
    i = 0
    for y in ys:
        for x in xs:
            rows[i] = (x, y, surface_z(spec.norm, float(x), float(y)))
            i += 1
    return rows


def _rhs(params: NormalizedParams | GeneralizedOde, u: float, du: float) -> float:
    if isinstance(params, GeneralizedOde):
        return generalized_ode_rhs(
            params.nonlinearity,
            params.beta,
            params.p,
            params.gamma_over_mu,
            params.r,
            u,
            du,
        )
    # identical to the surface relation: u'' = Z(u, u'), so every stored
    # point lies on the surface by construction
    return surface_z(params, u, du)


def integrate_ode(
    params: NormalizedParams | GeneralizedOde,
    u0: float,
    du0: float,
    zeta_span: tuple[float, float],
    h: float,
) -> Trajectory:
    """Trace (u, u') with classical fixed-step RK4 over zeta_span.

    h is the step magnitude; it is rounded to the nearest value that splits
    the span into whole steps, and the sign follows the span direction.
    Each stored point carries u'' recomputed from the right-hand side.  The
    trajectory is truncated early with a status flag when u crosses zero
    under non-integer p (domain_exit) or |u| passes 1e12 (blowup).
    """
    if not h > 0.0:
        raise StepSizeInvalid(f"step must be positive, got {h}")
    z0, z1 = zeta_span
    if z1 == z0:
        raise StepSizeInvalid("empty integration span")
    n_steps = max(1, int(round(abs(z1 - z0) / h)))
    hs = (z1 - z0) / n_steps

    if isinstance(params, NormalizedParams):
        all_integer = params.p_is_integer
    else:
        all_integer = float(params.p).is_integer() and all(
            float(e).is_integer() for _, e in params.nonlinearity.terms
        )
    check_domain = not all_integer

    u, du = float(u0), float(du0)
    points = [ProfilePoint(zeta=z0, u=u, du=du, ddu=_rhs(params, u, du))]
    status = TrajectoryStatus.COMPLETE
    for i in range(n_steps):
        zeta = z0 + (i + 1) * hs
        try:
            k1u = du
            k1v = _rhs(params, u, du)
            k2u = du + 0.5 * hs * k1v
            k2v = _rhs(params, u + 0.5 * hs * k1u, du + 0.5 * hs * k1v)
            k3u = du + 0.5 * hs * k2v
            k3v = _rhs(params, u + 0.5 * hs * k2u, du + 0.5 * hs * k2v)
            k4u = du + hs * k3v
            k4v = _rhs(params, u + hs * k3u, du + hs * k3v)
            u_next = u + hs / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
            du_next = du + hs / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
            if check_domain and u_next < 0.0:
                status = TrajectoryStatus.DOMAIN_EXIT
                break
            if abs(u_next) > BLOWUP_LIMIT or abs(du_next) > BLOWUP_LIMIT:
                status = TrajectoryStatus.BLOWUP
                break
            ddu_next = _rhs(params, u_next, du_next)
        except DomainError:
            status = TrajectoryStatus.DOMAIN_EXIT
            break
        u, du = u_next, du_next
        points.append(ProfilePoint(zeta=zeta, u=u, du=du, ddu=ddu_next))
    return Trajectory(points=tuple(points), step=hs, params=params, status=status)


def reconstruct_point_cloud(
    params: NormalizedParams | GeneralizedOde,
    initial_conditions: list[tuple[float, float]],
    zeta_span: tuple[float, float],
    h: float,
) -> tuple[np.ndarray, tuple[TrajectoryStatus, ...]]:
    """Concatenated (u, u', u'') samples from one trajectory per initial condition.

    Truncation flags are collected per trajectory instead of aborting the
    batch; the cloud keeps the input ordering.  Suitable as scattered data
    for external surface reconstruction.
    """
    triples: list[tuple[float, float, float]] = []
    statuses: list[TrajectoryStatus] = []
    for u0, du0 in initial_conditions:
        traj = integrate_ode(params, u0, du0, zeta_span, h)
        statuses.append(traj.status)
        for pt in traj.points:
            triples.append((pt.u.real, pt.du.real, pt.ddu.real))
    cloud = np.asarray(triples, dtype=float).reshape(len(triples), 3)
    return cloud, tuple(statuses)
