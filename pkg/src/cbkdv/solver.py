"""Numerical solution of the harmonic-balance system.

The translation symmetry zeta -> zeta + zeta0 acts on coefficients as
U_k -> lambda^k U_k (lambda = exp(zeta0)), so roots come in one-parameter
families and the raw Jacobian is singular at every nontrivial root.  The
solver removes that freedom by pinning U_1 to a fixed gauge value and
iterating over the remaining unknowns U_0, U_2..U_N.

SQUARE mode runs damped Newton on the square subsystem obtained by
dropping the harmonic paired with the pinned coefficient (m = 1); the
reported residual and the convergence test always cover the mode's full
equation range m = 0..N, so a subsystem root that leaves P_1 nonzero is
correctly reported as a failure to converge.  FULL mode runs Gauss-Newton
on all harmonics m = 0..(2p+1)N; when the line search can no longer
decrease the sum of squares (near a nonzero-residual optimum the
improvements drop below floating-point resolution), a Newton polish on
the normal-equations gradient pushes the gradient norm down to the
requested tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .model import NormalizedParams, ode_residual
from .series import (
    ExpSeries,
    HarmonicSystem,
    TruncationMode,
    build_system,
    evaluate_profile,
    _system_jacobian,
    _system_values,
)

__all__ = [
    "SolveOptions",
    "SeriesSolution",
    "VerifyReport",
    "solve",
    "verify_solution",
    "continuation_sweep",
]

_MAX_BACKTRACKS = 40
_POLISH_FD_STEP = 1e-7


@dataclass(frozen=True)
class SolveOptions:
    """Knobs for the gauge-fixed multi-start solve."""

    max_iters: int = 200
    tol_residual: float = 1e-12
    damping: float = 0.5
    gauge: complex = 1.0 + 0.0j
    starts: int = 32
    seed: int = 0

    def __post_init__(self):
        if not self.tol_residual > 0.0:
            raise ValueError("tol_residual must be positive")
        if not 0.0 < self.damping < 1.0:
            raise ValueError("damping must lie in (0, 1)")
        if self.starts < 1:
            raise ValueError("starts must be >= 1")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class SeriesSolution:
    """Outcome of one solve: coefficients plus convergence diagnostics.

    residual_inf is the infinity norm of the mode's equations at U; for
    FULL mode gradient_inf additionally reports the normal-equations
    gradient norm the Gauss-Newton iteration attained.
    """

    U: ExpSeries
    residual_inf: float
    mode: TruncationMode
    iterations: int
    converged: bool
    gradient_inf: float | None = None


@dataclass(frozen=True)
class VerifyReport:
    """The two residual measures of verify_solution."""

    residual_inf: float
    max_ode_residual: float


def _unknown_indices(order: int) -> list[int]:
    return [0] + list(range(2, order + 1))


def _assemble(uvec: np.ndarray, order: int, gauge: complex) -> np.ndarray:
    full = np.zeros(order + 1, dtype=complex)
    full[1] = gauge
    full[_unknown_indices(order)] = uvec
    return full


def _start_guess(seed: int, start: int, n: int) -> np.ndarray:
    # Counter-based generator: stream `start` is independent of how many
    # draws any other start makes, so results cannot depend on scheduling.
    rng = np.random.Generator(np.random.Philox(key=seed).jumped(start))
    radius = rng.uniform(0.0, 2.0, n)
    angle = rng.uniform(0.0, 2.0 * np.pi, n)
    return radius * np.exp(1j * angle)


@dataclass
class _StartResult:
    uvec: np.ndarray
    residual_inf: float
    iterations: int
    converged: bool
    gradient_inf: float | None = None


def _residual_inf(sys: HarmonicSystem, uvec: np.ndarray, gauge: complex) -> float:
    full = _assemble(uvec, sys.order, gauge)
    return float(np.max(np.abs(_system_values(sys, full))))


def _newton_square(
    sys: HarmonicSystem, opts: SolveOptions, uvec0: np.ndarray
) -> _StartResult:
    order = sys.order
    unknowns = _unknown_indices(order)
    rows = [m for m in range(order + 1) if m != 1]
    uvec = uvec0.copy()
    for it in range(opts.max_iters):
        full = _assemble(uvec, order, opts.gauge)
        values = _system_values(sys, full)
        res = float(np.max(np.abs(values)))
        if res <= opts.tol_residual:
            return _StartResult(uvec, res, it, True)
        F = values[rows]
        J = _system_jacobian(sys, full)[np.ix_(rows, unknowns)]
        try:
            step = np.linalg.solve(J, -F)
        except np.linalg.LinAlgError:
            return _StartResult(uvec, res, it, False)
        t = 1.0
        norm0 = float(np.linalg.norm(F))
        accepted = False
        for _ in range(_MAX_BACKTRACKS):
            trial = uvec + t * step
            trial_norm = float(
                np.linalg.norm(
                    _system_values(sys, _assemble(trial, order, opts.gauge))[rows]
                )
            )
            if trial_norm < norm0:
                accepted = True
                break
            t *= opts.damping
        if not accepted:
            return _StartResult(uvec, res, it, False)
        uvec = uvec + t * step
        if float(np.linalg.norm(t * step)) <= 1e-15 * (1.0 + float(np.linalg.norm(uvec))):
            # Landed on a subsystem root; the full-range residual decides.
            res = _residual_inf(sys, uvec, opts.gauge)
            return _StartResult(uvec, res, it + 1, res <= opts.tol_residual)
    res = _residual_inf(sys, uvec, opts.gauge)
    return _StartResult(uvec, res, opts.max_iters, res <= opts.tol_residual)


def _ls_gradient(sys: HarmonicSystem, uvec: np.ndarray, gauge: complex) -> np.ndarray:
    order = sys.order
    full = _assemble(uvec, order, gauge)
    F = _system_values(sys, full)
    J = _system_jacobian(sys, full)[:, _unknown_indices(order)]
    return J.conj().T @ F


def _polish_stationary(
    sys: HarmonicSystem, opts: SolveOptions, uvec: np.ndarray, budget: int
) -> tuple[np.ndarray, int, bool, float]:
    """Newton on the real form of the gradient map g(u) = J^H F = 0.

    The sum of squares itself is flat to rounding near the optimum, so the
    line search here measures progress on |g| instead.
    """

    def grad_real(x: np.ndarray) -> np.ndarray:
        g = _ls_gradient(sys, x[: len(x) // 2] + 1j * x[len(x) // 2 :], opts.gauge)
        return np.concatenate([g.real, g.imag])

    x = np.concatenate([uvec.real, uvec.imag])
    n = len(x)
    used = 0
    for it in range(budget):
        g = grad_real(x)
        gmax = float(np.max(np.abs(g)))
        if gmax <= opts.tol_residual:
            return x[: n // 2] + 1j * x[n // 2 :], used, True, gmax
        jac = np.empty((n, n))
        for j in range(n):
            xp = x.copy()
            xm = x.copy()
            xp[j] += _POLISH_FD_STEP
            xm[j] -= _POLISH_FD_STEP
            jac[:, j] = (grad_real(xp) - grad_real(xm)) / (2.0 * _POLISH_FD_STEP)
        try:
            step = np.linalg.solve(jac, -g)
        except np.linalg.LinAlgError:
            return x[: n // 2] + 1j * x[n // 2 :], used, False, gmax
        t = 1.0
        g0 = float(np.linalg.norm(g))
        accepted = False
        for _ in range(_MAX_BACKTRACKS):
            if float(np.linalg.norm(grad_real(x + t * step))) < g0:
                accepted = True
                break
            t *= opts.damping
        if not accepted:
            return x[: n // 2] + 1j * x[n // 2 :], used, False, gmax
        x = x + t * step
        used = it + 1
    g = grad_real(x)
    gmax = float(np.max(np.abs(g)))
    return x[: n // 2] + 1j * x[n // 2 :], used, gmax <= opts.tol_residual, gmax


def _gauss_newton_full(
    sys: HarmonicSystem, opts: SolveOptions, uvec0: np.ndarray
) -> _StartResult:
    order = sys.order
    unknowns = _unknown_indices(order)
    uvec = uvec0.copy()
    it = 0
    stalled = False
    while it < opts.max_iters:
        full = _assemble(uvec, order, opts.gauge)
        F = _system_values(sys, full)
        J = _system_jacobian(sys, full)[:, unknowns]
        grad = J.conj().T @ F
        gmax = float(np.max(np.abs(grad)))
        if gmax <= opts.tol_residual:
            res = float(np.max(np.abs(F)))
            return _StartResult(uvec, res, it, True, gmax)
        step, *_ = np.linalg.lstsq(J, -F, rcond=None)
        t = 1.0
        norm0 = float(np.linalg.norm(F))
        accepted = False
        for _ in range(_MAX_BACKTRACKS):
            trial_F = _system_values(
                sys, _assemble(uvec + t * step, order, opts.gauge)
            )
            if float(np.linalg.norm(trial_F)) < norm0:
                accepted = True
                break
            t *= opts.damping
        if not accepted:
            stalled = True
            break
        uvec = uvec + t * step
        it += 1
    if stalled or it >= opts.max_iters:
        uvec, extra, converged, gmax = _polish_stationary(
            sys, opts, uvec, max(1, opts.max_iters - it)
        )
        it += extra
        res = _residual_inf(sys, uvec, opts.gauge)
        return _StartResult(uvec, res, it, converged, gmax)
    res = _residual_inf(sys, uvec, opts.gauge)
    return _StartResult(uvec, res, it, False, None)


def solve(
    sys: HarmonicSystem,
    opts: SolveOptions = SolveOptions(),
    initial: ExpSeries | None = None,
) -> SeriesSolution:
    """Multi-start gauge-fixed solve of the harmonic system.

    Start 0 uses `initial` when given (its U_1 entry is replaced by the
    gauge value); every other start draws unknowns with uniform radius in
    [0, 2] and uniform angle from a per-start counter-based stream.  The
    best result by mode-range residual wins; ties go to the lowest start
    index.  No exception is raised on failure: the best effort comes back
    with converged=False.
    """
    if sys.order < 1:
        raise ValueError("gauge fixing requires order >= 1")
    n = len(_unknown_indices(sys.order))
    runner = (
        _newton_square if sys.mode is TruncationMode.SQUARE else _gauss_newton_full
    )

    best: _StartResult | None = None
    for start in range(opts.starts):
        if start == 0 and initial is not None:
            if initial.order != sys.order:
                raise ValueError(
                    f"initial guess order {initial.order} != system order {sys.order}"
                )
            guess = initial.array()[_unknown_indices(sys.order)]
        else:
            guess = _start_guess(int(opts.seed), start, n)
        result = runner(sys, opts, guess)
        if best is None or result.residual_inf < best.residual_inf:
            best = result
        if best.converged and best.residual_inf == 0.0:
            break

    assert best is not None
    full = _assemble(best.uvec, sys.order, opts.gauge)
    return SeriesSolution(
        U=ExpSeries.from_array(full),
        residual_inf=best.residual_inf,
        mode=sys.mode,
        iterations=best.iterations,
        converged=best.converged,
        gradient_inf=best.gradient_inf,
    )


_DEFAULT_VERIFY_SAMPLES = tuple(np.linspace(-5.0, 0.0, 11))


def verify_solution(
    sys: HarmonicSystem,
    U: ExpSeries,
    zeta_samples: Sequence[float] | None = None,
) -> VerifyReport:
    """Cross-check a coefficient set against the full harmonic range and the ODE.

    residual_inf is taken over the FULL-mode extension of the system
    regardless of sys.mode; max_ode_residual evaluates the profile at the
    sample points (default: 11 points on [-5, 0], inside the safe window)
    and measures the pointwise ODE residual.  For an exact full root the
    two vanish together.
    """
    samples = _DEFAULT_VERIFY_SAMPLES if zeta_samples is None else tuple(zeta_samples)
    full_sys = build_system(sys.norm, sys.order, TruncationMode.FULL)
    residual_inf = float(np.max(np.abs(_system_values(full_sys, U.array()))))
    max_ode = 0.0
    for zeta in samples:
        point = evaluate_profile(U, float(zeta))
        max_ode = max(max_ode, abs(ode_residual(sys.norm, point)))
    return VerifyReport(residual_inf=residual_inf, max_ode_residual=max_ode)


def continuation_sweep(
    base: NormalizedParams,
    vary: str,
    values: Sequence[float],
    order: int,
    mode: TruncationMode = TruncationMode.SQUARE,
    opts: SolveOptions = SolveOptions(),
) -> list[SeriesSolution]:
    """Solve along a parameter sweep, warm-starting from each previous solution.

    `vary` names one of the normalized parameters a, b, c, r.  Failures do
    not abort the sweep; each entry carries its own convergence flag.
    """
    if vary not in ("a", "b", "c", "r"):
        raise ValueError(f"unknown sweep parameter {vary!r}")
    if not values:
        raise ValueError("sweep needs at least one parameter value")
    solutions: list[SeriesSolution] = []
    warm: ExpSeries | None = None
    for value in values:
        norm = replace(base, **{vary: float(value)})
        sys = build_system(norm, order, mode)
        solution = solve(sys, opts, initial=warm)
        solutions.append(solution)
        warm = solution.U
    return solutions
