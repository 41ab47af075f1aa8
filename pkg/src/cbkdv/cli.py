"""Command-line interface.

Subcommands: normalize, solve, verify, surface, trace, profile.  Structured
solutions go to JSON (complex numbers as [re, im] pairs); grids and curves
go to CSV with 17-significant-digit decimal floats, which parse back to
bit-identical doubles.  Exit codes: 0 success, 2 invalid usage or domain
error, 3 no convergence / residual above tolerance, so shell pipelines can
tell "bad input" from "no wave found".
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence, TextIO

import numpy as np

from .errors import CbkdvError
from .geometry import SurfaceSpec, integrate_ode, sample_surface
from .model import CbkdvParams, NormalizedParams, normalize
from .series import (
    SAFE_ZETA_MAX,
    SAFE_ZETA_MIN,
    ExpSeries,
    TruncationMode,
    build_system,
    evaluate_profile,
)
from .solver import SolveOptions, solve, verify_solution

__all__ = ["main"]

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NO_CONVERGENCE = 3

DEFAULT_SEED = 0
DEFAULT_VERIFY_TOL = 1e-9


def fmt(x: float) -> str:
    """17 significant digits: enough to reproduce the double exactly."""
    return format(float(x), ".17g")


def _parse_grid(text: str) -> tuple[float, float, int]:
    """min:max:count with count grid nodes (not intervals)."""
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected min:max:count, got {text!r}")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    return lo, hi, count


def _parse_span(text: str) -> tuple[float, float]:
    parts = text.split(":")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected start:end, got {text!r}")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _parse_complex(text: str) -> complex:
    try:
        return complex(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _default_seed() -> int:
    env = os.environ.get("CBKDV_SEED")
    if env is None:
        return DEFAULT_SEED
    try:
        return int(env)
    except ValueError:
        raise CbkdvError(f"CBKDV_SEED must be an integer, got {env!r}") from None


def _physical_group(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--alpha", type=float, help="u^p u_x coefficient")
    parser.add_argument("--beta", type=float, help="u^(2p) u_x coefficient")
    parser.add_argument("--gamma", type=float, help="dissipation coefficient")
    parser.add_argument("--mu", type=float, help="dispersion coefficient")
    parser.add_argument("--v", type=float, help="wave velocity")


def _normalized_group(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--a", type=float, help="normalized u^(p+1) coefficient")
    parser.add_argument("--b", type=float, help="normalized u^(2p+1) coefficient")
    parser.add_argument("--c", type=float, help="normalized u' coefficient")
    parser.add_argument("--r", type=float, help="normalized velocity v/mu")


def _resolve_params(args) -> NormalizedParams:
    """Build NormalizedParams from either the physical or the normalized group.

    The two groups are mutually exclusive per invocation.
    """
    physical = {
        "alpha": args.alpha,
        "beta": args.beta,
        "gamma": args.gamma,
        "mu": args.mu,
        "v": args.v,
    }
    normalized = {"a": args.a, "b": args.b, "c": args.c, "r": args.r}
    phys_given = [k for k, v in physical.items() if v is not None]
    norm_given = [k for k, v in normalized.items() if v is not None]
    if phys_given and norm_given:
        raise CbkdvError(
            "physical (--alpha/--beta/--gamma/--mu/--v) and normalized "
            "(--a/--b/--c/--r) parameters are mutually exclusive"
        )
    if phys_given:
        missing = [k for k, v in physical.items() if v is None]
        if missing:
            raise CbkdvError(f"physical parameter group incomplete, missing {missing}")
        return normalize(
            CbkdvParams(
                alpha=args.alpha,
                beta=args.beta,
                gamma=args.gamma,
                mu=args.mu,
                v=args.v,
                p=args.p,
            )
        )
    return NormalizedParams(
        a=args.a if args.a is not None else 0.0,
        b=args.b if args.b is not None else 0.0,
        c=args.c if args.c is not None else 0.0,
        r=args.r if args.r is not None else 0.0,
        p=args.p,
    )


def _open_output(path: str | None):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline="\n"), True


def _write_rows(stream: TextIO, header: list[str], rows, fmt_json: bool, trailer=None):
    if fmt_json:
        records = [dict(zip(header, map(float, row))) for row in rows]
        doc = {"rows": records}
        if trailer:
            doc.update(trailer)
        stream.write(json.dumps(doc, indent=2) + "\n")
        return
    stream.write(",".join(header) + "\n")
    for row in rows:
        stream.write(",".join(fmt(v) for v in row) + "\n")
    if trailer:
        for key, value in trailer.items():
            stream.write(f"# {key}: {value}\n")


def cmd_normalize(args) -> int:
    params = CbkdvParams(
        alpha=args.alpha,
        beta=args.beta,
        gamma=args.gamma,
        mu=args.mu,
        v=args.v,
        p=args.p,
        d=args.d,
    )
    norm = normalize(params)
    print(f"a={fmt(norm.a)} b={fmt(norm.b)} c={fmt(norm.c)} r={fmt(norm.r)}")
    return EXIT_OK


def _solution_document(norm, order, mode, opts, solution, report) -> dict:
    return {
        "params": {
            "a": norm.a,
            "b": norm.b,
            "c": norm.c,
            "r": norm.r,
            "p": norm.p,
        },
        "order": order,
        "mode": mode.value,
        "gauge": [opts.gauge.real, opts.gauge.imag],
        "coefficients": [[u.real, u.imag] for u in solution.U.coeffs],
        "residual_inf": solution.residual_inf,
        "residual_inf_full": report.residual_inf,
        "ode_residual_max": report.max_ode_residual,
        "converged": solution.converged,
        "iterations": solution.iterations,
        "seed": int(opts.seed),
    }


def cmd_solve(args) -> int:
    norm = _resolve_params(args)
    mode = TruncationMode(args.mode)
    sys_ = build_system(norm, args.order, mode)
    seed = args.seed if args.seed is not None else _default_seed()
    opts = SolveOptions(
        max_iters=args.max_iters,
        tol_residual=args.tol,
        gauge=args.gauge,
        starts=args.starts,
        seed=seed,
    )
    solution = solve(sys_, opts)
    report = verify_solution(sys_, solution.U)
    doc = _solution_document(norm, args.order, mode, opts, solution, report)
    out = args.output or "solution.json"
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(json.dumps(doc, indent=2) + "\n")
    print(
        f"solve: mode={mode.value} order={args.order} "
        f"converged={'yes' if solution.converged else 'no'} "
        f"residual_inf={fmt(solution.residual_inf)} "
        f"iterations={solution.iterations} output={out}"
    )
    return EXIT_OK if solution.converged else EXIT_NO_CONVERGENCE


def _load_solution(path: str) -> tuple[NormalizedParams, int, ExpSeries]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
        params = doc["params"]
        norm = NormalizedParams(
            a=float(params["a"]),
            b=float(params["b"]),
            c=float(params["c"]),
            r=float(params["r"]),
            p=float(params["p"]),
        )
        order = int(doc["order"])
        coeffs = [complex(re, im) for re, im in doc["coefficients"]]
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise CbkdvError(f"cannot read solution file {path!r}: {exc}") from None
    series = ExpSeries(tuple(coeffs))
    if series.order != order:
        raise CbkdvError(
            f"solution file order {order} does not match "
            f"{series.order + 1} coefficients"
        )
    return norm, order, series


def cmd_verify(args) -> int:
    norm, order, series = _load_solution(args.solution)
    sys_ = build_system(norm, order, TruncationMode.FULL)
    lo, hi, count = args.zeta
    samples = np.linspace(lo, hi, count)
    report = verify_solution(sys_, series, samples)
    print(
        f"residual_inf={fmt(report.residual_inf)} "
        f"ode_residual_max={fmt(report.max_ode_residual)}"
    )
    tol = float("inf") if args.report_only else args.tol
    ok = report.residual_inf <= tol and report.max_ode_residual <= tol
    print(f"verify: {'ok' if ok else 'above tolerance'} tol={fmt(tol)}")
    return EXIT_OK if ok else EXIT_NO_CONVERGENCE


def cmd_surface(args) -> int:
    norm = _resolve_params(args)
    spec = SurfaceSpec(norm=norm, x_range=tuple(args.x), y_range=tuple(args.y))
    rows = sample_surface(spec)
    stream, close = _open_output(args.output)
    try:
        _write_rows(stream, ["x", "y", "z"], rows, args.format == "json")
    finally:
        if close:
            stream.close()
    return EXIT_OK


def cmd_trace(args) -> int:
    norm = _resolve_params(args)
    traj = integrate_ode(norm, args.u0, args.du0, tuple(args.span), args.h)
    rows = [(pt.zeta, pt.u.real, pt.du.real, pt.ddu.real) for pt in traj.points]
    stream, close = _open_output(args.output)
    try:
        _write_rows(
            stream,
            ["zeta", "u", "du", "ddu"],
            rows,
            args.format == "json",
            trailer={"exit": traj.status.value},
        )
    finally:
        if close:
            stream.close()
    return EXIT_OK


def cmd_profile(args) -> int:
    _, _, series = _load_solution(args.solution)
    lo, hi, count = args.zeta
    if lo < SAFE_ZETA_MIN or hi > SAFE_ZETA_MAX:
        raise CbkdvError(
            f"zeta range [{lo}, {hi}] leaves the safe evaluation window "
            f"[{SAFE_ZETA_MIN}, {SAFE_ZETA_MAX}]"
        )
    rows = []
    for zeta in np.linspace(lo, hi, count):
        pt = evaluate_profile(series, float(zeta))
        rows.append((pt.zeta, pt.u.real, pt.u.imag, pt.du.real, pt.du.imag))
    stream, close = _open_output(args.output)
    try:
        _write_rows(
            stream,
            ["zeta", "re_u", "im_u", "re_du", "im_du"],
            rows,
            args.format == "json",
        )
    finally:
        if close:
            stream.close()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cbkdv",
        description=(
            "Construct and verify traveling solitary waves of the compound "
            "Burgers-KdV equation, and export its phase surface."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    output_flags = argparse.ArgumentParser(add_help=False)
    output_flags.add_argument("--output", help="output file (default: stdout)")
    output_flags.add_argument(
        "--format", choices=("csv", "json"), default="csv", help="output format"
    )

    p_norm = sub.add_parser("normalize", help="reduce physical to normalized parameters")
    for flag in ("--alpha", "--beta", "--gamma", "--mu", "--v", "--p"):
        p_norm.add_argument(flag, type=float, required=True)
    p_norm.add_argument("--d", type=float, default=0.0, help="integration constant")
    p_norm.set_defaults(func=cmd_normalize)

    p_solve = sub.add_parser("solve", help="solve the harmonic-balance system")
    _physical_group(p_solve)
    _normalized_group(p_solve)
    p_solve.add_argument("--p", type=float, required=True, help="nonlinearity exponent")
    p_solve.add_argument("--order", type=int, required=True, help="series order N")
    p_solve.add_argument(
        "--mode", choices=("square", "full"), default="square", help="harmonic range"
    )
    p_solve.add_argument("--gauge", type=_parse_complex, default=1.0 + 0.0j)
    p_solve.add_argument("--starts", type=int, default=32)
    p_solve.add_argument("--max-iters", type=int, default=200)
    p_solve.add_argument("--tol", type=float, default=1e-12)
    p_solve.add_argument("--seed", type=int, default=None)
    p_solve.add_argument("--output", help="solution file (default: solution.json)")
    p_solve.set_defaults(func=cmd_solve)

    p_verify = sub.add_parser("verify", help="re-check a solution file")
    p_verify.add_argument("solution", help="JSON solution file")
    p_verify.add_argument(
        "--zeta", type=_parse_grid, default=(-5.0, 0.0, 11), help="zeta grid min:max:count"
    )
    p_verify.add_argument("--tol", type=float, default=DEFAULT_VERIFY_TOL)
    p_verify.add_argument(
        "--report-only", action="store_true", help="report residuals, never fail"
    )
    p_verify.set_defaults(func=cmd_verify)

    p_surface = sub.add_parser("surface", help="sample the phase surface on a grid", parents=[output_flags])
    _physical_group(p_surface)
    _normalized_group(p_surface)
    p_surface.add_argument("--p", type=float, required=True)
    p_surface.add_argument("--x", type=_parse_grid, required=True, help="X grid min:max:count")
    p_surface.add_argument("--y", type=_parse_grid, required=True, help="Y grid min:max:count")
    p_surface.set_defaults(func=cmd_surface)

    p_trace = sub.add_parser("trace", help="integrate the traveling ODE", parents=[output_flags])
    _physical_group(p_trace)
    _normalized_group(p_trace)
    p_trace.add_argument("--p", type=float, required=True)
    p_trace.add_argument("--u0", type=float, required=True)
    p_trace.add_argument("--du0", type=float, required=True)
    p_trace.add_argument("--span", type=_parse_span, required=True, help="zeta start:end")
    p_trace.add_argument("--h", type=float, required=True, help="step size")
    p_trace.set_defaults(func=cmd_trace)

    p_profile = sub.add_parser("profile", help="tabulate a solution's wave profile", parents=[output_flags])
    p_profile.add_argument("solution", help="JSON solution file")
    p_profile.add_argument(
        "--zeta", type=_parse_grid, default=(-5.0, 0.0, 101), help="zeta grid min:max:count"
    )
    p_profile.set_defaults(func=cmd_profile)

    return parser


# Flags whose values may start with a minus sign (ranges like -2:2:41);
# argparse would mistake those for options, so fold them into --flag=value.
_RANGE_FLAGS = {"--x", "--y", "--zeta", "--span"}


def _fold_range_values(argv: list[str]) -> list[str]:
    folded = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if (
            tok in _RANGE_FLAGS
            and i + 1 < len(argv)
            and argv[i + 1].startswith("-")
            and ":" in argv[i + 1]
        ):
            folded.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            folded.append(tok)
            i += 1
    return folded


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(_fold_range_values(list(sys.argv[1:] if argv is None else argv)))
    try:
        return args.func(args)
    except CbkdvError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
