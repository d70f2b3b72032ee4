"""Command-line interface.

Subcommands: eigs, solve, branch, series, profile, extreme, verify.
Configuration is taken from flags or from a JSON file (--config); flags
override file values.  Exit codes: 0 success, 1 numerical failure
(divergence or breakdown), 2 validation error.  Output is byte-stable for
identical configurations.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__, io as _io
from .continuation import StepPolicy, trace_branch
from .extreme import convexity_check, crest_jump, grant_number, solve_extreme
from .grid import AngleField, get_grid
from .kernel import KernelSpec, characteristic_values
from .profile import reconstruct_profile
from .series import UnsupportedOrderError, eval_series, expand_solution
from .solver import BreakdownError, DivergenceError, solve
from . import verify as _verify

EXIT_OK = 0
EXIT_NUMERICAL = 1
EXIT_VALIDATION = 2


class ValidationError(ValueError):
    pass


def _parse_depth(text: str) -> float:
    if text.lower() in ("inf", "infinite", "deep"):
        return math.inf
    try:
        depth = float(text)
    except ValueError as exc:
        raise ValidationError(f"invalid depth {text!r}") from exc
    if depth <= 0:
        raise ValidationError(f"depth ratio must be positive, got {depth}")
    return depth


def _spec_from(args) -> KernelSpec:
    return KernelSpec(depth_ratio=_parse_depth(args.depth),
                      n_modes=args.n // 2)


def _out_dir(args) -> Path:
    base = args.out_dir or os.environ.get("NEKRASOV_OUT_DIR", ".")
    path = Path(base)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _load_config(argv: list[str]) -> list[str]:
    """Expand --config FILE into flag defaults (flags given later win)."""
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    try:
        cfg_path = argv[i + 1]
    except IndexError:
        raise ValidationError("--config requires a file path")
    with open(cfg_path, encoding="utf-8") as fh:
        cfg = json.load(fh)
    flags: list[str] = []
    for key, value in cfg.items():
        if value is False:  # store_true flags: absence means False
            continue
        flags.append(f"--{key.replace('_', '-')}")
        if value is not True:
            flags.append(str(value))
    # insert config flags right after the subcommand so explicit flags override
    head, tail = argv[:1], argv[1:i] + argv[i + 2:]
    return head + flags + tail


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--config", metavar="FILE",
                   help="JSON file with flag defaults (explicit flags win)")
    p.add_argument("--depth", default="inf",
                   help="depth-to-wavelength ratio h/lambda, or 'inf' (default)")
    p.add_argument("--n", type=int, default=512, help="grid size (default 512)")
    p.add_argument("--tol", type=float, default=1e-12, help="solver tolerance")
    p.add_argument("--out-dir", default=None,
                   help="output directory (default $NEKRASOV_OUT_DIR or '.')")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None, help="output file name")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nekrasov",
                                 description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eigs", help="characteristic values of the linearized operator")
    p.add_argument("--kmax", type=int, default=8)
    _add_common(p)

    p = sub.add_parser("solve", help="solve the wave equation at one mu")
    p.add_argument("--mu", type=float, required=True)
    p.add_argument("--method", choices=("newton", "newton_krylov", "fixed_point"),
                   default="newton")
    _add_common(p)

    p = sub.add_parser("branch", help="trace the solution branch in mu")
    p.add_argument("--mu-start", type=float, default=3.01)
    p.add_argument("--mu-end", type=float, default=50.0)
    _add_common(p)

    p = sub.add_parser("series", help="exact small-parameter expansion coefficients")
    p.add_argument("--order", type=int, default=3)
    _add_common(p)

    p = sub.add_parser("profile", help="reconstruct the physical wave profile")
    p.add_argument("--mu", type=float, required=True)
    p.add_argument("--wavelength", type=float, default=2.0 * math.pi)
    p.add_argument("--g", type=float, default=1.0)
    _add_common(p)

    p = sub.add_parser("extreme", help="extreme-wave limit and crest diagnostics")
    p.add_argument("--strategy", choices=("sequence", "direct"), default="sequence")
    _add_common(p)

    p = sub.add_parser("verify", help="run the invariant suite")
    p.add_argument("--fast", action="store_true",
                   help="skip the slower checks (branch and extreme)")
    _add_common(p)
    return ap


def _emit(args, stem: str, columns, metadata, payload) -> Path:
    out_dir = _out_dir(args)
    if args.format == "csv" and columns is not None:
        path = out_dir / (args.out or f"{stem}.csv")
        _io.write_csv(path, columns, metadata)
    else:
        path = out_dir / (args.out or f"{stem}.json")
        _io.write_json(path, payload)
    print(path)
    return path


def cmd_eigs(args) -> int:
    if args.kmax < 1:
        raise ValidationError(f"kmax must be at least 1, got {args.kmax}")
    spec = _spec_from(args)
    values = characteristic_values(spec, args.kmax)
    meta = _io.base_metadata(__version__, spec, n=args.n)
    columns = {"k": np.arange(1, args.kmax + 1), "characteristic_value": values}
    payload = {"metadata": meta, "k": list(range(1, args.kmax + 1)),
               "characteristic_values": values}
    _emit(args, "eigs", columns, meta, payload)
    print(", ".join(_io.format_float(v) for v in values))
    return EXIT_OK


def _seeded_solve(mu, spec, n, tol, method):
    mu1 = float(characteristic_values(spec, 1)[0])
    grid = get_grid(n)
    if mu <= mu1:
        return None
    if spec.is_infinite:
        guess = AngleField(grid, values=eval_series(expand_solution(3), mu - mu1,
                                                    grid.theta))
    else:
        guess = AngleField(grid, values=(mu - mu1) / 9.0 * np.sin(grid.theta))
    return solve(mu, guess, method=method, tol=tol, spec=spec)


def cmd_solve(args) -> int:
    if args.mu <= 0:
        raise ValidationError(f"mu must be positive, got {args.mu}")
    spec = _spec_from(args)
    result = _seeded_solve(args.mu, spec, args.n, args.tol, args.method)
    meta = _io.base_metadata(__version__, spec, n=args.n, tol=args.tol, mu=args.mu)
    if result is None:
        print("warning: subcritical mu (no nontrivial solution); "
              "emitting the trivial solution", file=sys.stderr)
        grid = get_grid(args.n)
        values = np.zeros(args.n - 1)
        coeffs = np.zeros(args.n - 1)
        residual, iterations, method = 0.0, 0, args.method
    else:
        values = result.field.values
        coeffs = result.field.coefficients
        residual, iterations, method = result.residual, result.iterations, result.method
        grid = result.field.grid
    meta.update({"residual": residual, "iterations": iterations, "method": method})
    columns = {"theta": grid.theta, "phi": values}
    payload = {"metadata": meta, "theta": grid.theta, "phi": values,
               "coefficients": coeffs}
    _emit(args, "solution", columns, meta, payload)
    return EXIT_OK


def cmd_branch(args) -> int:
    if args.mu_end <= args.mu_start:
        raise ValidationError("mu-end must exceed mu-start")
    spec = _spec_from(args)
    policy = StepPolicy(n_start=args.n)
    branch = trace_branch(args.mu_start, args.mu_end, spec=spec, policy=policy,
                          tol=args.tol)
    meta = _io.base_metadata(__version__, spec, n=args.n, tol=args.tol,
                             mu_start=args.mu_start, mu_end=args.mu_end,
                             truncated=branch.truncated)
    _emit(args, "branch", _io.branch_columns(branch), meta,
          _io.branch_payload(branch, __version__))
    if branch.truncated:
        print(f"warning: branch truncated: {branch.failure}", file=sys.stderr)
    return EXIT_OK


def cmd_series(args) -> int:
    try:
        series = expand_solution(args.order)
    except UnsupportedOrderError as exc:
        raise ValidationError(str(exc)) from exc
    rows_p, rows_k, rows_c = [], [], []
    for p in range(1, args.order + 1):
        for k in sorted(series.coefficients.get(p, {})):
            rows_p.append(p)
            rows_k.append(k)
            rows_c.append(series.coefficient(p, k))
    spec = _spec_from(args)
    meta = _io.base_metadata(__version__, spec, order=args.order)
    height = [str(c) for c in
              (Fraction(1, 9), Fraction(-8, 243), Fraction(71, 6561))][:args.order]
    payload = {
        "metadata": meta,
        "coefficients": [
            {"power": p, "mode": k, "value": str(series.coefficient(p, k))}
            for p, k in zip(rows_p, rows_k)],
        "wave_height_over_wavelength": height,
    }
    out_dir = _out_dir(args)
    path = out_dir / (args.out or "series.json")
    _io.write_json(path, payload)
    print(path)
    for p, k, c in zip(rows_p, rows_k, rows_c):
        print(f"mu'^{p} sin({k} theta): {c}")
    return EXIT_OK


def cmd_profile(args) -> int:
    if args.mu <= 0:
        raise ValidationError(f"mu must be positive, got {args.mu}")
    if args.wavelength <= 0 or args.g <= 0:
        raise ValidationError("wavelength and g must be positive")
    spec = _spec_from(args)
    mu1 = float(characteristic_values(spec, 1)[0])
    if args.mu <= mu1:
        print(f"warning: subcritical mu <= {mu1:g}; emitting the flat profile",
              file=sys.stderr)
        field = AngleField.zero(args.n)
    else:
        field = _seeded_solve(args.mu, spec, args.n, args.tol, "newton").field
    profile = reconstruct_profile(field, args.mu, args.wavelength, args.g)
    meta = _io.base_metadata(__version__, spec, n=args.n, tol=args.tol,
                             mu=args.mu, height=profile.height,
                             c=profile.c, q0=profile.q0)
    columns = _io.profile_columns(profile)
    # emit x in increasing order (theta runs crest -> trough, x decreases)
    order = np.argsort(columns["x"], kind="stable")
    columns = {k: v[order] for k, v in columns.items()}
    _emit(args, "profile", columns, meta,
          _io.profile_payload(profile, __version__, spec))
    return EXIT_OK


def cmd_extreme(args) -> int:
    spec = _spec_from(args)
    if not spec.is_infinite:
        raise ValidationError("the extreme limit is computed on deep water")
    sol = solve_extreme(strategy=args.strategy, n_start=args.n)
    beta1 = grant_number(1e-9)
    # convexity is judged on a near-extreme finite-mu representative: the
    # sequence's own final field, or a mu = 3000 solve for the direct route
    if sol.strategy == "sequence":
        convex_mu = max(sol.mu_sequence)
        convex_field = sol.field
    else:
        from .extreme import _solve_sequence
        result, _ = _solve_sequence(spec, (3000.0,), args.tol, args.n,
                                    1 << 17, tail_threshold=1e-9)
        convex_mu = 3000.0
        convex_field = result.field
    convexity = convexity_check(reconstruct_profile(convex_field, convex_mu))
    report = {
        "metadata": _io.base_metadata(__version__, spec, n=args.n,
                                      strategy=sol.strategy),
        "crest_angle_estimate": sol.crest_angle_estimate,
        "crest_angle_target": math.pi / 6.0,
        "jump": crest_jump(sol),
        "C1": sol.grant_fit.c1,
        "C2": sol.grant_fit.c2,
        "beta1": beta1,
        "convexity": {"convex": convexity.convex, "mu": convex_mu,
                      "max_violation": convexity.max_violation},
        "per_mu": sol.per_mu,
    }
    out_dir = _out_dir(args)
    path = out_dir / (args.out or "extreme.json")
    _io.write_json(path, report)
    print(path)
    print(f"crest angle estimate: {sol.crest_angle_estimate:.6f} "
          f"(pi/6 = {math.pi / 6.0:.6f})")
    return EXIT_OK


def cmd_verify(args) -> int:
    ok = _verify.run_suite(fast=args.fast)
    return EXIT_OK if ok else EXIT_NUMERICAL


_HANDLERS = {
    "eigs": cmd_eigs,
    "solve": cmd_solve,
    "branch": cmd_branch,
    "series": cmd_series,
    "profile": cmd_profile,
    "extreme": cmd_extreme,
    "verify": cmd_verify,
}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        argv = _load_config(argv)
        args = build_parser().parse_args(argv)
        return _HANDLERS[args.command](args)
    except ValueError as exc:
        # ValidationError and any precondition ValueError from the library
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (BreakdownError, DivergenceError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
