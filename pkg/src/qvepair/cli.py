"""Command-line entry point.

Subcommands: ``spectrum``, ``density``, ``sweep``, ``oracle-check``,
``validate``.  All take ``--config <path>`` (JSON, schema v1) plus ``--out``,
``--threads`` (0 = auto, QVE_THREADS env as fallback) and ``--quiet``.
Exit codes: 0 success, 1 validation error, 2 numerical failure.  On success
the produced file paths are printed one per line; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from .config import RunConfig, SchemaError, parse_config
from .fields import FieldValidationError
from .io import (
    atomic_write_text,
    fmt,
    write_density_json,
    write_series_csv,
    write_spectrum_csv,
    write_sweep_csv,
)
from .observables import (
    GridTooCoarseError,
    number_density_3d,
    number_density_reduced,
)
from .oracle import OracleOptions, StepTooLargeError, oracle_solve_mode
from .solver import (
    ModeParams,
    NonConvergenceError,
    ToleranceViolationError,
    solve_mode,
    solve_spectrum,
)
from .sweeps import run_sweep

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NUMERICAL = 2

_NUMERICAL_FAILURES = (
    NonConvergenceError,
    ToleranceViolationError,
    StepTooLargeError,
    GridTooCoarseError,
)


def _log(args, msg: str) -> None:
    if not args.quiet:
        print(msg, file=sys.stderr)


def _prepare_outdir(cfg: RunConfig, args) -> Path:
    out = Path(args.out) if args.out else Path(cfg.output_directory)
    out.mkdir(parents=True, exist_ok=True)
    probe = out / ".write_probe"
    probe.write_text("")
    probe.unlink()
    return out


def _check_overwrite(cfg: RunConfig, paths: list[Path]) -> None:
    if cfg.overwrite:
        return
    clashes = [str(p) for p in paths if p.exists()]
    if clashes:
        raise SchemaError(
            [("/output", f"refusing to overwrite existing file(s): {', '.join(clashes)} "
                         "(set output.overwrite)")]
        )


def _solve_grid(cfg: RunConfig, args, p_perp: float):
    grid = cfg.grid.resolve(cfg.field, cfg.solver)
    return solve_spectrum(
        grid,
        cfg.field,
        cfg.solver,
        p_perp=p_perp,
        n_threads=args.threads,
        allow_chirp_overrun=cfg.allow_chirp_overrun,
        return_results=cfg.solver.record_series,
    )


def _maybe_write_series(cfg: RunConfig, out: Path, solved, emitted: list[Path]):
    if not cfg.solver.record_series:
        return solved
    spectrum, results = solved
    series_dir = out / "series"
    for i, r in enumerate(results):
        if r.series is not None:
            emitted.append(write_series_csv(r.series, series_dir / f"mode_{i:04d}.csv"))
    return spectrum


def _cmd_spectrum(cfg: RunConfig, args, out: Path) -> list[Path]:
    target = out / "spectrum.csv"
    _check_overwrite(cfg, [target])
    emitted: list[Path] = []
    spectrum = _maybe_write_series(cfg, out, _solve_grid(cfg, args, cfg.grid.p_perp), emitted)
    emitted.insert(0, write_spectrum_csv(spectrum, target))
    return emitted


def _cmd_density(cfg: RunConfig, args, out: Path) -> list[Path]:
    emitted: list[Path] = []
    if cfg.n_perp is None:
        target_csv, target_json = out / "spectrum.csv", out / "density.json"
        _check_overwrite(cfg, [target_csv, target_json])
        spectrum = _maybe_write_series(cfg, out, _solve_grid(cfg, args, cfg.grid.p_perp), emitted)
        density = number_density_reduced(spectrum)
        emitted.insert(0, write_spectrum_csv(spectrum, target_csv))
    else:
        target_json = out / "density.json"
        _check_overwrite(cfg, [target_json])
        p_perps = np.linspace(0.0, cfg.perp_max, cfg.n_perp)
        # share the longitudinal grid across sheets for the 2-D quadrature
        grid = cfg.grid.resolve(cfg.field, cfg.solver)
        sheets = []
        for k, pp in enumerate(p_perps):
            sheet = solve_spectrum(
                grid,
                cfg.field,
                cfg.solver,
                p_perp=float(pp),
                n_threads=args.threads,
                allow_chirp_overrun=cfg.allow_chirp_overrun,
            )
            sheets.append(sheet)
            emitted.append(write_spectrum_csv(sheet, out / f"spectrum_perp{k:02d}.csv"))
        density = number_density_3d(sheets)
    emitted.append(write_density_json(density, target_json))
    return emitted


def _cmd_sweep(cfg: RunConfig, args, out: Path) -> list[Path]:
    target = out / "sweep.csv"
    _check_overwrite(cfg, [target])
    result = run_sweep(cfg.sweep, n_threads=args.threads)
    for row in result.errors:
        _log(args, f"row ({row.variant_label}, {row.axis_value}) failed: {row.error}")
    return [write_sweep_csv(result, target)]


def _cmd_oracle_check(cfg: RunConfig, args, out: Path) -> list[Path]:
    target = out / "oracle_check.json"
    _check_overwrite(cfg, [target])
    o = cfg.oracle
    opts = OracleOptions(step=float(o["step"]), t_start=float(o["t_start"]), t_end=float(o["t_end"]))
    solver_opts = cfg.solver
    if solver_opts.t_start is None or solver_opts.t_end is None:
        from dataclasses import replace

        solver_opts = replace(solver_opts, t_start=opts.t_start, t_end=opts.t_end)
    tolerance = float(o.get("tolerance", 1e-4))
    rows = []
    worst = 0.0
    for p3 in o["momenta"]:
        params = ModeParams(float(p3))
        f_oracle = oracle_solve_mode(
            params, cfg.field, opts, allow_chirp_overrun=cfg.allow_chirp_overrun
        )
        f_ode = solve_mode(
            params, cfg.field, solver_opts, allow_chirp_overrun=cfg.allow_chirp_overrun
        ).final_f
        rel = abs(f_ode - f_oracle) / max(f_oracle, 1e-30)
        worst = max(worst, rel)
        rows.append({"P3": p3, "f_ode": f_ode, "f_oracle": f_oracle, "rel_deviation": rel})
    report = {
        "max_rel_deviation": worst,
        "tolerance": tolerance,
        "passed": worst <= tolerance,
        "modes": rows,
    }
    path = atomic_write_text(target, json.dumps(report, indent=2) + "\n")
    if not report["passed"]:
        raise ToleranceViolationError(
            f"oracle check failed: max relative deviation {worst:.3e} > {tolerance:.3e} "
            f"(report at {path})"
        )
    return [path]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qvepair",
        description="Pair production from vacuum in chirped Gaussian laser pulses.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name, help_text in [
        ("spectrum", "solve the momentum spectrum and write spectrum.csv"),
        ("density", "solve and reduce to a pair number density (density.json)"),
        ("sweep", "run a parameter sweep and write sweep.csv"),
        ("oracle-check", "compare the ODE solver against the history-quadrature reference"),
        ("validate", "validate a config without any floating-point solving"),
    ]:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="path to a JSON run config")
        p.add_argument("--out", default=None, help="output directory (overrides config)")
        p.add_argument(
            "--threads",
            type=int,
            default=0,
            help="worker threads; 0 = auto (QVE_THREADS env, then CPU count)",
        )
        p.add_argument("--quiet", action="store_true", help="suppress progress messages")
    return parser


_DISPATCH = {
    "spectrum": _cmd_spectrum,
    "density": _cmd_density,
    "sweep": _cmd_sweep,
    "oracle-check": _cmd_oracle_check,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = Path(args.config).read_text()
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    try:
        cfg = parse_config(text)
    except SchemaError as exc:
        for ptr, msg in exc.errors:
            print(f"error: {ptr}: {msg}", file=sys.stderr)
        return EXIT_VALIDATION

    if args.subcommand == "validate":
        _log(args, "config is valid")
        return EXIT_OK
    if args.subcommand != cfg.command:
        print(
            f"error: config declares command {cfg.command!r} but "
            f"{args.subcommand!r} was invoked",
            file=sys.stderr,
        )
        return EXIT_VALIDATION

    try:
        out = _prepare_outdir(cfg, args)
    except OSError as exc:
        print(f"error: output directory not writable: {exc}", file=sys.stderr)
        return EXIT_VALIDATION

    try:
        paths = _DISPATCH[args.subcommand](cfg, args, out)
    except SchemaError as exc:
        for ptr, msg in exc.errors:
            print(f"error: {ptr}: {msg}", file=sys.stderr)
        return EXIT_VALIDATION
    except FieldValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except _NUMERICAL_FAILURES as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL

    for p in paths:
        print(p)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
