"""Command-line front end.

Exit codes: 0 success, 2 configuration error, 3 runtime domain error,
4 failed check (selftest, fio-check over threshold, figure2 flatness).
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import selftest as _selftest
from .characteristics import gamma_discrete, gamma_limit, probe_batch
from .config import EXAMPLE_CONFIG, ExperimentConfig, load_config
from .dyadic_medium import polygon_at_level
from .errors import ConfigError, GoupillaudError
from .fio import fio_evaluate, fio_tolerance
from .initial_data import Triangular
from .io import fmt, format_error_report, format_probe_batch, format_solution, write_path
from .levy_paths import JumpPath, SubordinatorSpec, evaluate, make_rng, sample_path
from .transport import (
    Box,
    EvaluationGrid,
    auto_window,
    check_decay,
    jump_gap_flatness,
    mc_expected_error,
    solve_discrete,
    solve_reference,
)

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME, EXIT_CHECK = 0, 2, 3, 4

# auxiliary RNG streams; two-word keys never collide with replica keys (r,)
_PROBE_STREAM = (2**32, 1)
_FIO_STREAM = (2**32, 2)

FIGURE2_DRIVERS = {
    "gamma": SubordinatorSpec.gamma(shape=1.0, scale=1.0, drift=1.0),
    "poisson": SubordinatorSpec.compound_poisson(intensity=1.0, jump_size=1.0, drift=1.0),
}
FIGURE2_LEVEL = 12


def _window(cfg: ExperimentConfig, box: Box):
    return cfg.window if cfg.window is not None else auto_window(box, cfg.drift)


def _solve_box(cfg):
    ts = cfg.times
    return Box(cfg.x_range[0], cfg.x_range[1], min(0.0, min(ts)), max(ts) + 1e-12)


def _out(cfg) -> Path:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write(path: Path, text: str):
    path.write_text(text, encoding="utf-8", newline="\n")


def cmd_sample_path(cfg: ExperimentConfig, args, echo=print) -> int:
    window = _window(cfg, cfg.box_k)
    path = sample_path(cfg.spec, window, cfg.master_seed, n_ref=cfg.n_ref)
    target = _out(cfg) / "path.txt"
    write_path(target, path)
    if isinstance(path, JumpPath):
        echo(f"jumps={path.n_jumps} X(t_hi)={fmt(evaluate(path, path.t_hi))} -> {target}")
    else:
        echo(f"level={path.level} increments={path.increments.size} "
             f"X(t_hi)={fmt(path.knots[-1])} -> {target}")
    return EXIT_OK


def _solve_driver(spec, cfg, level, u0, xs, ts, out: Path, prefix: str, echo):
    box = Box(float(xs[0]), float(xs[-1]), min(0.0, float(ts[0])), float(ts[-1]) + 1e-12)
    window = cfg.window if cfg.window is not None else auto_window(box, spec.drift)
    path = sample_path(spec, window, cfg.master_seed, n_ref=cfg.n_ref)
    grid = EvaluationGrid(xs, ts)
    write_path(out / f"{prefix}path.txt", path)
    fine = solve_discrete(path, level, u0, grid)
    ref = solve_reference(path, u0, grid)
    ref_name = "limit" if isinstance(path, JumpPath) else "surrogate"
    _write(out / f"{prefix}N{level}.csv", format_solution(fine))
    _write(out / f"{prefix}{ref_name}.csv", format_solution(ref))
    echo(f"{prefix or 'solution '}level {level} and {ref_name} -> {out}")
    return path


def cmd_solve(cfg: ExperimentConfig, args, echo=print) -> int:
    xs = np.linspace(cfg.x_range[0], cfg.x_range[1], cfg.nx_solve)
    ts = np.array(sorted(cfg.times))
    _solve_driver(cfg.spec, cfg, max(cfg.levels), cfg.initial_data, xs, ts, _out(cfg),
                  "solution_", echo)
    return EXIT_OK


def cmd_converge(cfg: ExperimentConfig, args, echo=print) -> int:
    box = cfg.box_k
    report = mc_expected_error(cfg.spec, cfg.initial_data, cfg.p, box, cfg.levels,
                               cfg.replicas, cfg.master_seed, n_ref=cfg.n_ref,
                               grid_shape=cfg.grid, window=cfg.window,
                               workers=args.workers)
    out = _out(cfg)
    _write(out / "errors.csv", format_error_report(report))
    echo(f"limit={report.label} replicas={report.replicas} failures={len(report.failures)}")
    if report.replicas >= 2:
        for p, (passed, detail) in check_decay(report).items():
            echo(f"p={fmt(p)} decay {'ok' if passed else 'NOT monotone'} "
                 f"final/initial={fmt(detail['ratio'])}")
    if cfg.spec.is_gamma or cfg.probe_points == 0:
        if cfg.spec.is_gamma:
            echo("probes skipped: the Gamma driver has no exact limit path")
        return EXIT_OK
    path = sample_path(cfg.spec, _window(cfg, box), cfg.master_seed)
    rng = make_rng(cfg.master_seed, *_PROBE_STREAM)
    xs = rng.uniform(box.x0, box.x1, cfg.probe_points)
    ts = rng.uniform(box.t0, box.t1, cfg.probe_points)
    flags, gaps = probe_batch(path, 0.0, xs, ts, max(cfg.levels))
    _write(out / "probes.csv", format_probe_batch(xs, ts, flags, gaps))
    cont = gaps[flags]
    echo(f"probes: {flags.sum()}/{flags.size} continuity points, "
         f"max gap at N={max(cfg.levels)}: {fmt(cont.max() if cont.size else 0.0)}")
    return EXIT_OK


def fio_points(cfg: ExperimentConfig):
    """Random anchors in the box and their characteristic feet ``Gamma(0; x, t)``."""
    box = cfg.box_k
    path = sample_path(cfg.spec, _window(cfg, box), cfg.master_seed, n_ref=cfg.n_ref)
    rng = make_rng(cfg.master_seed, *_FIO_STREAM)
    xs = rng.uniform(box.x0, box.x1, cfg.fio_points)
    ts = rng.uniform(box.t0, box.t1, cfg.fio_points)
    if isinstance(path, JumpPath):
        feet = gamma_limit(path, 0.0, xs, ts)
    else:
        feet = gamma_discrete(polygon_at_level(path, path.level), 0.0, xs, ts)
    return xs, ts, np.atleast_1d(feet)


def cmd_fio_check(cfg: ExperimentConfig, args, echo=print) -> int:
    u0 = cfg.initial_data
    xs, ts, feet = fio_points(cfg)
    fio, imag = fio_evaluate(feet, u0, cfg.bandwidth, cfg.steps, full_output=True)
    direct = u0(feet)
    dev = np.abs(fio - direct)
    tol = np.broadcast_to(fio_tolerance(feet, u0, cfg.bandwidth, cfg.steps), dev.shape)
    lines = ["x,t,gamma,u0_gamma,fio,fio_imag,deviation,tolerance"]
    lines += [",".join(fmt(v) for v in row) for row in zip(xs, ts, feet, direct, fio, imag, dev, tol)]
    _write(_out(cfg) / "fio_check.csv", "\n".join(lines) + "\n")
    limit = cfg.fio_threshold
    worst = float(dev.max())
    echo(f"max |fio - u0(Gamma)| = {fmt(worst)} over {dev.size} points; "
         f"analytic tolerance {fmt(float(tol.max()))}"
         + (f"; threshold {fmt(limit)}" if limit is not None else ""))
    ok = bool(np.all(dev <= tol)) and (limit is None or worst < limit)
    return EXIT_OK if ok else EXIT_CHECK


def cmd_figure2(cfg: ExperimentConfig, args, echo=print) -> int:
    u0 = Triangular(0.0, 1.0, 1.0)
    xs = np.linspace(cfg.x_range[0], cfg.x_range[1], cfg.nx_solve)
    ts = np.array([1.0, 2.0, 3.0])
    out = _out(cfg)
    status = EXIT_OK
    for name, spec in FIGURE2_DRIVERS.items():
        sub = cfg.replace(window=None)
        path = _solve_driver(spec, sub, FIGURE2_LEVEL, u0, xs, ts, out,
                             f"figure2_{name}_", echo)
        if isinstance(path, JumpPath):
            worst, gaps = 0.0, 0
            for t in ts:
                rows = jump_gap_flatness(path, u0, t)
                gaps += len(rows)
                worst = max([worst] + [r[3] for r in rows])
            echo(f"figure2 {name}: {gaps} jump gaps checked, max spread {fmt(worst)}")
            if worst != 0.0:
                status = EXIT_CHECK
    return status


def cmd_selftest(cfg, args, echo=print) -> int:
    return EXIT_OK if _selftest.main(out=echo) == 0 else EXIT_CHECK


COMMANDS = {
    "sample-path": cmd_sample_path,
    "solve": cmd_solve,
    "converge": cmd_converge,
    "fio-check": cmd_fio_check,
    "figure2": cmd_figure2,
    "selftest": cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value configuration file")
    common.add_argument("--seed", type=int, help="override master_seed")
    common.add_argument("--out", help="override the output directory")
    common.add_argument("--workers", type=int, default=1, help="parallel replica workers")
    parser = argparse.ArgumentParser(
        prog="goupillaud",
        description="Transport in stochastic Goupillaud media driven by Lévy subordinators.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    sub.add_parser("example-config", help="print a fully commented configuration")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "example-config":
        sys.stdout.write(EXAMPLE_CONFIG)
        return EXIT_OK
    try:
        cfg = load_config(args.config) if args.config else ExperimentConfig()
        overrides = {}
        if args.seed is not None:
            overrides["master_seed"] = args.seed
        if args.out is not None:
            overrides["out"] = args.out
        if args.workers < 1:
            raise ConfigError("--workers must be >= 1")
        if overrides:
            lines = cfg.lines
            cfg = cfg.replace(**overrides)
            cfg.lines = lines
            cfg.validate()
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return COMMANDS[args.command](cfg, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except GoupillaudError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
