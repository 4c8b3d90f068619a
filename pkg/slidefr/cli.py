"""
Command-line front end.

Subcommands::

    slidefr run [CONFIG] [--preset NAME] [--set section.key=value ...] [--restart FILE]
    slidefr generate-mesh NAME [--output DIR] [--scale S]
    slidefr verify [--suite NAME ...] [--full]
    slidefr study {order,dt,omega,conservation,free-stream} [...]

Exit codes: 0 success, 1 numerical failure, 2 configuration error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from .exceptions import ConfigurationError, SlideFRError

__all__ = ["EXIT_OK", "EXIT_FAILURE", "EXIT_CONFIG", "build_parser", "main"]

logger = logging.getLogger("slidefr.cli")

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def _floats(text: str) -> List[float]:
    return [float(item) for item in text.split(",") if item.strip()]


def _ints(text: str) -> List[int]:
    return [int(item) for item in text.split(",") if item.strip()]


def _overrides(args: argparse.Namespace) -> List[str]:
    overrides = list(args.set or [])
    if getattr(args, "workers", None):
        overrides.append(f"solver.workers={args.workers}")
    if getattr(args, "output", None):
        overrides.append(f"output.directory={args.output}")
    return overrides


def cmd_run(args: argparse.Namespace) -> int:
    from .app import Simulation
    from .cases import PRESETS
    from .config import load_config
    from .io.restart import read_restart

    config = load_config(args.config, _overrides(args), presets=PRESETS, preset=args.preset)
    sim = Simulation(config)
    restart = read_restart(args.restart) if args.restart else None
    status = sim.run(restart)
    return status.exit_code


def cmd_generate_mesh(args: argparse.Namespace) -> int:
    from .mesh.generators import GENERATORS
    from .mesh.subdomain import write_subdomain

    if args.name not in GENERATORS:
        raise ConfigurationError(
            f"Unknown mesh generator {args.name!r}; available: {', '.join(GENERATORS)}", key="mesh.generator"
        )
    kwargs = {"scale": args.scale} if args.scale is not None else {}
    try:
        meshes = GENERATORS[args.name](**kwargs)
    except TypeError as exc:
        raise ConfigurationError(f"Generator {args.name!r}: {exc}", key="mesh.scale")
    out = Path(args.output)
    for index, mesh in enumerate(meshes):
        path = write_subdomain(mesh, out / f"{args.name}-{index}.mesh")
        logger.info(f"Wrote {path}: {mesh.n_cells} cells")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    from .verification.studies import run_verification

    checks = run_verification(args.suite, quick=not args.full)
    for check in checks:
        print(check)
    return EXIT_OK if all(check.passed for check in checks) else EXIT_FAILURE


def cmd_study(args: argparse.Namespace) -> int:
    from .io.tables import write_table
    from .verification import studies

    overrides = list(args.set or [])
    kind = args.kind
    if kind == "order":
        result = studies.run_convergence_study(args.case, orders=_ints(args.orders), overrides=overrides, workers=args.jobs)
        rows = result.rows
        logger.info(f"Fit: slope {result.slope:.4f}, R^2 {result.r_squared:.4f}")
    elif kind == "dt":
        result = studies.run_convergence_study(args.case, dts=_floats(args.dts), overrides=overrides, workers=args.jobs)
        rows = result.rows
        logger.info(f"Observed order {result.slope:.4f}, R^2 {result.r_squared:.4f}")
    elif kind == "omega":
        rows = studies.omega_sweep(args.case, _floats(args.omegas), overrides=overrides, workers=args.jobs)
    elif kind == "conservation":
        rows = studies.conservation_study(
            _floats(args.omegas), _ints(args.orders), args.end_time, overrides=overrides, workers=args.jobs
        )
    else:
        rows = studies.free_stream_study(
            _ints(args.orders), _floats(args.omegas), args.conforming, args.end_time, overrides=overrides, workers=args.jobs
        )
    path = write_table(Path(args.output) / f"study_{kind}.csv", rows)
    print(path)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="slidefr", description="High-order sliding-mesh flow solver.")
    parser.add_argument(
        "--log-level", default="INFO", type=str.upper, choices=("DEBUG", "INFO", "WARNING", "ERROR"), help="logging level"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a case")
    run.add_argument("config", nargs="?", help="INI configuration file")
    run.add_argument("--preset", help="case preset to start from")
    run.add_argument("--set", action="append", metavar="SECTION.KEY=VALUE", help="override one key")
    run.add_argument("--output", help="output directory")
    run.add_argument("--workers", type=int, help="threads for element kernels")
    run.add_argument("--restart", help="resume from a restart file")
    run.set_defaults(handler=cmd_run)

    gen = sub.add_parser("generate-mesh", help="write a generated mesh in the subdomain format")
    gen.add_argument("name", help="generator name")
    gen.add_argument("--output", default=".", help="output directory")
    gen.add_argument("--scale", type=float, help="length scale, where supported")
    gen.set_defaults(handler=cmd_generate_mesh)

    verify = sub.add_parser("verify", help="run acceptance suites")
    verify.add_argument("--suite", action="append", help="suite name; repeat for several (default: all)")
    verify.add_argument("--full", action="store_true", help="full-length runs instead of quick ones")
    verify.set_defaults(handler=cmd_verify)

    study = sub.add_parser("study", help="convergence and sweep studies")
    study.add_argument("kind", choices=("order", "dt", "omega", "conservation", "free-stream"))
    study.add_argument("--case", default="euler-vortex", help="case preset (order, dt, omega)")
    study.add_argument("--orders", default="2,3,4,5", help="comma-separated polynomial degrees")
    study.add_argument("--dts", default="0.02,0.01,0.005", help="comma-separated step sizes")
    study.add_argument("--omegas", default="0", help="comma-separated rotational speeds")
    study.add_argument("--end-time", type=float, default=2.0, help="end time (conservation, free-stream)")
    study.add_argument("--conforming", action="store_true", help="free-stream study on the conforming block")
    study.add_argument("--set", action="append", metavar="SECTION.KEY=VALUE", help="override one key")
    study.add_argument("--jobs", type=int, default=1, help="concurrent runs")
    study.add_argument("--output", default=".", help="directory for the CSV table")
    study.set_defaults(handler=cmd_study)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=args.log_level, format=LOG_FORMAT)
    try:
        return args.handler(args)
    except ConfigurationError as exc:
        logger.error(f"Configuration error: {exc}")
        return EXIT_CONFIG
    except SlideFRError as exc:
        logger.error(f"{type(exc).__name__}: {exc}")
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
