"""Command-line front end.

Exit status is 0 on success, 1 for invalid input (unknown scenario, bad
config field, bad flag value) and 2 when the integrator fails.
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .config import FORMATS, ConfigError, RunConfig, parse_angle
from .numerics import DEFAULT_TOL, IntegrationError
from .scenarios import ONE_ATOM, catalog, get_scenario, run_scenario
from .selfcheck import run_all

EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL = 0, 1, 2

# default template scenario for each sweepable phase
SWEEP_DEFAULTS = {"theta": "fig1c", "theta1": "fig3b", "theta2": "fig3a"}


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def _grid_points(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 2:
        raise argparse.ArgumentTypeError(f"need at least 2 grid points, got {value}")
    return value


def _add_output_flags(p: argparse.ArgumentParser):
    p.add_argument("--format", choices=FORMATS, default=None, help="table format (default csv)")
    p.add_argument("--out", default=None, help="output path (default: standard output)")
    p.add_argument("--tol", type=_positive_float, default=DEFAULT_TOL,
                   help="integrator tolerance (default %(default)g)")
    p.add_argument("--grid-points", type=_grid_points, default=None, help="number of time points")
    p.add_argument("--t-end", type=_positive_float, default=None,
                   help="final time in units of 1/Omega")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dampedjc",
        description="Damped Jaynes-Cummings dynamics with correlated initial states.")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("list", help="print the scenario catalog")

    run = sub.add_parser("run", help="run a catalog scenario or a JSON config file")
    run.add_argument("target", help="scenario name or path to a config file")
    _add_output_flags(run)

    sweep = sub.add_parser("sweep", help="sweep an initial-state phase")
    sweep.add_argument("--phase", required=True, choices=sorted(SWEEP_DEFAULTS))
    sweep.add_argument("--values", required=True, nargs="+",
                       help='phase values; radians or multiples of pi such as "0.5pi"')
    sweep.add_argument("--scenario", default=None,
                       help="template scenario (default depends on the phase)")
    _add_output_flags(sweep)

    check = sub.add_parser("selfcheck", help="run the invariant suite")
    check.add_argument("--tol", type=_positive_float, default=DEFAULT_TOL)
    return parser


def _load_target(target: str):
    """Scenario plus config-file output settings (path, format)."""
    path = Path(target)
    if target.endswith(".json") or path.is_file():
        if not path.is_file():
            raise ConfigError("target", f"config file {target!r} not found")
        cfg = RunConfig.from_file(path)
        return cfg.to_scenario(), cfg.output_path, cfg.output_format
    try:
        return get_scenario(target), None, None
    except KeyError:
        names = ", ".join(s.name for s in catalog())
        raise ConfigError("scenario", f"unknown scenario {target!r} (available: {names})") from None


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _execute(scenario, args, out_path=None, out_format=None) -> int:
    if args.t_end is not None or args.grid_points is not None:
        scenario = scenario.with_grid(args.t_end, args.grid_points)
    try:
        table = run_scenario(scenario, tol=args.tol)
    except IntegrationError as exc:
        print(f"error: scenario {scenario.name!r}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    fmt = args.format or out_format or "csv"
    _emit(table.render(fmt), args.out if args.out is not None else out_path)
    return EXIT_OK


def cmd_list(args) -> int:
    for s in catalog():
        omega = s.series[0].params.Omega
        print(f"{s.name:8s} {s.model:9s} Omega t in [0, {omega * s.grid.t_end:g}], "
              f"{len(s.series)} series  {s.description}")
    return EXIT_OK


def cmd_run(args) -> int:
    scenario, path, fmt = _load_target(args.target)
    return _execute(scenario, args, path, fmt)


def cmd_sweep(args) -> int:
    name = args.scenario or SWEEP_DEFAULTS[args.phase]
    try:
        template = get_scenario(name)
    except KeyError:
        raise ConfigError("scenario", f"unknown scenario {name!r}") from None
    values = [parse_angle(v, "--values") for v in args.values]
    if template.model == ONE_ATOM and args.phase != "theta":
        raise ConfigError("--phase", f"scenario {name!r} is one-atom; only theta can be swept")
    return _execute(template.phase_sweep(args.phase, values), args)


def cmd_selfcheck(args) -> int:
    results = run_all(tol=args.tol, report=print)
    failed = [r.name for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} properties passed")
    return EXIT_OK if not failed else EXIT_INVALID


COMMANDS = {"list": cmd_list, "run": cmd_run, "sweep": cmd_sweep, "selfcheck": cmd_selfcheck}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors; report them as invalid input
        return EXIT_OK if exc.code in (0, None) else EXIT_INVALID
    try:
        return COMMANDS[args.command](args)
    except IntegrationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_INVALID
    except BrokenPipeError:
        # downstream reader (e.g. ``head``) closed early; not an error
        sys.stdout = open(os.devnull, "w")
        return EXIT_OK
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
