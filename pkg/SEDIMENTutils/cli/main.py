#!/usr/bin/env python3
import argparse
import importlib
import logging
import pkgutil
import sys

from ..exceptions import PhysicsGuardError, SedimentError, ValidationError
from .runtime import configure_logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_PHYSICS_GUARD = 2
EXIT_CONFIG = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sediment_lab",
        description="Multiscale laboratory for sedimenting spheres in Stokes flow",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument(
        "--log-level",
        help="Logging level (default: SEDIMENT_LOG_LEVEL or WARNING)",
    )

    # Use metavar='<command>' to suppress verbose {cmd1,cmd2,...} display
    subs = parser.add_subparsers(dest='cmd', metavar='<command>')

    # Dynamically import every module in cli/commands and call its register()
    pkg = importlib.import_module('SEDIMENTutils.cli.commands')
    for finder, name, ispkg in pkgutil.iter_modules(pkg.__path__):
        mod = importlib.import_module(f"SEDIMENTutils.cli.commands.{name}")
        if hasattr(mod, 'register'):
            mod.register(subs)

    parser.epilog = """Use 'sediment_lab <command> --help' for detailed help on a specific command.

Environment: SEDIMENT_LOG_LEVEL (logging), SEDIMENT_WORKERS (threads for pairwise sums)
Exit codes: 0 success, 2 physics guard (collision/divergence), 3 invalid config
"""
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.cmd:
        parser.print_help()
        return EXIT_ERROR

    try:
        configure_logging(args.log_level)
        # every module must set args.func to its handler in register()
        return args.func(args)
    except PhysicsGuardError as exc:
        print(f"ERROR: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PHYSICS_GUARD
    except ValidationError as exc:
        print(f"ERROR: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SedimentError as exc:
        print(f"ERROR: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == '__main__':
    sys.exit(main())
