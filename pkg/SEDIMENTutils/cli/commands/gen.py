#!/usr/bin/env python3
"""
commands/gen.py

Generate a seeded particle configuration and write it as a system file.

Examples:
  sediment_lab gen --n 512 --c0 0.1 --seed 7 -o system.json
  sediment_lab gen --n 2048 --shape density --set density.kind=gaussian -o sys.json
"""

from ...micro.system import generate_configuration, validate_assumptions
from ...schemas.validators import SYSTEM_MASS
from ..args import add_config_args, add_output_arg, add_system_args
from ..experiment import load_experiment
from ..formatting import format_float, print_table
from ..writers import write_system


def register(subparsers):
    p = subparsers.add_parser(
        'gen',
        help='Generate a particle configuration',
        description='Jittered lattice with d_min >= (c0/N)^(1/3) and radius R = 1/(N xi^2).',
    )
    add_system_args(p)
    p.add_argument(
        '--shape',
        choices=['ball', 'cube', 'density'],
        default='ball',
        help='Unit ball, [-1,1]^3, or sampled from the config density (default: ball)',
    )
    add_config_args(p)
    add_output_arg(p, default='system.json')
    p.set_defaults(func=do_gen)


def do_gen(args):
    shape = args.shape
    if shape == 'density':
        shape = load_experiment(args).density.build().normalized(SYSTEM_MASS)
    system = generate_configuration(args.n, args.c0, args.seed, shape=shape, xi=args.xi)
    path = write_system(system, args.out)

    report = validate_assumptions(system)
    rows = [[key, format_float(value) if isinstance(value, float) else value]
            for key, value in report.as_dict().items()]
    print_table(['check', 'value'], rows)
    print(f"Wrote {system.count} particles to {path}")
    return 0
