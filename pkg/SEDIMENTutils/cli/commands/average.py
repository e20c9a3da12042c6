#!/usr/bin/env python3
"""Cube-average a particle system or one trace snapshot."""

from ...exceptions import ValidationError
from ...meso.grid import coarsen, cube_average, deposit
from ...meso.norms import x_beta_norm
from ...micro.system import ParticleSystem
from ..args import add_beta_arg, add_output_arg
from ..formatting import format_float, print_table
from ..writers import read_system, read_trace, write_grid


def register(subparsers):
    p = subparsers.add_parser(
        'average',
        help='Cube-average particles or markers onto a grid',
        description='Writes a JSON header (delta, anchor, extents, beta) and ix,iy,iz,value rows in a sibling CSV.',
    )
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument('--system', help='Particle system file')
    source.add_argument('--trace', help='Micro or macro CSV trace')
    p.add_argument('--snapshot', type=int, default=-1, help='Snapshot index in the trace (default: last)')
    p.add_argument('--delta', type=float, required=True, help='Cube edge')
    p.add_argument('--delta-tilde-factor', type=int, default=1, help='Coarsen to n * delta after averaging')
    add_beta_arg(p)
    add_output_arg(p, default='grid.json')
    p.set_defaults(func=do_average)


def do_average(args):
    t = None
    if args.system:
        grid = cube_average(read_system(args.system), args.delta)
    else:
        trace = read_trace(args.trace)
        try:
            snap = trace.snapshots[args.snapshot]
        except IndexError as exc:
            raise ValidationError(f"trace has no snapshot {args.snapshot}") from exc
        t = snap.t
        if trace.kind == 'micro':
            grid = cube_average(ParticleSystem(snap.positions, trace.radius, trace.drive), args.delta)
        else:
            grid = deposit(snap.positions, trace.weights, args.delta)
    grid = coarsen(grid, args.delta_tilde_factor)
    path = write_grid(grid, args.out, beta=args.beta, t=t)
    print_table(
        ['delta', 'cells', 'mass', 'X_beta norm'],
        [[format_float(grid.delta), grid.values.size, format_float(grid.mass()), format_float(x_beta_norm(grid, args.beta))]],
    )
    print(f"Wrote grid to {path}")
    return 0
