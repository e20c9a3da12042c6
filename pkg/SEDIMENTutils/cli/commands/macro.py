#!/usr/bin/env python3
"""Evolve the macroscopic transport-Stokes density with blob markers."""

from pathlib import Path

from ...macro.evolution import run_macro
from ...macro.markers import init_markers
from ...micro.pairwise import PairwiseEngine
from ..args import add_config_args, add_deterministic_flag, add_output_arg, add_time_args, add_workers_arg
from ..experiment import load_experiment, resolve_workers
from ..formatting import format_float, print_table
from ..writers import write_trace


def register(subparsers):
    p = subparsers.add_parser(
        'macro',
        help='Evolve the macroscopic density',
        description="""
Markers on an h-lattice carry rho0(x) h^3 and move with the regularised
Stokes velocity of all markers plus the drift (2/9) xi^2 e.
The initial density is the config's density block (see --config / --set).
""",
    )
    add_config_args(p)
    p.add_argument('--h', type=float, help='Marker lattice spacing (default: config macro_h)')
    p.add_argument('--blob-factor', type=float, help='Blob width as a multiple of h (default: config)')
    p.add_argument('--xi', type=float, help='Screening parameter xi* (default: config xi_target)')
    p.add_argument('--kernel', choices=['stokeslet', 'algebraic'], help='Blob kernel (default: config)')
    p.add_argument('--delta', type=float, help='Deposit snapshots on cubes of this edge')
    add_time_args(p)
    add_workers_arg(p)
    add_deterministic_flag(p)
    add_output_arg(p, default='macro_trace.csv')
    p.set_defaults(func=do_macro)


def do_macro(args):
    config = load_experiment(
        args,
        {'macro_h': args.h, 'blob_factor': args.blob_factor, 'xi_target': args.xi, 'kernel': args.kernel},
    )
    cloud = init_markers(
        config.density.build(),
        config.macro_h,
        blob_factor=config.blob_factor,
        xi_star=config.xi_target,
        kernel=config.kernel,
        engine=PairwiseEngine(workers=resolve_workers(args), deterministic=args.deterministic),
    )
    run = run_macro(
        cloud,
        args.t_final,
        args.dt,
        snapshot_every=args.snapshot_every,
        delta=args.delta,
        scheme=args.scheme,
    )
    out = Path(args.out)
    write_trace(run, out)
    print_table(
        ['markers', 'mass', 'snapshots', 'grid mass drift', 'grid sup variation'],
        [[
            cloud.count,
            format_float(cloud.mass),
            len(run.snapshots),
            format_float(run.mass_drift()) if args.delta else '',
            format_float(run.sup_variation()) if args.delta else '',
        ]],
    )
    print(f"Wrote trace to {out}")
    return 0
