#!/usr/bin/env python3
"""Run the particle dynamics and write a trace."""

from pathlib import Path

from ...exceptions import PhysicsGuardError
from ...micro.dynamics import run_micro
from ...micro.system import generate_configuration
from ..args import (
    add_deterministic_flag,
    add_output_arg,
    add_system_args,
    add_time_args,
    add_workers_arg,
)
from ..experiment import add_reflection_args, reflection_params_from_args
from ..formatting import format_float, print_table
from ..writers import read_system, write_trace


def register(subparsers):
    p = subparsers.add_parser(
        'micro',
        help='Simulate N sedimenting spheres',
        description="""
Integrate X_i' = V_i with velocities from the method of reflections.

The system comes from --system, or is generated from --n/--c0/--xi/--seed.
Output is CSV (+ JSON sidecar) or HDF5, chosen by the --out suffix.
A physics guard (collision, divergence) writes the partial trace and exits 2.
""",
    )
    p.add_argument('--system', help='Particle system file written by "gen"')
    add_system_args(p)
    add_time_args(p)
    add_reflection_args(p)
    p.add_argument('--cfl-frac', type=float, default=0.1, help='Step cap as a fraction of d_min / max|V|')
    add_workers_arg(p)
    add_deterministic_flag(p)
    add_output_arg(p, default='micro_trace.csv')
    p.set_defaults(func=do_micro)


def do_micro(args):
    if args.system:
        system = read_system(args.system)
    else:
        system = generate_configuration(args.n, args.c0, args.seed, xi=args.xi)
    params = reflection_params_from_args(args)
    out = Path(args.out)

    try:
        trace = run_micro(
            system,
            args.t_final,
            args.dt,
            snapshot_every=args.snapshot_every,
            scheme=args.scheme,
            cfl_frac=args.cfl_frac,
            params=params,
        )
    except PhysicsGuardError as exc:
        if exc.partial is not None and exc.partial.snapshots:
            write_trace(exc.partial, out)
            print(f"Partial trace written to {out}")
        raise

    write_trace(trace, out)
    last = trace.snapshots[-1]
    print_table(
        ['N', 'snapshots', 'steps', 'final d_min', 'Y(T)', 'max residual', 'events'],
        [[
            system.count,
            len(trace.snapshots),
            len(trace.step_sizes),
            format_float(last.d_min),
            format_float(last.y),
            format_float(float(trace.residuals.max())),
            len(trace.events),
        ]],
    )
    print(f"Wrote trace to {out}")
    return 0
