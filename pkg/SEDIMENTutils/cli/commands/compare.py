#!/usr/bin/env python3
"""Compare two traces in the X_beta norm snapshot by snapshot."""

from ...harness.compare import compare_snapshots, macro_density_series, micro_density_series
from ...meso.grid import coarsen
from ..args import add_beta_arg
from ..formatting import format_float, print_table
from ..writers import read_trace, write_series


def register(subparsers):
    p = subparsers.add_parser(
        'compare',
        help='X_beta distance between two traces over time',
        description="""
Each snapshot of --a is matched with the nearest snapshot of --b (no
interpolation, skew at most dt/2); both are averaged on cubes of edge
delta * delta-tilde-factor.
""",
    )
    p.add_argument('--a', required=True, help='First CSV trace (micro or macro)')
    p.add_argument('--b', required=True, help='Second CSV trace (micro or macro)')
    p.add_argument('--delta', type=float, required=True, help='Cube edge')
    p.add_argument('--delta-tilde-factor', type=int, default=1, help='Compare at n * delta')
    p.add_argument('--dt', type=float, default=0.05, help='Step size; the allowed time skew is dt/2')
    add_beta_arg(p)
    p.add_argument('-o', '--out', help='Optional CSV of t, distance, skew')
    p.set_defaults(func=do_compare)


def _series(path, delta, factor):
    trace = read_trace(path)
    if trace.kind == 'micro':
        series = micro_density_series(trace, delta)
    else:
        series = macro_density_series(trace, delta)
    return [(t, coarsen(grid, factor)) for t, grid in series]


def do_compare(args):
    series = compare_snapshots(
        _series(args.a, args.delta, args.delta_tilde_factor),
        _series(args.b, args.delta, args.delta_tilde_factor),
        args.beta,
        max_skew=args.dt / 2.0,
    )
    print_table(['t', 'distance'], [[format_float(r['t']), format_float(r['distance'])] for r in series.rows()])
    print(f"sup distance: {format_float(series.sup)}")
    if args.out:
        print(f"Wrote series to {write_series(series, args.out)}")
    return 0
