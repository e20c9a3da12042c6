#!/usr/bin/env python3
"""Falling uniform ball benchmark for the macroscopic solver."""

from pathlib import Path

from ...macro.evolution import uniform_ball_drop_report
from ...micro.pairwise import PairwiseEngine
from ...templates.renderer import TemplateRenderer
from ..args import add_deterministic_flag, add_workers_arg
from ..experiment import resolve_workers
from ..formatting import format_float, print_table
from ..writers import write_json


def register(subparsers):
    p = subparsers.add_parser(
        'drop',
        help='Falling uniform ball: centre velocity and shape retention',
        description='Compares the centre velocity with (a^2/3) A e and tracks boundary markers over one transit time.',
    )
    p.add_argument('--a', type=float, default=1.0, help='Ball radius')
    p.add_argument('--amplitude', type=float, default=1.0, help='Density inside the ball')
    p.add_argument('--h', type=float, help='Marker spacing (default: a/20)')
    p.add_argument('--steps', type=int, default=10, help='Time steps per transit time')
    p.add_argument('--blob-factor', type=float, default=2.0, help='Blob width as a multiple of h')
    p.add_argument('--kernel', choices=['stokeslet', 'algebraic'], default='stokeslet', help='Blob kernel')
    add_workers_arg(p)
    add_deterministic_flag(p)
    p.add_argument('-o', '--out', help='Write the report as markdown (.md) or JSON (.json)')
    p.set_defaults(func=do_drop)


def do_drop(args):
    report = uniform_ball_drop_report(
        a=args.a,
        amplitude=args.amplitude,
        h=args.h,
        steps=args.steps,
        blob_factor=args.blob_factor,
        kernel=args.kernel,
        engine=PairwiseEngine(workers=resolve_workers(args), deterministic=args.deterministic),
    )
    print_table(
        ['markers', 'centre error', 'amplitude ratio', 'transit time', 'boundary RMS'],
        [[
            report.marker_count,
            f"{100 * report.relative_error:.3f}%",
            format_float(report.amplitude_ratio),
            format_float(report.transit_time),
            f"{100 * report.boundary_rms:.3f}%",
        ]],
    )
    if args.out:
        out = Path(args.out)
        if out.suffix.lower() == '.json':
            write_json(report.as_dict(), out)
        else:
            TemplateRenderer().render_to_file('drop.md.j2', {'report': report.as_dict()}, out)
        print(f"Wrote report to {out}")
    return 0
