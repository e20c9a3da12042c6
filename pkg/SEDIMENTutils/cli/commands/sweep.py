#!/usr/bin/env python3
"""
commands/sweep.py

Run an epsilon ladder and write the convergence report.

Examples:
  sediment_lab sweep --n 512 2048 8192 --c0 0.1 --beta 3 -o runs/report.csv
  sediment_lab sweep --config ladder.yml --set reflection.k_max=50 --format json
"""

from pathlib import Path

from ...harness.report import emit_report, render_report_markdown
from ...harness.sweep import sweep_epsilon
from ..args import add_config_args, add_format_arg
from ..experiment import explicit_workers, load_experiment
from ..formatting import format_float, print_table
from ..writers import write_text


def register(subparsers):
    p = subparsers.add_parser(
        'sweep',
        help='Micro versus macro convergence study over a ladder of N',
        description="""
For each N: sample the configuration from the config density, run the
particle dynamics and the macroscopic solver, cube-average both at
delta_tilde = n * delta with delta = delta_factor * d_min(0), and report
the sup-in-time X_beta distance. Failed rungs are reported, not fatal;
the command then exits 2.
""",
    )
    add_config_args(p)
    p.add_argument('--n', type=int, nargs='+', help='Ladder of particle counts (strictly increasing)')
    p.add_argument('--c0', type=float, help='Separation constant')
    p.add_argument('--xi', type=float, help='Target screening parameter xi*')
    p.add_argument('--beta', type=float, help='X_beta weight exponent (> 2)')
    p.add_argument('--t-final', type=float, help='Final time T')
    p.add_argument('--dt', type=float, help='Requested step size')
    p.add_argument('--delta', type=float, dest='delta_factor', help='delta as a multiple of d_min(0)')
    p.add_argument('--delta-tilde-factor', type=int, help='Integer n with delta_tilde = n * delta')
    p.add_argument('--seed', type=int, nargs='+', help='One seed, or one per rung')
    p.add_argument('--row-workers', type=int, help='Rungs run concurrently')
    p.add_argument('--workers', type=int, help='Threads for pairwise sums (default: SEDIMENT_WORKERS or 1)')
    p.add_argument('--deterministic', action='store_true', default=None, help='Force bit-identical reruns')
    p.add_argument('-o', '--out', help='Report path (default: <output_dir>/report.<format>)')
    add_format_arg(p)
    p.set_defaults(func=do_sweep)


def do_sweep(args):
    workers = explicit_workers(args)
    config = load_experiment(
        args,
        {
            'epsilon_ladder': args.n,
            'c0': args.c0,
            'xi_target': args.xi,
            'beta': args.beta,
            't_final': args.t_final,
            'dt': args.dt,
            'delta_factor': args.delta_factor,
            'delta_tilde_factor': args.delta_tilde_factor,
            'seeds': args.seed,
            'row_workers': args.row_workers,
            'deterministic': args.deterministic,
            'reflection': {'workers': workers} if workers else None,
        },
    )
    fmt = args.format or (Path(args.out).suffix.lstrip('.') if args.out else 'csv')
    out = Path(args.out) if args.out else Path(config.output_dir) / f"report.{fmt}"

    report = sweep_epsilon(config)
    emit_report(report, out, fmt)
    markdown = out.with_suffix('.md')
    write_text(render_report_markdown(report), markdown)

    print_table(
        ['N', 'status', 'X_beta(0)', 'sup X_beta', 'final d_min', 'max Y', 'wall [s]'],
        [[
            row.n,
            row.status,
            format_float(row.initial_distance),
            format_float(row.sup_distance),
            format_float(row.final_d_min),
            format_float(row.max_y),
            format_float(row.wall_time, 3),
        ] for row in report.rows],
    )
    for row in report.failed:
        print(f"N={row.n} failed: {row.error}")
    print(f"Wrote report to {out} and {markdown}")
    return 2 if report.failed else 0
