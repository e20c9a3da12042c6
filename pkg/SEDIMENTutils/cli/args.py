"""Reusable argparse argument helpers."""

from __future__ import annotations

import argparse


def add_config_args(parser):
    parser.add_argument("--config", help="Experiment config file (.json, .yml or .yaml)")
    parser.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help='Override a config entry, dotted keys allowed (e.g. "reflection.k_max=50")',
    )


def add_system_args(parser, n_default: int | None = 512):
    group = parser.add_argument_group("Particle system")
    group.add_argument("--n", type=int, default=n_default, help="Number of particles")
    group.add_argument("--c0", type=float, default=0.1, help="Separation constant: d_min >= (c0/N)^(1/3)")
    group.add_argument("--xi", type=float, default=1.0, help="Screening parameter; radius R = 1/(N xi^2)")
    group.add_argument("--seed", type=int, default=7, help="Random seed")


def add_time_args(parser):
    group = parser.add_argument_group("Time stepping")
    group.add_argument("--t-final", type=float, default=0.5, help="Final time T")
    group.add_argument("--dt", type=float, default=0.05, help="Requested step size")
    group.add_argument("--snapshot-every", type=float, help="Snapshot cadence (default T/50)")
    group.add_argument("--scheme", choices=["euler", "rk2"], default="rk2", help="Time integrator")


def add_deterministic_flag(parser):
    parser.add_argument(
        "--deterministic",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="Fixed summation order so repeated runs are bit-identical",
    )


def add_workers_arg(parser):
    parser.add_argument(
        "--workers",
        type=int,
        help="Threads for pairwise sums (default: SEDIMENT_WORKERS or 1)",
    )


def add_beta_arg(parser):
    parser.add_argument("--beta", type=float, default=3.0, help="Weight exponent of the X_beta norm (> 2)")


def add_output_arg(parser, default: str | None = None, help_text: str | None = None):
    parser.add_argument(
        "-o",
        "--out",
        default=default,
        required=default is None,
        help=help_text or "Output file path",
    )


def add_format_arg(parser, choices=("csv", "json"), default: str | None = None):
    parser.add_argument(
        "--format",
        choices=list(choices),
        default=default,
        help="Output format (default: inferred from the --out suffix)",
    )
