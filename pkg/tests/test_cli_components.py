"""Tests for CLI helpers: formatting, runtime settings and argument groups."""

import argparse
import logging

import pytest

from SEDIMENTutils.cli.args import add_config_args, add_deterministic_flag, add_output_arg, add_time_args
from SEDIMENTutils.cli.experiment import explicit_workers, load_experiment, resolve_workers
from SEDIMENTutils.cli.formatting import format_float, print_table
from SEDIMENTutils.cli.runtime import configure_logging, get_default_log_level, get_default_workers
from SEDIMENTutils.exceptions import ConfigError


def test_format_float():
    assert format_float(None) == ''
    assert format_float(float('nan')) == 'NaN'
    assert format_float(float('-inf')) == '-inf'
    assert format_float(1.23456789) == '1.2346'
    assert format_float('n/a') == 'n/a'


def test_print_table_aligns_columns(capsys):
    print_table(['N', 'status'], [{'N': 512, 'status': 'ok'}, {'N': 8192, 'status': 'failed'}])
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 4
    assert lines[0].split() == ['N', 'status']
    assert len({line.index(line.split()[1]) for line in lines[2:]}) == 1


def test_print_table_empty(capsys):
    print_table(['a'], [])
    assert capsys.readouterr().out == ''


def test_runtime_defaults(monkeypatch):
    monkeypatch.delenv('SEDIMENT_LOG_LEVEL', raising=False)
    monkeypatch.delenv('SEDIMENT_WORKERS', raising=False)
    assert get_default_log_level() == 'WARNING'
    assert get_default_workers() == 1
    monkeypatch.setenv('SEDIMENT_WORKERS', '4')
    assert get_default_workers() == 4
    monkeypatch.setenv('SEDIMENT_WORKERS', '0')
    with pytest.raises(ConfigError):
        get_default_workers()


def test_configure_logging(monkeypatch):
    monkeypatch.setenv('SEDIMENT_LOG_LEVEL', 'debug')
    assert configure_logging() == logging.DEBUG
    assert configure_logging('info') == logging.INFO
    with pytest.raises(ConfigError):
        configure_logging('chatty')


def test_workers_resolution(monkeypatch):
    monkeypatch.delenv('SEDIMENT_WORKERS', raising=False)
    assert explicit_workers(argparse.Namespace(workers=None)) is None
    assert resolve_workers(argparse.Namespace(workers=None)) == 1
    assert resolve_workers(argparse.Namespace(workers=3)) == 3
    monkeypatch.setenv('SEDIMENT_WORKERS', '2')
    assert explicit_workers(argparse.Namespace(workers=None)) == 2


def test_argument_groups():
    parser = argparse.ArgumentParser()
    add_config_args(parser)
    add_time_args(parser)
    add_deterministic_flag(parser)
    add_output_arg(parser, default='out.csv')
    args = parser.parse_args(['--set', 'beta=4', '--set', 'c0=0.2', '--no-deterministic', '--scheme', 'euler'])
    assert args.overrides == ['beta=4', 'c0=0.2']
    assert args.deterministic is False
    assert args.scheme == 'euler'
    assert args.out == 'out.csv'
    assert args.snapshot_every is None


def test_flags_override_config_file(tmp_path):
    config = tmp_path / 'ladder.yml'
    config.write_text('epsilon_ladder: [8, 27]\nc0: 0.2\n')
    args = argparse.Namespace(config=str(config), overrides=['beta=4'])
    loaded = load_experiment(args, {'c0': 0.3, 'dt': None})
    assert loaded.c0 == 0.3
    assert loaded.beta == 4.0
    assert loaded.dt == 0.05
    with pytest.raises(ConfigError):
        load_experiment(args, {'epsilon_ladder': [27, 8]})
