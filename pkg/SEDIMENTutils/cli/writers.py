"""Artifact writers and readers: particle systems, traces, grids and comparison series."""

import csv
import json
from pathlib import Path
from typing import Any, Optional

import numpy as np
from pydantic import ValidationError as PydanticValidationError

from ..exceptions import ReportIOError, ValidationError
from ..macro.evolution import MacroRun, MacroSnapshot
from ..meso.grid import CubeGrid, DensityGrid
from ..micro.dynamics import SimulationTrace, Snapshot
from ..schemas.validators import SCHEMA_VERSION, SystemFile, read_mapping

try:
    import h5py
    HAS_H5PY = True
except ImportError:
    HAS_H5PY = False


MICRO_COLUMNS = ['t', 'i', 'x', 'y', 'z', 'vx', 'vy', 'vz']
MACRO_COLUMNS = ['t', 'i', 'x', 'y', 'z']
GRID_COLUMNS = ['ix', 'iy', 'iz', 'value']
SERIES_COLUMNS = ['t', 'distance', 'skew']


def _convert(obj):
    """Convert numpy containers to JSON-native values."""
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    elif isinstance(obj, dict):
        return {k: _convert(v) for k, v in obj.items()}
    elif isinstance(obj, (list, tuple)):
        return [_convert(v) for v in obj]
    elif isinstance(obj, np.floating):
        return float(obj)
    elif isinstance(obj, np.integer):
        return int(obj)
    return obj


def _open_for_write(path: Path):
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        return open(path, 'w', newline='')
    except OSError as exc:
        raise ReportIOError(path, exc.strerror or str(exc)) from exc


def write_json(data: Any, output_path) -> Path:
    output_path = Path(output_path)
    with _open_for_write(output_path) as f:
        json.dump(_convert(data), f, indent=2)
        f.write('\n')
    return output_path


def write_text(text: str, output_path) -> Path:
    output_path = Path(output_path)
    with _open_for_write(output_path) as f:
        f.write(text)
    return output_path


def sidecar_path(path) -> Path:
    """JSON metadata file stored next to a CSV artifact."""
    return Path(path).with_suffix('.json')


# ---------------------------------------------------------------------------
# Particle systems
# ---------------------------------------------------------------------------
def write_system(system, output_path) -> Path:
    return write_json(SystemFile.from_system(system).model_dump(), output_path)


def read_system(path):
    data = read_mapping(path)
    try:
        return SystemFile(**data).to_system()
    except PydanticValidationError as exc:
        raise ValidationError(f"{path}: invalid particle system file ({exc})") from exc


# ---------------------------------------------------------------------------
# Traces
# ---------------------------------------------------------------------------
def write_trace(trace, output_path) -> Path:
    """Write a micro trace or macro run based on the file extension.

    ``.csv`` writes per-particle rows plus a JSON sidecar with the
    snapshot scalars; ``.h5``/``.hdf5`` writes one HDF5 file.
    """
    output_path = Path(output_path)
    ext = output_path.suffix.lower()
    if ext in ('.h5', '.hdf5'):
        return write_trace_hdf5(trace, output_path)
    if ext == '.csv':
        return write_trace_csv(trace, output_path)
    raise ValidationError(f"Unsupported trace extension: {ext}. Use .csv, .h5 or .hdf5")


def _trace_metadata(trace) -> dict:
    if trace.kind == 'micro':
        return {
            'schema_version': SCHEMA_VERSION,
            'kind': 'micro',
            'radius': trace.radius,
            'drive': trace.drive,
            'count': int(trace.snapshots[0].positions.shape[0]) if trace.snapshots else 0,
            'snapshots': [snap.scalars() for snap in trace.snapshots],
            'step_sizes': trace.step_sizes,
            'events': trace.events,
        }
    return {
        'schema_version': SCHEMA_VERSION,
        'kind': 'macro',
        'weights': trace.weights,
        'count': int(len(trace.weights)),
        'snapshots': [{'t': snap.t} for snap in trace.snapshots],
    }


def write_trace_csv(trace, output_path) -> Path:
    output_path = Path(output_path)
    micro = trace.kind == 'micro'
    with _open_for_write(output_path) as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(MICRO_COLUMNS if micro else MACRO_COLUMNS)
        for snap in trace.snapshots:
            for i, position in enumerate(snap.positions):
                row = [repr(float(snap.t)), i, *(repr(float(v)) for v in position)]
                if micro:
                    row.extend(repr(float(v)) for v in snap.velocities[i])
                writer.writerow(row)
    write_json(_trace_metadata(trace), sidecar_path(output_path))
    return output_path


def write_trace_hdf5(trace, output_path) -> Path:
    """Format: /times, /positions (S, N, 3), /velocities, /scalars/<name>, attrs kind, radius."""
    if not HAS_H5PY:
        raise ImportError("h5py is required for HDF5 output. Install with: pip install h5py")
    output_path = Path(output_path)
    try:
        with h5py.File(output_path, 'w') as f5:
            f5.attrs['schema_version'] = SCHEMA_VERSION
            f5.attrs['kind'] = trace.kind
            f5.create_dataset('times', data=np.array([snap.t for snap in trace.snapshots]))
            f5.create_dataset('positions', data=np.array([snap.positions for snap in trace.snapshots]))
            if trace.kind == 'micro':
                f5.attrs['radius'] = trace.radius
                f5.attrs['drive'] = trace.drive
                f5.create_dataset('velocities', data=np.array([snap.velocities for snap in trace.snapshots]))
                rows = [snap.scalars() for snap in trace.snapshots]
                for key in rows[0] if rows else []:
                    if key != 't':
                        f5.create_dataset(f'scalars/{key}', data=np.array([row[key] for row in rows]))
            else:
                f5.create_dataset('weights', data=np.asarray(trace.weights))
    except OSError as exc:
        raise ReportIOError(output_path, str(exc)) from exc
    return output_path


def read_trace(path):
    """Read a CSV trace (with its sidecar) back into a SimulationTrace or MacroRun."""
    path = Path(path)
    meta = read_mapping(sidecar_path(path))
    if meta.get('schema_version') != SCHEMA_VERSION:
        raise ValidationError(f"{path}: unsupported schema_version {meta.get('schema_version')!r}")
    try:
        table = np.loadtxt(path, delimiter=',', skiprows=1, ndmin=2)
    except (OSError, ValueError) as exc:
        raise ReportIOError(path, str(exc)) from exc

    count = int(meta['count'])
    scalars = meta['snapshots']
    if table.shape[0] != count * len(scalars):
        raise ValidationError(f"{path}: expected {count * len(scalars)} rows, found {table.shape[0]}")
    blocks = table.reshape(len(scalars), count, table.shape[1]) if scalars else table.reshape(0, 0, table.shape[1])

    if meta['kind'] == 'micro':
        trace = SimulationTrace(radius=float(meta['radius']), drive=np.asarray(meta['drive'], dtype=float))
        for block, values in zip(blocks, scalars):
            trace.append(
                Snapshot(
                    positions=block[:, 2:5].copy(),
                    velocities=block[:, 5:8].copy(),
                    **values,
                )
            )
        trace.step_sizes = list(meta.get('step_sizes', []))
        trace.events = list(meta.get('events', []))
        return trace
    if meta['kind'] == 'macro':
        run = MacroRun(weights=np.asarray(meta['weights'], dtype=float))
        for block, values in zip(blocks, scalars):
            run.snapshots.append(MacroSnapshot(t=float(values['t']), positions=block[:, 2:5].copy()))
        return run
    raise ValidationError(f"{path}: unknown trace kind {meta['kind']!r}")


# ---------------------------------------------------------------------------
# Grids and comparison series
# ---------------------------------------------------------------------------
def write_grid(density: DensityGrid, output_path, beta: Optional[float] = None, t: Optional[float] = None) -> Path:
    """JSON header at ``output_path`` plus ``ix,iy,iz,value`` rows in the sibling CSV."""
    output_path = Path(output_path)
    header = {
        'schema_version': SCHEMA_VERSION,
        'delta': density.delta,
        'anchor': density.grid.anchor,
        'extents': density.extents,
        'beta': beta,
        't': t,
        'mass': density.mass(),
        'cells': int(density.values.size),
    }
    write_json(header, output_path)
    with _open_for_write(output_path.with_suffix('.csv')) as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(GRID_COLUMNS)
        for index, value in zip(density.indices, density.values):
            writer.writerow([*(int(k) for k in index), repr(float(value))])
    return output_path


def read_grid(path) -> DensityGrid:
    path = Path(path)
    header = read_mapping(path)
    if header.get('schema_version') != SCHEMA_VERSION:
        raise ValidationError(f"{path}: unsupported schema_version {header.get('schema_version')!r}")
    values_path = path.with_suffix('.csv')
    try:
        table = np.loadtxt(values_path, delimiter=',', skiprows=1, ndmin=2)
    except (OSError, ValueError) as exc:
        raise ReportIOError(values_path, str(exc)) from exc
    grid = CubeGrid(float(header['delta']), np.asarray(header['anchor'], dtype=float))
    if table.size == 0:
        return DensityGrid(grid, np.zeros((0, 3), dtype=np.int64), np.zeros(0))
    return DensityGrid(grid, table[:, :3].astype(np.int64), table[:, 3])


def write_series(series, output_path) -> Path:
    output_path = Path(output_path)
    with _open_for_write(output_path) as f:
        f.write(f"# schema_version={SCHEMA_VERSION} beta={series.beta!r} sup={series.sup!r}\n")
        writer = csv.DictWriter(f, fieldnames=SERIES_COLUMNS, lineterminator='\n')
        writer.writeheader()
        for row in series.rows():
            writer.writerow({key: repr(value) for key, value in row.items()})
    return output_path
