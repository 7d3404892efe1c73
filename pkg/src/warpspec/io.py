"""Deterministic CSV and JSON artifact readers and writers.

Every float is rendered with the %.17g format, which round-trips IEEE
doubles exactly, so identical inputs always produce byte-identical files.
Line endings are forced to "\n" regardless of platform.
"""

from __future__ import annotations

import json
import math
import os
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from .errors import ConfigParseError
from .grids import SampledSignal, SpectrumSamples, TimeGrid

__all__ = [
    "format_float",
    "write_csv",
    "write_signal_csv",
    "write_spectrum_csv",
    "write_field_csv",
    "write_report_json",
    "read_signal_csv",
    "read_rate_csv",
]


def format_float(x) -> str:
    """Shortest exact decimal rendering of a double; integers stay integral."""
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        return repr(x)
    return format(x, ".17g")


def _cell(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format_float(value)


def write_csv(path: str, header: Sequence[str], rows: Iterable[Sequence]) -> str:
    """Write a comma-separated table with a single header line. Returns path."""
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_cell(v) for v in row))
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines))
        fh.write("\n")
    return path


def write_signal_csv(path: str, sig: SampledSignal) -> str:
    t = sig.grid.times
    v = sig.values
    return write_csv(path, ("t", "re", "im"), zip(t, v.real, v.imag))


def write_spectrum_csv(path: str, spec: SpectrumSamples) -> str:
    e = spec.grid.energies
    v = spec.values
    return write_csv(path, ("E", "re", "im"), zip(e, v.real, v.imag))


def write_field_csv(path: str, field) -> str:
    """Flatten psi(q, t) to rows (q, t, re, im), q-major."""
    q = field.sgrid.points
    t = field.tgrid.times
    v = field.values

    def rows():
        for i in range(q.size):
            qi = q[i]
            for j in range(t.size):
                yield (qi, t[j], v[i, j].real, v[i, j].imag)

    return write_csv(path, ("q", "t", "re", "im"), rows())


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def write_report_json(path: str, payload: dict) -> str:
    with open(path, "w", newline="") as fh:
        json.dump(payload, fh, indent=2, default=_json_default)
        fh.write("\n")
    return path


def _read_numeric_columns(path: str, min_cols: int, max_cols: int) -> List[Tuple[float, ...]]:
    if not os.path.exists(path):
        raise ConfigParseError(f"file not found: {path}")
    rows: List[Tuple[float, ...]] = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = [p.strip() for p in line.split(",")]
            if lineno == 1:
                try:
                    [float(p) for p in parts]
                except ValueError:
                    continue  # header line
            if not (min_cols <= len(parts) <= max_cols):
                raise ConfigParseError(
                    f"{path}:{lineno}: expected {min_cols}..{max_cols} columns, got {len(parts)}"
                )
            try:
                rows.append(tuple(float(p) for p in parts))
            except ValueError as exc:
                raise ConfigParseError(f"{path}:{lineno}: {exc}") from None
    if len(rows) < 2:
        raise ConfigParseError(f"{path}: need at least 2 data rows")
    return rows


def _uniform_grid(t: np.ndarray, path: str) -> TimeGrid:
    dt = np.diff(t)
    if dt.size == 0 or not np.all(dt > 0):
        raise ConfigParseError(f"{path}: abscissa must be strictly increasing")
    if np.max(np.abs(dt - dt[0])) > 1e-9 * abs(dt[0]):
        raise ConfigParseError(f"{path}: abscissa must be uniformly spaced")
    return TimeGrid(float(t[0]), float(t[-1]), int(t.size))


def read_signal_csv(path: str) -> SampledSignal:
    """Load (t, re[, im]) rows into a SampledSignal on a uniform grid."""
    rows = _read_numeric_columns(path, 2, 3)
    t = np.array([r[0] for r in rows])
    re = np.array([r[1] for r in rows])
    im = np.array([r[2] if len(r) == 3 else 0.0 for r in rows])
    grid = _uniform_grid(t, path)
    return SampledSignal(grid, re + 1j * im)


def read_rate_csv(path: str) -> SampledSignal:
    """Load (t, g) rows for a numeric warp; g is kept real."""
    rows = _read_numeric_columns(path, 2, 2)
    t = np.array([r[0] for r in rows])
    g = np.array([r[1] for r in rows])
    grid = _uniform_grid(t, path)
    return SampledSignal(grid, g.astype(complex))
