"""JSON / CSV / OBJ writers.

All floats are written with 12 significant digits. JSON keeps dataclass
field order, so ``to_json(json.loads(text)) == text`` for any report.
"""
import csv
import dataclasses
import json
from enum import Enum
from typing import Any, TextIO

import numpy as np

from .channels import TRAJECTORY_COLUMNS
from .config import config

DIGITS = config.output_significant_digits


def format_float(value: float) -> str:
    return f"{value:.{DIGITS}g}"


def _round(value: float):
    value = float(value)
    if not np.isfinite(value):
        return None
    return float(format_float(value))


def to_plain(value: Any) -> Any:
    """Convert reports into JSON-ready builtins, preserving field order."""
    if value is None or isinstance(value, (bool, np.bool_)):
        return None if value is None else bool(value)
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return _round(value)
    if isinstance(value, str):
        return value
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {
            f.name: to_plain(getattr(value, f.name))
            for f in dataclasses.fields(value)
            if not callable(getattr(value, f.name))
        }
    if hasattr(value, "_asdict"):
        return {key: to_plain(item) for key, item in value._asdict().items()}
    if isinstance(value, dict):
        return {str(key): to_plain(item) for key, item in value.items()}
    if isinstance(value, np.ndarray):
        return [to_plain(item) for item in value.tolist()]
    if isinstance(value, (list, tuple)):
        return [to_plain(item) for item in value]
    raise TypeError(f"cannot serialize {type(value).__name__}")


def to_json(value: Any) -> str:
    """Indented JSON text of a report, trajectory or mesh summary."""
    return json.dumps(to_plain(value), indent=2) + "\n"


def write_trajectory_csv(trajectory, stream: TextIO):
    columns = list(TRAJECTORY_COLUMNS)
    if trajectory.t is not None:
        columns.insert(0, "t")

    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(columns)
    data = [getattr(trajectory, name) for name in columns]
    for row in zip(*data):
        writer.writerow([format_float(v) for v in row])


def write_grid_csv(field, stream: TextIO):
    """Raw grid samples: c1, c2, c3, physical, value (blank where masked)."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["c1", "c2", "c3", "physical", "value"])
    c1, c2, c3 = field.grid.coordinates()
    for a, b, c, physical, value in zip(c1.ravel(), c2.ravel(), c3.ravel(), field.mask.ravel(), field.values.ravel()):
        writer.writerow([
            format_float(a),
            format_float(b),
            format_float(c),
            int(physical),
            format_float(value) if physical else "",
        ])


def write_obj(mesh, stream: TextIO):
    """ASCII OBJ with 1-based face indices; no normals."""
    stream.write(f"# {mesh.measure} level {format_float(mesh.level)}\n")
    for x, y, z in mesh.vertices:
        stream.write(f"v {format_float(x)} {format_float(y)} {format_float(z)}\n")
    for i, j, k in mesh.triangles:
        stream.write(f"f {i + 1} {j + 1} {k + 1}\n")


__all__ = ["format_float", "to_plain", "to_json", "write_trajectory_csv", "write_grid_csv", "write_obj"]
