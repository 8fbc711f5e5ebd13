"""CSV readers and writers for spaces, measures and reports."""
from __future__ import annotations

import csv
import io as _io
import json
import math

import numpy as np

from .metric_core import MetricSpace, StructuralError, matrix_space


def fmt(x) -> str:
    """Round-trip safe decimal text for a number (17 significant digits)."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if x is None:
        return ""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def read_distance_csv(path, is_semimetric: bool = False) -> MetricSpace:
    """First row holds labels, following rows the matrix entries."""
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r]
    if not rows:
        raise StructuralError(f"{path}: empty file")
    labels = [s.strip() for s in rows[0]]
    try:
        data = [[float(s) for s in r] for r in rows[1:]]
    except ValueError as exc:
        raise StructuralError(f"{path}: non-numeric entry ({exc})") from None
    if len(data) != len(labels) or any(len(r) != len(labels) for r in data):
        raise StructuralError(
            f"{path}: {len(labels)} labels but matrix rows have lengths {[len(r) for r in data]}")
    return matrix_space(np.array(data, dtype=float).reshape(len(labels), len(labels)),
                        labels, is_semimetric=is_semimetric)


def read_distance_csv_unchecked(path):
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r]
    if not rows:
        raise StructuralError(f"{path}: empty file")
    labels = [s.strip() for s in rows[0]]
    try:
        data = [[float(s) for s in r] for r in rows[1:]]
    except ValueError as exc:
        raise StructuralError(f"{path}: non-numeric entry ({exc})") from None
    if any(len(r) != len(labels) for r in data):
        raise StructuralError(
            f"{path}: {len(labels)} labels but matrix rows have lengths {[len(r) for r in data]}")
    return labels, np.array(data, dtype=float).reshape(len(data), len(labels))


def write_distance_csv(space: MetricSpace, path=None) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(space.labels)
    for row in space.dist:
        w.writerow([fmt(v) for v in row])
    text = buf.getvalue()
    if path is not None:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    return text


def read_cloud_csv(path) -> np.ndarray:
    pts = np.loadtxt(path, delimiter=",", ndmin=2)
    return pts


def read_values_csv(path) -> np.ndarray:
    """One value per line (optionally ``label,value``)."""
    vals = []
    with open(path, newline="") as fh:
        for r in csv.reader(fh):
            if not r:
                continue
            vals.append(float(r[-1]))
    return np.array(vals)


def rows_to_csv(header, rows) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([v if isinstance(v, str) else fmt(v) for v in r])
    return buf.getvalue()


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isfinite(x):
            return x
        return "inf" if x > 0 else ("-inf" if x < 0 else "nan")
    if hasattr(obj, "numerator") and hasattr(obj, "denominator"):
        return float(obj)
    return obj


def to_json(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"
