"""Delimited output: versioned CSV and JSON writers."""
from __future__ import annotations

import io
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

SCHEMA = "# dimer-fluorescence v1"


@dataclass
class Table:
    columns: tuple
    data: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.data = np.atleast_2d(np.asarray(self.data, dtype=float))
        if self.data.size and self.data.shape[1] != len(self.columns):
            raise ValueError(f"{len(self.columns)} columns but data has {self.data.shape[1]}")

    def column(self, name):
        return self.data[:, self.columns.index(name)]

    def records(self):
        return [dict(zip(self.columns, map(float, row))) for row in self.data]


def format_number(x):
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.12g}"


def _meta_value(v):
    if isinstance(v, float):
        return format_number(v)
    return str(v)


def table_to_csv(table: Table) -> str:
    buf = io.StringIO()
    buf.write(SCHEMA + "\n")
    for key in sorted(table.meta):
        buf.write(f"# {key}={_meta_value(table.meta[key])}\n")
    buf.write(",".join(table.columns) + "\n")
    for row in table.data:
        buf.write(",".join(format_number(x) for x in row) + "\n")
    return buf.getvalue()


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if math.isfinite(x) else format_number(x)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def to_json(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"


def table_to_json(table: Table) -> str:
    return to_json({"schema": SCHEMA[2:], "meta": table.meta, "columns": list(table.columns),
                    "rows": table.data})


def read_csv(text):
    """Parse our CSV back into a :class:`Table` (used by tests and plotting)."""
    meta = {}
    lines = text.splitlines()
    if not lines or lines[0] != SCHEMA:
        raise ValueError("missing schema line")
    body = []
    for line in lines[1:]:
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition("=")
            meta[key] = value
        else:
            body.append(line)
    columns = tuple(body[0].split(","))
    data = np.array([[float(x) for x in row.split(",")] for row in body[1:]]) if body[1:] \
        else np.empty((0, len(columns)))
    return Table(columns, data, meta)


def emit(text, path=None):
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
