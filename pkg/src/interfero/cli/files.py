"""Deterministic CSV and JSON writers."""

from __future__ import annotations

import dataclasses
import enum
import json
import math
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .. import __version__

FLOAT_FORMAT = "{:.12e}"


class OutputError(OSError):
    pass


def _jsonable(value):
    if isinstance(value, enum.Enum):
        return value.value
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {f.name: _jsonable(getattr(value, f.name)) for f in dataclasses.fields(value)}
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        v = float(value)
        return v if math.isfinite(v) else repr(v)
    return value


def dumps(obj) -> str:
    return json.dumps(_jsonable(obj), sort_keys=True, indent=2) + "\n"


def _write(path: Path, text: str) -> Path:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return path


def write_json(path, obj) -> Path:
    return _write(Path(path), dumps(obj))


def write_csv(path, columns: Mapping[str, Sequence[float]], header: Mapping) -> Path:
    """Write numeric columns with ``#``-prefixed metadata lines.

    Numbers use a fixed ``.12e`` format so output is byte-identical across
    runs and locales.  The last header line names the columns, so
    ``numpy.loadtxt(path, delimiter=',')`` reads the body directly.
    """
    names = list(columns)
    if len(names) < 2:
        raise ValueError("a CSV needs at least two columns")
    data = [np.asarray(columns[k], dtype=float).ravel() for k in names]
    if len({d.size for d in data}) != 1:
        raise ValueError("columns must have equal length")
    lines = [f"# interfero {__version__}"]
    for key in sorted(header):
        lines.append(f"# {key}: {json.dumps(_jsonable(header[key]), sort_keys=True)}")
    lines.append("# columns: " + ",".join(names))
    fmt = ",".join([FLOAT_FORMAT] * len(names))
    lines.extend(fmt.format(*row) for row in zip(*data))
    return _write(Path(path), "\n".join(lines) + "\n")


def read_csv_header(path) -> dict:
    """Parse the ``# key: json`` metadata of a file written by :func:`write_csv`."""
    out = {}
    for line in Path(path).read_text().splitlines():
        if not line.startswith("#"):
            break
        key, sep, rest = line[1:].strip().partition(": ")
        if not sep:
            continue
        if key == "columns":
            out[key] = rest.split(",")
        else:
            out[key] = json.loads(rest)
    return out
