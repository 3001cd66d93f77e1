"""Self-describing CSV/JSON writers.

Every file opens with a header recording the tool version, the master seed and
the fully resolved configuration. Floats are written with ``repr`` (shortest
round-trip form, locale independent); missing values are empty cells.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from . import __version__


def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    value = float(value)
    if math.isnan(value):
        return ""
    return repr(value)


def header_lines(config: dict, seed: int) -> list[str]:
    return [
        f"castopt {__version__}",
        f"seed = {seed}",
        "config = " + json.dumps(config, sort_keys=True),
    ]


def write_csv(path: Path, columns, rows, config: dict, seed: int) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        for line in header_lines(config, seed):
            fh.write(f"# {line}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([fmt(v) for v in row])
    return path


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return None if math.isnan(value) else value
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def write_json(path: Path, payload: dict, config: dict, seed: int) -> Path:
    """JSON has no comments, so the header goes in a leading ``header`` object."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    doc = {
        "header": {"tool": "castopt", "version": __version__, "seed": seed,
                   "config": config},
        **payload,
    }
    path.write_text(json.dumps(_jsonable(doc), indent=2) + "\n")
    return path


def read_csv_body(path) -> str:
    """File contents minus the ``#`` header lines."""
    lines = Path(path).read_text().splitlines(keepends=True)
    return "".join(line for line in lines if not line.startswith("#"))
