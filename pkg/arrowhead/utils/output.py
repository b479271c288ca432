from __future__ import annotations

import csv
import io
import json
from typing import Any, Iterable, Mapping, Optional, TextIO

import numpy as np

CSV_COLUMNS = ("parameters", "N", "time_factor_s", "time_solve_s", "iters", "error")


def format_parameters(params: Mapping[str, Any]) -> str:
    """Compact, key-sorted JSON so rows compare byte for byte."""
    return json.dumps(dict(params), sort_keys=True, separators=(",", ":"))


def result_row(
    params: Mapping[str, Any],
    N: int,
    time_factor_s: float = 0.0,
    time_solve_s: float = 0.0,
    iters: int = 0,
    error: float = float("nan"),
) -> dict[str, str]:
    return {
        "parameters": format_parameters(params),
        "N": str(int(N)),
        "time_factor_s": f"{time_factor_s:.6e}",
        "time_solve_s": f"{time_solve_s:.6e}",
        "iters": str(int(iters)),
        "error": f"{error:.6e}",
    }


def write_rows(rows: Iterable[Mapping[str, str]], out: Optional[TextIO] = None) -> str:
    """Write rows under the fixed header; returns the text when ``out`` is ``None``."""
    buffer = io.StringIO() if out is None else out
    writer = csv.DictWriter(buffer, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buffer.getvalue() if out is None else ""


def read_grid_csv(path) -> np.ndarray:
    """Row-major grid values, comma separated, one grid row per line."""
    values = np.loadtxt(path, delimiter=",", ndmin=2)
    if not np.all(np.isfinite(values)):
        raise ValueError(f"{path}: grid values must be finite")
    return values
