"""Report emission: flat CSV for plotting, nested JSON for archival.

The CSV column order is fixed (documented in the README) and float cells are
written with shortest round-trip formatting, so identical results give
byte-identical files.  Wall time lives in the JSON metadata only; putting it
in the CSV would break byte-for-byte reproducibility of reruns.
"""

import csv
import json

import numpy as np

CSV_COLUMNS = [
    "experiment",
    "kind",
    "dgp",
    "estimator",
    "n",
    "d",
    "eps",
    "delta",
    "schedule",
    "seed_label",
    "reps",
    "p_le",
    "p_ge",
    "lhs_point",
    "lhs_std_err",
    "rhs",
    "rhs_std_err",
    "rhs_kind",
    "detail",
    "master_seed",
]


def _pyify(value):
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return [_pyify(v) for v in value.tolist()]
    if isinstance(value, dict):
        return {k: _pyify(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_pyify(v) for v in value]
    return value


def _format_cell(value) -> str:
    value = _pyify(value)
    if value is None or value == "":
        return ""
    if isinstance(value, dict):
        return json.dumps(value, sort_keys=True, separators=(",", ":"))
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(path, rows) -> None:
    """One row per grid point (or per grid coordinate), fixed column order."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            writer.writerow([_format_cell(row.get(col, "")) for col in CSV_COLUMNS])


def write_json(path, result) -> None:
    """Nested archive: config, rows, full profiles, and run metadata."""
    payload = {
        "config": _pyify(result.config.to_dict()),
        "wall_time_s": result.wall_time_s,
        "rows": _pyify(result.rows),
        "profiles": _pyify(result.profiles),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
