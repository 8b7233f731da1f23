"""Bit-stable dataset serialization: CSV with a commented metadata header
plus a JSON sidecar.

Data files are deterministic for identical configurations: metadata is
canonical JSON (sorted keys), floats are written with 17 significant
digits, line endings are ``\\n`` and no timestamps enter the data file.
Wall-clock time lives only in the sidecar.
"""
from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


def _jsonify(value):
    """Make metadata JSON-able; complex numbers become [re, im] pairs."""
    if isinstance(value, complex):
        return {"re": value.real, "im": value.imag}
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, np.ndarray):
        return [_jsonify(v) for v in value.tolist()]
    if isinstance(value, dict):
        return {str(k): _jsonify(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonify(v) for v in value]
    return value


@dataclass(frozen=True, eq=False)
class Dataset:
    """Labeled numeric table plus run metadata; the unit of CLI output."""

    name: str
    columns: tuple[str, ...]
    units: tuple[str, ...]
    data: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        data = np.asarray(self.data, dtype=float)
        if data.size == 0:
            data = data.reshape(0, len(self.columns))
        if data.ndim != 2 or data.shape[1] != len(self.columns):
            raise ValueError(
                f"data shape {data.shape} does not match "
                f"{len(self.columns)} columns")
        if len(self.units) != len(self.columns):
            raise ValueError("units must parallel columns")
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "columns", tuple(self.columns))
        object.__setattr__(self, "units", tuple(self.units))

    @property
    def n_rows(self) -> int:
        return int(self.data.shape[0])

    def column(self, name: str) -> np.ndarray:
        try:
            idx = self.columns.index(name)
        except ValueError:
            raise KeyError(f"no column {name!r} in dataset {self.name!r}")
        return self.data[:, idx]


def _format_float(x: float) -> str:
    return format(float(x), ".17g")


def write_dataset(dataset: Dataset, path: str | Path) -> Path:
    """Write the CSV data file and its JSON metadata sidecar.

    The CSV re-reads bit-identically through ``read_dataset``.
    """
    path = Path(path)
    meta_json = json.dumps(_jsonify(dataset.metadata), sort_keys=True,
                           separators=(",", ":"))
    lines = [
        f"# dataset: {dataset.name}",
        f"# metadata: {meta_json}",
        ",".join(f"{c} [{u}]" for c, u in zip(dataset.columns, dataset.units)),
    ]
    for row in dataset.data:
        lines.append(",".join(_format_float(v) for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")

    sidecar = path.with_suffix(path.suffix + ".meta.json")
    payload = {
        "dataset": dataset.name,
        "columns": list(dataset.columns),
        "units": list(dataset.units),
        "n_rows": dataset.n_rows,
        "metadata": _jsonify(dataset.metadata),
        "wall_time_s": time.time(),
    }
    sidecar.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n",
                       encoding="utf-8", newline="\n")
    return path


def read_dataset(path: str | Path) -> Dataset:
    """Parse a dataset written by ``write_dataset``."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    lines = text.splitlines()
    if len(lines) < 3:
        raise ValueError(f"{path} is not a dataset file")
    if not lines[0].startswith("# dataset: "):
        raise ValueError(f"{path} lacks the dataset header")
    name = lines[0][len("# dataset: "):]
    if not lines[1].startswith("# metadata: "):
        raise ValueError(f"{path} lacks the metadata header")
    metadata = json.loads(lines[1][len("# metadata: "):])
    header = lines[2].split(",")
    columns, units = [], []
    for cell in header:
        if not cell.endswith("]") or " [" not in cell:
            raise ValueError(f"malformed column header {cell!r}")
        cname, unit = cell.rsplit(" [", 1)
        columns.append(cname)
        units.append(unit[:-1])
    rows = [[float(v) for v in line.split(",")] for line in lines[3:] if line]
    data = np.array(rows, dtype=float) if rows else \
        np.empty((0, len(columns)))
    return Dataset(name=name, columns=tuple(columns), units=tuple(units),
                   data=data, metadata=metadata)
