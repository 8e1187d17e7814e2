"""TimeSeriesTable: a time column plus named observable columns."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

TIME_COLUMN = "omega_t"


def format_number(x: float) -> str:
    """17 significant digits; round-trips any double."""
    return format(float(x), ".17g")


@dataclass
class TimeSeriesTable:
    columns: dict[str, np.ndarray]
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        cols = {}
        for name, values in self.columns.items():
            cols[str(name)] = np.asarray(values, dtype=float).ravel()
        if not cols:
            raise ValueError("table needs at least one column")
        first = next(iter(cols))
        if first != TIME_COLUMN:
            raise ValueError(f"first column must be {TIME_COLUMN!r}, got {first!r}")
        n = cols[first].size
        for name, values in cols.items():
            if values.size != n:
                raise ValueError(f"column {name!r} has length {values.size}, expected {n}")
        if n > 1 and np.any(np.diff(cols[first]) <= 0):
            raise ValueError("time column must be strictly increasing")
        self.columns = cols

    @property
    def names(self) -> list[str]:
        return list(self.columns)

    def __getitem__(self, name: str) -> np.ndarray:
        return self.columns[name]

    def __len__(self):
        return self.columns[TIME_COLUMN].size

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.names)
        data = np.column_stack([self.columns[n] for n in self.names])
        for row in data:
            writer.writerow([format_number(x) for x in row])
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {
            "metadata": self.metadata,
            "columns": self.names,
            "data": {n: [float(x) for x in v] for n, v in self.columns.items()},
        }
        return json.dumps(doc, indent=1, allow_nan=False)

    @classmethod
    def from_json(cls, text: str) -> "TimeSeriesTable":
        doc = json.loads(text)
        return cls({n: doc["data"][n] for n in doc["columns"]}, doc.get("metadata", {}))

    @classmethod
    def from_csv(cls, text: str, metadata: dict | None = None) -> "TimeSeriesTable":
        rows = list(csv.reader(io.StringIO(text)))
        header, body = rows[0], rows[1:]
        data = np.array(body, dtype=float).reshape(len(body), len(header))
        return cls({h: data[:, i] for i, h in enumerate(header)}, metadata or {})

    def render(self, fmt: str) -> str:
        if fmt == "csv":
            return self.to_csv()
        if fmt == "json":
            return self.to_json()
        raise ValueError(f"unknown output format {fmt!r}")
