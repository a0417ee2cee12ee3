"""Tabular ingestion: typed columns, class labels, 0/1 response encoding.

Rows keep the exact order they were read in; every downstream index
refers to that order.  Missing values are a hard error unless the caller
asks for incomplete rows to be dropped, because silently imputing them
would shift split optima in unpredictable ways.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np


@dataclass
class Column:
    name: str
    kind: str  # "numeric" | "categorical"
    values: np.ndarray  # float64 for numeric, str objects for categorical

    def __post_init__(self) -> None:
        if self.kind not in ("numeric", "categorical"):
            raise ValueError(f"unknown column kind {self.kind!r}")


@dataclass
class Dataset:
    columns: list[Column]
    target: list[str]
    classes: list[str] = field(default_factory=list)
    target_name: str = "class"

    def __post_init__(self) -> None:
        if not self.classes:
            self.classes = _distinct_in_order(self.target)
        if len(self.classes) < 2:
            raise ValueError("target must have at least two classes")
        known = set(self.classes)
        for label in self.target:
            if label not in known:
                raise ValueError(f"target label {label!r} not in class set")

    @property
    def n(self) -> int:
        return len(self.target)

    def column(self, name: str) -> Column:
        for col in self.columns:
            if col.name == name:
                return col
        raise KeyError(f"no column named {name!r}")

    def rows(self):
        """Iterate rows as name->value mappings (prediction input shape)."""
        for i in range(self.n):
            yield {col.name: col.values[i] for col in self.columns}

    def subset(self, rows: np.ndarray) -> "Dataset":
        """Row-subset view used when splitting tree nodes."""
        cols = [Column(c.name, c.kind, c.values[rows]) for c in self.columns]
        target = [self.target[i] for i in rows]
        return Dataset(cols, target, classes=list(self.classes), target_name=self.target_name)


@dataclass(frozen=True)
class BinaryTarget:
    """0/1 response vector: 1 where the target equals the positive label."""

    y: np.ndarray
    positive_label: str


def _distinct_in_order(labels) -> list[str]:
    seen = []
    for x in labels:
        if x not in seen:
            seen.append(x)
    return seen


def _parses_numeric(token: str) -> bool:
    try:
        return math.isfinite(float(token))
    except ValueError:
        return False


def load_csv(
    path: str,
    target_column: str,
    *,
    delimiter: str = ",",
    drop_incomplete: bool = False,
    column_kinds: dict[str, str] | None = None,
) -> Dataset:
    """Load a delimited text file with a header row into a Dataset.

    A column is numeric when every value parses as a finite number,
    categorical otherwise; ``column_kinds`` overrides per column.  Empty
    fields are missing values: an error unless drop_incomplete removes
    those rows.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh, delimiter=delimiter)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file") from None
        raw_rows = []
        for lineno, row in enumerate(reader, start=1):
            if len(row) != len(header):
                raise ValueError(
                    f"{path}: row {lineno} has {len(row)} fields, expected {len(header)}"
                )
            raw_rows.append(row)

    if target_column not in header:
        raise ValueError(f"target column {target_column!r} not found")
    if len(header) < 2:
        raise ValueError("need at least one input column besides the target")
    tidx = header.index(target_column)

    if drop_incomplete:
        raw_rows = [r for r in raw_rows if all(f.strip() != "" for f in r)]
    else:
        for i, row in enumerate(raw_rows, start=1):
            for j, fieldval in enumerate(row):
                if fieldval.strip() == "":
                    raise ValueError(f"missing value at row {i}, column {header[j]}")
    if not raw_rows:
        raise ValueError("no data rows")

    kinds = column_kinds or {}
    columns: list[Column] = []
    for j, name in enumerate(header):
        if j == tidx:
            continue
        tokens = [row[j].strip() for row in raw_rows]
        kind = kinds.get(name)
        if kind is None:
            kind = "numeric" if all(_parses_numeric(t) for t in tokens) else "categorical"
        if kind == "numeric":
            try:
                values = np.array([float(t) for t in tokens], dtype=np.float64)
            except ValueError as exc:
                raise ValueError(f"column {name!r} declared numeric but {exc}") from None
        else:
            values = np.array(tokens, dtype=object)
        columns.append(Column(name, kind, values))

    target = [row[tidx].strip() for row in raw_rows]
    return Dataset(columns, target, target_name=target_column)


def write_csv(d: Dataset, path: str, *, delimiter: str = ",") -> None:
    """Write a Dataset back to delimited text (inverse of load_csv)."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, delimiter=delimiter)
        writer.writerow([c.name for c in d.columns] + [d.target_name])
        for i in range(d.n):
            row = [
                repr(float(c.values[i])) if c.kind == "numeric" else str(c.values[i])
                for c in d.columns
            ]
            row.append(d.target[i])
            writer.writerow(row)


def read_rows(path: str, *, delimiter: str = ",") -> tuple[list[str], list[dict[str, str]]]:
    """Read a CSV as raw string rows keyed by header name.

    Prediction input: no typing or missing-value policy here; questions
    referencing a missing value fail at routing time, other columns are
    free to be incomplete.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh, delimiter=delimiter)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file") from None
        rows = []
        for lineno, row in enumerate(reader, start=1):
            if len(row) != len(header):
                raise ValueError(
                    f"{path}: row {lineno} has {len(row)} fields, expected {len(header)}"
                )
            rows.append(dict(zip(header, row)))
    return header, rows


def binarize_target(d: Dataset, positive_label: str) -> BinaryTarget:
    """Encode the target as 0/1 with the given label mapped to 1."""
    if positive_label not in d.classes:
        raise ValueError(f"label {positive_label!r} not among classes {d.classes}")
    y = np.fromiter((1 if t == positive_label else 0 for t in d.target), dtype=np.uint8, count=d.n)
    return BinaryTarget(y=y, positive_label=positive_label)


def load_binary_features(path: str, *, label_first: bool = True):
    """Read a space-separated all-binary instance file.

    Each line is the class label followed by the 0/1 feature values (the
    layout used by published binary-feature benchmark sets).  Returns
    (B, y, names) with features named V1..Vm in file order.
    """
    rows = []
    labels = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.split()
            if not parts:
                continue
            vals = [int(p) for p in parts]
            if any(v not in (0, 1) for v in vals):
                raise ValueError(f"{path}: non-binary value on line {lineno}")
            if label_first:
                labels.append(vals[0])
                rows.append(vals[1:])
            else:
                labels.append(vals[-1])
                rows.append(vals[:-1])
    if not rows:
        raise ValueError(f"{path}: no data")
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise ValueError(f"{path}: ragged rows")
    B = np.array(rows, dtype=np.uint8)
    y = np.array(labels, dtype=np.uint8)
    names = [f"V{k + 1}" for k in range(B.shape[1])]
    return B, y, names
