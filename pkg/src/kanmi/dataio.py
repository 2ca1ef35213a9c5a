"""CSV ingestion and label/report output.

Values are opaque strings; nothing is type-inferred. Empty cells are
replaced by the missing token, which is then an ordinary category.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

from .core import Dataset, Labeling


class DataFormatError(ValueError):
    pass


@dataclass
class CsvFormat:
    delimiter: str = ","
    header: bool = False
    class_column: int | str | None = None
    missing: str = "?"
    drop_columns: list[int | str] = field(default_factory=list)


def _resolve(col, names: list[str] | None, width: int, what: str) -> int:
    if isinstance(col, str) and not col.lstrip("-").isdigit():
        if names is None:
            raise DataFormatError(f"{what} {col!r} given by name but the file has no header")
        if col not in names:
            raise DataFormatError(f"{what} {col!r} not found in header {names}")
        return names.index(col)
    idx = int(col)
    if idx < 0:
        idx += width
    if not 0 <= idx < width:
        raise DataFormatError(f"{what} {col} out of range for {width} columns")
    return idx


def read_rows(path, fmt: CsvFormat) -> tuple[list[str] | None, list[list[str]]]:
    path = Path(path)
    try:
        fh = path.open(newline="", encoding="utf-8")
    except OSError as exc:
        raise DataFormatError(f"cannot read {path}: {exc.strerror}") from exc
    with fh:
        reader = csv.reader(fh, delimiter=fmt.delimiter)
        header = None
        rows = []
        width = None
        for lineno, row in enumerate(reader, start=1):
            if not row or all(not c.strip() for c in row):
                continue
            row = [c.strip() for c in row]
            if fmt.header and header is None:
                header = row
                width = len(row)
                continue
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise DataFormatError(
                    f"{path}: line {lineno} has {len(row)} fields, expected {width}")
            rows.append([c if c else fmt.missing for c in row])
    return header, rows


def read_dataset(path, fmt: CsvFormat | None = None) -> Dataset:
    fmt = fmt or CsvFormat()
    header, rows = read_rows(path, fmt)
    if not rows:
        raise DataFormatError(f"{path}: no data rows")
    width = len(rows[0])
    cls = None
    if fmt.class_column is not None:
        cls = _resolve(fmt.class_column, header, width, "class column")
    dropped = {_resolve(c, header, width, "dropped column") for c in fmt.drop_columns}
    keep = [i for i in range(width) if i != cls and i not in dropped]
    if not keep:
        raise DataFormatError(f"{path}: no attribute columns left to cluster")
    names = [header[i] for i in keep] if header else [f"a{i + 1}" for i in range(len(keep))]
    records = [tuple(row[i] for i in keep) for row in rows]
    gt = None
    class_values: list = []
    if cls is not None:
        raw = [row[cls] for row in rows]
        gt = Labeling(raw)
        class_values = list(dict.fromkeys(raw))
    return Dataset(records, names, gt, class_values)


def write_labels(path, labels) -> None:
    with Path(path).open("w", newline="") as fh:
        fh.write("label\n")
        for l in labels:
            fh.write(f"{int(l)}\n")


def read_column(path, column: int | str = 0, header: bool = True,
                delimiter: str = ",") -> list[str]:
    hdr, rows = read_rows(path, CsvFormat(delimiter=delimiter, header=header))
    if not rows:
        raise DataFormatError(f"{path}: no data rows")
    idx = _resolve(column, hdr, len(rows[0]), "column")
    return [row[idx] for row in rows]


def dump_json(obj, path=None) -> str:
    text = json.dumps(obj, indent=2, sort_keys=True)
    if path is not None:
        Path(path).write_text(text + "\n")
    return text
