"""CSV dataset reading and writing for the command-line surface.

Files are UTF-8, comma-separated, '.' decimal, with one header row of column
names followed by rectangular numeric rows.
"""

import csv

import numpy as np

from .errors import InvalidInputError


def read_csv_dataset(path):
    """Read (column_names, n x C float array); errors cite the offending row."""
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            rows = list(reader)
    except OSError as exc:
        raise InvalidInputError(f"cannot read {path}: {exc.strerror or exc}") from exc
    if not rows:
        raise InvalidInputError(f"{path}: empty file")
    header = rows[0]
    ncols = len(header)
    if ncols == 0:
        raise InvalidInputError(f"{path}: empty header row")
    data = np.empty((len(rows) - 1, ncols))
    for i, row in enumerate(rows[1:], start=2):
        if len(row) != ncols:
            raise InvalidInputError(f"{path}: row {i} has {len(row)} cells, expected {ncols}")
        for j, cell in enumerate(row):
            try:
                value = float(cell)
            except ValueError:
                raise InvalidInputError(
                    f"{path}: row {i}, column {header[j]!r}: cannot parse {cell!r} as a number"
                ) from None
            if not np.isfinite(value):
                raise InvalidInputError(f"{path}: row {i}, column {header[j]!r}: non-finite value")
            data[i - 2, j] = value
    return header, data


def write_csv_dataset(path, header, data):
    """Write a dataset with repr-exact floats so identical data gives identical bytes."""
    data = np.asarray(data)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in data:
            writer.writerow([repr(float(v)) for v in row])


def resolve_columns(header, names, flag):
    """Map comma-separated column names (or indices) to positions."""
    out = []
    for name in names:
        if name in header:
            out.append(header.index(name))
            continue
        try:
            idx = int(name)
        except ValueError:
            raise InvalidInputError(f"{flag}: unknown column {name!r} (header: {', '.join(header)})") from None
        if not 0 <= idx < len(header):
            raise InvalidInputError(f"{flag}: column index {idx} out of range")
        out.append(idx)
    return out
