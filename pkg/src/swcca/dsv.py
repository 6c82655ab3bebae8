"""Delimiter-separated matrix files: one sample per row, optional header row.

Values are written with 17 significant digits so a write/read round trip
reproduces every float exactly.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .errors import DataFormatError

_CANDIDATES = (",", "\t", ";")


def _guess_delimiter(path: Path, line: str):
    if path.suffix.lower() == ".tsv":
        return "\t"
    for d in _CANDIDATES:
        if d in line:
            return d
    return None  # runs of whitespace


def _split(line: str, delimiter):
    if delimiter is None:
        return line.split()
    return [f.strip() for f in line.split(delimiter)]


def _is_number(field: str) -> bool:
    try:
        float(field)
    except ValueError:
        return False
    return True


def read_matrix(path, delimiter: str | None = None):
    """Parse a matrix file; returns ``(values, column_names_or_None)``.

    A first row containing any non-numeric field is taken as the header.
    Raises ``DataFormatError`` naming the 1-based line and column of the
    first bad field.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise DataFormatError(f"not valid UTF-8 ({exc.reason})", path=path) from None
    lines = [(i + 1, ln) for i, ln in enumerate(text.splitlines()) if ln.strip()]
    if not lines:
        raise DataFormatError("file contains no data", path=path)
    if delimiter is None:
        delimiter = _guess_delimiter(path, lines[0][1])
    names = None
    first = _split(lines[0][1], delimiter)
    if not all(_is_number(f) for f in first):
        names = first
        lines = lines[1:]
        if not lines:
            raise DataFormatError("header row but no data rows", path=path)
    width = len(names) if names is not None else None
    rows = []
    for lineno, ln in lines:
        fields = _split(ln, delimiter)
        if width is None:
            width = len(fields)
        if len(fields) != width:
            raise DataFormatError(f"expected {width} fields, found {len(fields)}",
                                  path=path, line=lineno)
        row = []
        for col, f in enumerate(fields, start=1):
            try:
                val = float(f)
            except ValueError:
                raise DataFormatError(f"cannot parse {f!r} as a number",
                                      path=path, line=lineno, column=col) from None
            if not np.isfinite(val):
                raise DataFormatError(f"non-finite value {f!r}",
                                      path=path, line=lineno, column=col)
            row.append(val)
        rows.append(row)
    return np.array(rows, dtype=float), names


def write_matrix(path, values, names=None, delimiter: str = ","):
    values = np.asarray(values, dtype=float)
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        if names is not None:
            fh.write(delimiter.join(names) + "\n")
        np.savetxt(fh, values, fmt="%.17g", delimiter=delimiter)
