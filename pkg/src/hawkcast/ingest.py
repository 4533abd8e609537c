"""CSV ingestion and CSV/JSON writers for output bundles."""

from __future__ import annotations

import csv
import hashlib
import io
from datetime import date
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .decomposition import TimeSeries
from .errors import ParseError, TooManyMissing

MISSING_TOKENS = {"", "na", "nan", "null", "none", "-"}
MAX_MISSING_FRACTION = 0.05
STAT_COLUMNS = ("Maximum", "Median", "Mean", "Minimum", "Std.")


def file_digest(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def descriptive_statistics(values) -> dict[str, float]:
    """Maximum, median, mean, minimum and population standard deviation."""
    v = np.asarray(values, dtype=float)
    return {
        "Maximum": float(v.max()),
        "Median": float(np.median(v)),
        "Mean": float(v.mean()),
        "Minimum": float(v.min()),
        "Std.": float(v.std()),
    }


def _parse_dates(raw: list[str]):
    try:
        return tuple(date.fromisoformat(s.strip()) for s in raw)
    except ValueError:
        return tuple(raw)


def ingest_csv(
    path: str | Path,
    value_column: str,
    date_column: str | None = None,
    delimiter: str = ",",
) -> tuple[TimeSeries, dict[str, float]]:
    """Read one numeric column (and optionally a date column) from a headed CSV.

    Up to 5% of the value cells may be missing; they are filled by linear
    interpolation over the row index.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh, delimiter=delimiter)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}: empty file") from None
        header = [h.strip() for h in header]
        for col in (value_column, date_column):
            if col is not None and col not in header:
                raise ParseError(f"{path}: no column named {col!r}; header is {header}")
        vi = header.index(value_column)
        di = header.index(date_column) if date_column is not None else None
        values: list[float] = []
        stamps: list[str] = []
        for rowno, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if vi >= len(row):
                raise ParseError("row is too short", rowno, value_column)
            cell = row[vi].strip()
            if cell.lower() in MISSING_TOKENS:
                values.append(np.nan)
            else:
                try:
                    values.append(float(cell))
                except ValueError:
                    raise ParseError(f"cannot parse {cell!r} as a number", rowno, value_column) from None
                if not np.isfinite(values[-1]):
                    raise ParseError(f"non-finite value {cell!r}", rowno, value_column)
            if di is not None:
                if di >= len(row):
                    raise ParseError("row is too short", rowno, date_column)
                stamps.append(row[di].strip())

    y = np.array(values, dtype=float)
    if y.size == 0:
        raise ParseError(f"{path}: no data rows")
    missing = np.isnan(y)
    if missing.mean() > MAX_MISSING_FRACTION:
        raise TooManyMissing(
            f"{path}: {int(missing.sum())} of {y.size} values missing in {value_column!r} (limit 5%)"
        )
    if missing.all():
        raise TooManyMissing(f"{path}: column {value_column!r} has no values")
    if missing.any():
        idx = np.arange(y.size)
        y[missing] = np.interp(idx[missing], idx[~missing], y[~missing])
    series = TimeSeries(y, _parse_dates(stamps) if di is not None else None)
    return series, descriptive_statistics(y)


def fmt(value) -> str:
    """Round-trippable text for one cell."""
    if value is None:
        return ""
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (np.integer,)):
        return str(int(value))
    return str(value)


def write_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    Path(path).write_text(buf.getvalue(), encoding="utf-8")


def read_front_csv(path: str | Path) -> np.ndarray:
    """Two-column objective front with a header row."""
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if data.shape[1] != 2:
        raise ParseError(f"{path}: expected two objective columns, found {data.shape[1]}")
    return data
