"""CSV ingestion of annual anomaly series.

Understands plain two-column files as well as the GISTEMP graph-download
layout (title/comment preamble lines before the header, extra smoothing
columns).  Rows with missing or unparseable anomalies are rejected with
their row number; years must be unique and strictly increasing by 1.
"""

from __future__ import annotations

import csv
import importlib.resources
import io
from pathlib import Path

from .exceptions import IngestionError
from .series import TimeSeries

__all__ = ["parse_anomaly_csv", "read_anomaly_csv", "bundled_csv_path", "load_bundled_series"]

BUNDLED_DATA = "gistemp_annual.csv"


def _is_int(token: str) -> bool:
    try:
        int(token)
        return True
    except ValueError:
        return False


def parse_anomaly_csv(
    text: str,
    year_column: str = "Year",
    value_column: str | None = None,
) -> TimeSeries:
    """Parse CSV text into a validated series.

    The header is the first row containing ``year_column``; preamble lines
    before it are skipped.  ``value_column=None`` selects the first
    non-year column of the header.
    """
    reader = csv.reader(io.StringIO(text))
    header = None
    header_row_no = 0
    rows: list[tuple[int, list[str]]] = []
    for row_no, row in enumerate(reader, start=1):
        cells = [c.strip() for c in row]
        if header is None:
            if year_column in cells:
                header = cells
                header_row_no = row_no
            continue
        if not any(cells):
            continue
        rows.append((row_no, cells))
    if header is None:
        raise IngestionError(f"no header row containing column {year_column!r} found")
    year_idx = header.index(year_column)
    if value_column is None:
        try:
            value_idx = next(i for i, c in enumerate(header) if i != year_idx and c)
        except StopIteration:
            raise IngestionError("header has no value column besides the year column")
        value_column = header[value_idx]
    else:
        if value_column not in header:
            raise IngestionError(
                f"value column {value_column!r} not in header {header} (row {header_row_no})"
            )
        value_idx = header.index(value_column)

    times: list[int] = []
    values: list[float] = []
    seen: dict[int, int] = {}
    for row_no, cells in rows:
        if len(cells) <= max(year_idx, value_idx):
            raise IngestionError(f"row {row_no}: expected at least {max(year_idx, value_idx) + 1} columns")
        ytok, vtok = cells[year_idx], cells[value_idx]
        if not _is_int(ytok):
            # GISTEMP files may repeat the header or carry trailing comments
            if year_column in cells:
                continue
            raise IngestionError(f"row {row_no}: year {ytok!r} is not an integer")
        year = int(ytok)
        try:
            value = float(vtok)
        except ValueError:
            raise IngestionError(
                f"row {row_no}: missing or unparseable anomaly {vtok!r} for year {year}"
            )
        if value != value or value in (float("inf"), float("-inf")):
            raise IngestionError(f"row {row_no}: non-finite anomaly for year {year}")
        if year in seen:
            raise IngestionError(
                f"row {row_no}: duplicate year {year} (first seen at row {seen[year]})"
            )
        if times and year < times[-1]:
            raise IngestionError(
                f"row {row_no}: year {year} breaks monotone ordering (previous {times[-1]})"
            )
        if times and year != times[-1] + 1:
            raise IngestionError(
                f"row {row_no}: gap in annual index ({times[-1]} -> {year})"
            )
        seen[year] = row_no
        times.append(year)
        values.append(value)
    if not times:
        raise IngestionError("no data rows found after the header")
    return TimeSeries(tuple(times), tuple(values))


def read_anomaly_csv(
    path: str | Path,
    year_column: str = "Year",
    value_column: str | None = None,
) -> TimeSeries:
    """Read and parse a CSV file from disk."""
    p = Path(path)
    if not p.exists():
        raise IngestionError(f"input file does not exist: {p}")
    return parse_anomaly_csv(p.read_text(encoding="utf-8"), year_column, value_column)


def bundled_csv_path() -> Path:
    """Filesystem path of the vendored annual anomaly snapshot."""
    return Path(str(importlib.resources.files("climarma").joinpath("data", BUNDLED_DATA)))


def load_bundled_series() -> TimeSeries:
    return read_anomaly_csv(bundled_csv_path())
