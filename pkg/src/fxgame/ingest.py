"""Historical OHLC CSV ingestion and batch extraction.

The canonical input is a ``time,open,high,low,close`` CSV with ISO-8601
timestamps. Named format descriptors remap column headers for exports from
common historical-data sites; prices are parsed to integer pipettes exactly
(4-decimal quotes are right-padded to 5 decimals).
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import IO, Iterable

from .engine import PreconditionError, price_from_str
from .ohlc import OhlcBar


class IngestError(ValueError):
    """Malformed input data; message carries the offending row number."""


@dataclass(frozen=True)
class CsvFormat:
    """Column mapping for one known CSV layout."""

    name: str
    time_col: str
    open_col: str
    high_col: str
    low_col: str
    close_col: str

    @property
    def columns(self) -> tuple[str, ...]:
        return (self.time_col, self.open_col, self.high_col,
                self.low_col, self.close_col)


FORMATS: dict[str, CsvFormat] = {
    "default": CsvFormat("default", "time", "open", "high", "low", "close"),
    "titlecase": CsvFormat("titlecase", "Date", "Open", "High", "Low", "Close"),
}


@dataclass(frozen=True)
class RealBarRow:
    """One parsed historical interval."""

    timestamp: str
    open: int
    high: int
    low: int
    close: int


@dataclass(frozen=True)
class Batch:
    """One block of consecutive intervals extracted for comparison."""

    batch_no: int  # 1-based
    bars: tuple[OhlcBar, ...]


def parse_ohlc_csv(source: IO[str] | str | bytes, fmt: CsvFormat | str = "default") -> list[RealBarRow]:
    """Parse a historical OHLC CSV stream to rows in file order.

    Fails loudly, naming the row, on price parse errors, OHLC ordering
    violations, or non-increasing timestamps.
    """
    if isinstance(fmt, str):
        try:
            fmt = FORMATS[fmt]
        except KeyError:
            raise IngestError(
                f"unknown format {fmt!r}; known: {sorted(FORMATS)}"
            ) from None
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    if isinstance(source, str):
        source = io.StringIO(source)

    reader = csv.DictReader(source)
    if reader.fieldnames is None:
        raise IngestError("empty file: no header row")
    missing = [c for c in fmt.columns if c not in reader.fieldnames]
    if missing:
        raise IngestError(
            f"header mismatch for format {fmt.name!r}: missing columns {missing} "
            f"in {reader.fieldnames}"
        )

    rows: list[RealBarRow] = []
    for line_no, record in enumerate(reader, start=2):
        try:
            o = price_from_str(record[fmt.open_col])
            h = price_from_str(record[fmt.high_col])
            low = price_from_str(record[fmt.low_col])
            c = price_from_str(record[fmt.close_col])
        except (ValueError, TypeError, ArithmeticError) as exc:
            raise IngestError(f"row {line_no}: price parse failure: {exc}") from None
        if not (low <= min(o, c) and max(o, c) <= h):
            raise IngestError(
                f"row {line_no}: OHLC ordering violated "
                f"(O={record[fmt.open_col]} H={record[fmt.high_col]} "
                f"L={record[fmt.low_col]} C={record[fmt.close_col]})"
            )
        timestamp = record[fmt.time_col]
        if rows and timestamp <= rows[-1].timestamp:
            raise IngestError(
                f"row {line_no}: timestamp {timestamp!r} not after "
                f"{rows[-1].timestamp!r}"
            )
        rows.append(RealBarRow(timestamp=timestamp, open=o, high=h, low=low, close=c))

    if not rows:
        raise IngestError("no data rows")
    return rows


def rows_to_bars(rows: Iterable[RealBarRow], start_index: int = 1) -> tuple[OhlcBar, ...]:
    return tuple(
        OhlcBar(index=start_index + i, open=r.open, high=r.high, low=r.low, close=r.close)
        for i, r in enumerate(rows)
    )


def extract_batches(rows: list[RealBarRow], batch_len: int, count: int) -> list[Batch]:
    """Cut the first count*batch_len rows into disjoint consecutive batches."""
    if batch_len < 1 or count < 1:
        raise PreconditionError("batch_len and count must be positive")
    required = batch_len * count
    if len(rows) < required:
        supported = len(rows) // batch_len
        raise PreconditionError(
            f"insufficient rows: need {required} for {count} batches of "
            f"{batch_len}, have {len(rows)} (supports at most {supported})"
        )
    return [
        Batch(batch_no=k + 1,
              bars=rows_to_bars(rows[k * batch_len : (k + 1) * batch_len]))
        for k in range(count)
    ]
