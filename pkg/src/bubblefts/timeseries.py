"""Daily price series ingestion, validation, and sliding windows."""

from __future__ import annotations

import csv
import io
import socket
import urllib.error
import urllib.request
from dataclasses import dataclass
from datetime import date
from typing import Iterator

import numpy as np

from .errors import (
    DuplicateDate,
    EmptyInput,
    HttpStatus,
    MalformedRow,
    NetworkError,
    NonPositivePrice,
    Timeout,
    WindowOutOfRange,
)


@dataclass(frozen=True)
class PriceSeries:
    """Validated daily close prices on a strictly increasing date grid.

    Time is measured in trading-day counts: calendar gaps between
    consecutive rows carry no weight. Instances are immutable and safe to
    share across concurrent window evaluations.
    """

    dates: np.ndarray  # datetime64[D], strictly increasing
    closes: np.ndarray  # float64, strictly positive
    symbol: str = ""

    def __post_init__(self):
        dates = np.asarray(self.dates, dtype="datetime64[D]")
        closes = np.asarray(self.closes, dtype=np.float64)
        if dates.shape != closes.shape or dates.ndim != 1:
            raise ValueError("dates and closes must be 1-d and equal length")
        if len(dates) < 2:
            raise EmptyInput("price series needs at least 2 rows")
        if np.any(np.diff(dates).astype(int) <= 0):
            bad = np.nonzero(np.diff(dates).astype(int) <= 0)[0][0]
            if dates[bad] == dates[bad + 1]:
                raise DuplicateDate(str(dates[bad]))
            raise ValueError("dates must be strictly increasing")
        if np.any(closes <= 0) or np.any(~np.isfinite(closes)):
            raise ValueError("closes must be positive and finite")
        object.__setattr__(self, "dates", dates)
        object.__setattr__(self, "closes", closes)
        self.dates.setflags(write=False)
        self.closes.setflags(write=False)

    def __len__(self) -> int:
        return len(self.closes)

    def date_at(self, index: int) -> date:
        return self.dates[index].astype("datetime64[D]").astype(date)

    def windows(self, length: int, step: int) -> Iterator["PriceWindow"]:
        """Enumerate windows left to right; a final partial step is dropped."""
        end = length - 1
        while end < len(self):
            yield slice_window(self, end, length)
            end += step


@dataclass(frozen=True)
class PriceWindow:
    """A contiguous slice of ``length`` trading days ending at ``end_index``."""

    parent: PriceSeries
    end_index: int
    length: int

    def __post_init__(self):
        if self.end_index >= len(self.parent) or self.end_index < 0:
            raise WindowOutOfRange(
                f"end_index {self.end_index} outside series of length {len(self.parent)}"
            )
        if self.end_index - self.length + 1 < 0:
            raise WindowOutOfRange(
                f"window of {self.length} days cannot end at index {self.end_index}"
            )

    @property
    def start_index(self) -> int:
        return self.end_index - self.length + 1

    @property
    def closes(self) -> np.ndarray:
        return self.parent.closes[self.start_index : self.end_index + 1]

    @property
    def dates(self) -> np.ndarray:
        return self.parent.dates[self.start_index : self.end_index + 1]

    @property
    def t_values(self) -> np.ndarray:
        """Within-window trading-day offsets 0..length-1."""
        return np.arange(self.length, dtype=np.float64)

    @property
    def end_date(self) -> date:
        return self.parent.date_at(self.end_index)


def parse_price_csv(raw_text: str, symbol: str = "") -> PriceSeries:
    """Parse ``date,close`` CSV text into a validated PriceSeries.

    Rows are sorted by date; malformed rows, non-positive prices, and
    duplicate dates raise. Dates must be ISO-8601 (YYYY-MM-DD).
    """
    if raw_text is None or raw_text.strip() == "":
        raise EmptyInput("empty CSV input")
    reader = csv.reader(io.StringIO(raw_text))
    rows = list(reader)
    if not rows:
        raise EmptyInput("empty CSV input")
    header = [h.strip().lower() for h in rows[0]]
    if header != ["date", "close"]:
        raise MalformedRow(1, ",".join(rows[0]))
    dates: list[np.datetime64] = []
    closes: list[float] = []
    for offset, row in enumerate(rows[1:], start=2):
        if not row or all(c.strip() == "" for c in row):
            continue
        if len(row) != 2:
            raise MalformedRow(offset, ",".join(row))
        d_raw, c_raw = row[0].strip(), row[1].strip()
        try:
            d = np.datetime64(d_raw, "D")
        except ValueError:
            raise MalformedRow(offset, ",".join(row)) from None
        if len(d_raw) != 10:  # reject partial dates like 2000-01
            raise MalformedRow(offset, ",".join(row))
        try:
            c = float(c_raw)
        except ValueError:
            raise MalformedRow(offset, ",".join(row)) from None
        if not np.isfinite(c):
            raise MalformedRow(offset, ",".join(row))
        if c <= 0:
            raise NonPositivePrice(offset, c)
        dates.append(d)
        closes.append(c)
    if not dates:
        raise EmptyInput("CSV contains a header but no data rows")
    order = np.argsort(np.array(dates))
    darr = np.array(dates)[order]
    carr = np.array(closes)[order]
    dup = np.nonzero(np.diff(darr).astype(int) == 0)[0]
    if dup.size:
        raise DuplicateDate(str(darr[dup[0]]))
    return PriceSeries(dates=darr, closes=carr, symbol=symbol)


def serialize_price_csv(series: PriceSeries) -> str:
    """Inverse of parse_price_csv; round-trips numeric content exactly."""
    lines = ["date,close"]
    for d, c in zip(series.dates, series.closes):
        lines.append(f"{d},{c!r}")
    return "\n".join(lines) + "\n"


def fetch_prices(url: str, timeout: float = 30.0) -> str:
    """GET a CSV body as text, unmodified. Plain HTTP(S), no auth."""
    try:
        with urllib.request.urlopen(url, timeout=timeout) as resp:
            body = resp.read()
    except urllib.error.HTTPError as exc:
        raise HttpStatus(exc.code) from exc
    except urllib.error.URLError as exc:
        if isinstance(exc.reason, (socket.timeout, TimeoutError)):
            raise Timeout(str(exc)) from exc
        raise NetworkError(str(exc)) from exc
    except (socket.timeout, TimeoutError) as exc:
        raise Timeout(str(exc)) from exc
    except OSError as exc:
        raise NetworkError(str(exc)) from exc
    return body.decode("utf-8")


def slice_window(series: PriceSeries, end_index: int, length: int) -> PriceWindow:
    """Window over indices [end_index - length + 1, end_index]."""
    return PriceWindow(parent=series, end_index=end_index, length=length)
