"""OHLCV candle data: validation, CSV ingestion, time slicing, log returns.

All values are immutable after construction and safe to share across
concurrent tasks. Timestamps are integer epoch-seconds (UTC); the CSV
format is exactly ``timestamp,open,high,low,close,volume`` with LF line
endings and plain decimal numbers.
"""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field

from .errors import EmptyWindow, InvariantViolation, MalformedRow, NonUniformInterval, TooShort

CSV_HEADER = "timestamp,open,high,low,close,volume"


@dataclass(frozen=True)
class Candle:
    """A single OHLCV bar."""

    timestamp: int
    open: float
    high: float
    low: float
    close: float
    volume: float

    def __post_init__(self):
        if min(self.open, self.high, self.low, self.close) <= 0:
            raise InvariantViolation(f"non-positive price at t={self.timestamp}")
        if self.volume < 0:
            raise InvariantViolation(f"negative volume at t={self.timestamp}")
        if self.high < max(self.open, self.close) or self.low > min(self.open, self.close):
            raise InvariantViolation(
                f"OHLC ordering violated at t={self.timestamp}: "
                f"o={self.open} h={self.high} l={self.low} c={self.close}"
            )


@dataclass(frozen=True)
class CandleSeries:
    """Uniformly spaced, strictly ordered candles for one symbol."""

    symbol: str
    interval_seconds: int
    candles: tuple[Candle, ...]
    _timestamps: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.interval_seconds <= 0:
            raise InvariantViolation("interval_seconds must be positive")
        if isinstance(self.candles, list):
            object.__setattr__(self, "candles", tuple(self.candles))
        if not self.candles:
            raise InvariantViolation("series must hold at least one candle")
        ts = tuple(c.timestamp for c in self.candles)
        for prev, cur in zip(ts, ts[1:]):
            if cur - prev != self.interval_seconds:
                raise NonUniformInterval(
                    f"gap {cur - prev}s between t={prev} and t={cur}, expected {self.interval_seconds}s"
                )
        object.__setattr__(self, "_timestamps", ts)

    def __len__(self) -> int:
        return len(self.candles)

    @property
    def timestamps(self) -> tuple[int, ...]:
        return self._timestamps

    def closes(self) -> list[float]:
        return [c.close for c in self.candles]

    def opens(self) -> list[float]:
        return [c.open for c in self.candles]

    def volumes(self) -> list[float]:
        return [c.volume for c in self.candles]


def parse_candle_csv(text: str, symbol: str = "SERIES") -> CandleSeries:
    """Parse CSV text into a validated series; the bar interval is inferred
    from the first two rows and enforced on the rest."""
    lines = [ln for ln in text.split("\n") if ln.strip()]
    if not lines or lines[0].strip() != CSV_HEADER:
        raise MalformedRow(f"expected header {CSV_HEADER!r}")
    rows = lines[1:]
    if len(rows) < 2:
        raise TooShort("need at least 2 data rows to infer the bar interval")
    candles = []
    for i, row in enumerate(rows):
        fields = row.split(",")
        if len(fields) != 6:
            raise MalformedRow(f"row {i + 1}: expected 6 fields, got {len(fields)}")
        try:
            ts = int(fields[0])
            o, h, l, c, v = (float(x) for x in fields[1:])
        except ValueError as exc:
            raise MalformedRow(f"row {i + 1}: {exc}") from exc
        candles.append(Candle(ts, o, h, l, c, v))
    interval = candles[1].timestamp - candles[0].timestamp
    if interval <= 0:
        raise NonUniformInterval("timestamps must be strictly increasing")
    return CandleSeries(symbol=symbol, interval_seconds=interval, candles=tuple(candles))


def serialize_candle_csv(series: CandleSeries) -> str:
    """Inverse of :func:`parse_candle_csv`: shortest round-trip float repr."""
    lines = [CSV_HEADER]
    for c in series.candles:
        lines.append(f"{c.timestamp},{c.open!r},{c.high!r},{c.low!r},{c.close!r},{c.volume!r}")
    return "\n".join(lines) + "\n"


def slice_until(series: CandleSeries, clock: int) -> CandleSeries:
    """Candles with timestamp <= clock; raises EmptyWindow if clock precedes all data."""
    if clock < series.candles[0].timestamp:
        raise EmptyWindow(f"clock {clock} precedes first bar {series.candles[0].timestamp}")
    n = bisect.bisect_right(series.timestamps, clock)
    return CandleSeries(series.symbol, series.interval_seconds, series.candles[:n])


def log_returns(series: CandleSeries) -> list[float]:
    """Per-bar log returns of the close: element i = ln(close[i+1] / close[i])."""
    if len(series) < 2:
        raise TooShort("need at least 2 candles for returns")
    closes = series.closes()
    return [math.log(b / a) for a, b in zip(closes, closes[1:])]
