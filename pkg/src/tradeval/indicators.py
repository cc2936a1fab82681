"""Technical indicators: SMA, EMA, Wilder RSI, MACD.

Output lists are right-aligned: the last element always corresponds to the
last input bar, and positions before the warm-up window are absent rather
than padded. EMA seeds with the SMA of the first window; RSI uses Wilder
smoothing with an SMA seed and maps the no-movement case to 50.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import InvalidInput, TooShort, WindowTooLarge


@dataclass(frozen=True)
class MacdTriple:
    """MACD line, signal line, and their difference, index-aligned."""

    macd: tuple[float, ...]
    signal: tuple[float, ...]
    histogram: tuple[float, ...]


def _check_window(window: int, n: int) -> None:
    if window <= 0:
        raise InvalidInput(f"window must be positive, got {window}")
    if window > n:
        raise WindowTooLarge(f"window {window} exceeds length {n}")


def sma(values: Sequence[float], window: int) -> list[float]:
    """Simple moving average; output[i] covers input[i .. i+window-1]."""
    _check_window(window, len(values))
    out = []
    acc = sum(values[:window])
    out.append(acc / window)
    for i in range(window, len(values)):
        acc += values[i] - values[i - window]
        out.append(acc / window)
    return out


def ema(values: Sequence[float], window: int) -> list[float]:
    """Exponential moving average, alpha = 2/(window+1), seeded with the
    SMA of the first `window` values."""
    _check_window(window, len(values))
    alpha = 2.0 / (window + 1)
    seed = sum(values[:window]) / window
    out = [seed]
    cur = seed
    for i in range(window, len(values)):
        cur = alpha * values[i] + (1 - alpha) * cur
        out.append(cur)
    return out


def rsi(closes: Sequence[float], window: int = 14) -> list[float]:
    """Wilder RSI in [0, 100]; gain = loss = 0 maps to 50."""
    if window <= 0:
        raise InvalidInput(f"window must be positive, got {window}")
    if len(closes) < window + 1:
        raise TooShort(f"need at least {window + 1} closes, got {len(closes)}")
    deltas = [b - a for a, b in zip(closes, closes[1:])]
    gains = [max(d, 0.0) for d in deltas]
    losses = [max(-d, 0.0) for d in deltas]
    avg_gain = sum(gains[:window]) / window
    avg_loss = sum(losses[:window]) / window
    out = [_rsi_value(avg_gain, avg_loss)]
    for i in range(window, len(deltas)):
        avg_gain = (avg_gain * (window - 1) + gains[i]) / window
        avg_loss = (avg_loss * (window - 1) + losses[i]) / window
        out.append(_rsi_value(avg_gain, avg_loss))
    return out


def _rsi_value(avg_gain: float, avg_loss: float) -> float:
    if avg_loss == 0.0 and avg_gain == 0.0:
        return 50.0
    if avg_loss == 0.0:
        return 100.0
    rs = avg_gain / avg_loss
    return 100.0 - 100.0 / (1.0 + rs)


def macd(closes: Sequence[float], fast: int = 12, slow: int = 26, signal: int = 9) -> MacdTriple:
    """MACD = EMA(fast) - EMA(slow); signal = EMA(signal) of the MACD line.

    All three outputs are truncated to the indices where the signal line is
    defined (the last ``len(closes) - slow - signal + 2`` bars).
    """
    if not 0 < fast < slow:
        raise InvalidInput(f"require 0 < fast < slow, got {fast}/{slow}")
    if len(closes) < slow + signal:
        raise TooShort(f"need at least {slow + signal} closes, got {len(closes)}")
    ema_fast = ema(closes, fast)
    ema_slow = ema(closes, slow)
    # ema_fast starts at bar fast-1, ema_slow at slow-1: align on slow-1.
    line = [f - s for f, s in zip(ema_fast[slow - fast:], ema_slow)]
    sig = ema(line, signal)
    line = line[len(line) - len(sig):]
    hist = [m - s for m, s in zip(line, sig)]
    return MacdTriple(tuple(line), tuple(sig), tuple(hist))


def macd_offset(slow: int = 26, signal: int = 9) -> int:
    """Absolute bar index of the first defined MACD-triple element."""
    return slow + signal - 2
