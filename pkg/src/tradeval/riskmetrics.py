"""Portfolio risk metrics: return, Sharpe, Sortino, historical VaR,
maximum drawdown, and win rate, assembled into a RiskReport.

Conventions (documented because the agents and the scorer must agree):
sample (n-1) standard deviation, risk-free rate 0, annualization by
sqrt(periods_per_year), zero-pnl trades count as losses, and VaR is the
lower-interpolation empirical quantile reported as a loss magnitude.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Optional, Sequence

import numpy as np

from .errors import InvalidInput, TooShort

if TYPE_CHECKING:  # pragma: no cover
    from .tradingsim import Trade


@dataclass(frozen=True)
class RiskReport:
    """Metrics of one trading episode. None marks an undefined metric."""

    total_return: float
    sharpe: Optional[float]
    sortino: Optional[float]
    var95: Optional[float]
    max_drawdown: float
    win_rate: Optional[float]
    n_trades: int

    def to_json_dict(self) -> dict:
        return {
            "total_return": self.total_return,
            "sharpe": self.sharpe,
            "sortino": self.sortino,
            "var95": self.var95,
            "max_drawdown": self.max_drawdown,
            "win_rate": self.win_rate,
            "n_trades": self.n_trades,
        }


def total_return(equity: Sequence[float]) -> float:
    """last / first - 1."""
    if len(equity) < 2:
        raise TooShort("need at least 2 equity points")
    return equity[-1] / equity[0] - 1.0


def sharpe(returns: Sequence[float], periods_per_year: int) -> Optional[float]:
    """Annualized mean/std of returns; None when the std is zero."""
    if len(returns) < 2:
        raise TooShort("need at least 2 returns")
    if periods_per_year <= 0:
        raise InvalidInput("periods_per_year must be positive")
    arr = np.asarray(returns, dtype=float)
    std = float(arr.std(ddof=1))
    if std == 0.0:
        return None
    return float(arr.mean()) / std * math.sqrt(periods_per_year)


def sortino(returns: Sequence[float], periods_per_year: int) -> Optional[float]:
    """Like sharpe but with downside deviation sqrt(mean(min(r,0)^2));
    None when there are no negative returns."""
    if len(returns) < 2:
        raise TooShort("need at least 2 returns")
    if periods_per_year <= 0:
        raise InvalidInput("periods_per_year must be positive")
    arr = np.asarray(returns, dtype=float)
    downside = np.minimum(arr, 0.0)
    dd = math.sqrt(float(np.mean(downside * downside)))
    if dd == 0.0:
        return None
    return float(arr.mean()) / dd * math.sqrt(periods_per_year)


def max_drawdown(equity: Sequence[float]) -> float:
    """Largest peak-to-trough fractional decline, in [0, 1]."""
    if len(equity) < 1:
        raise TooShort("need at least 1 equity point")
    arr = np.asarray(equity, dtype=float)
    peaks = np.maximum.accumulate(arr)
    return float(np.max((peaks - arr) / peaks))


def hist_var(returns: Sequence[float], confidence: float = 0.95) -> float:
    """Historical VaR: the (1-confidence) lower-interpolation quantile of
    returns, reported as a non-negative loss magnitude."""
    if len(returns) < 20:
        raise TooShort(f"need at least 20 returns, got {len(returns)}")
    if not 0.0 < confidence < 1.0:
        raise InvalidInput("confidence must be in (0, 1)")
    q = float(np.quantile(np.asarray(returns, dtype=float), 1.0 - confidence, method="lower"))
    return max(0.0, -q)


def win_rate(trades: Sequence["Trade"]) -> Optional[float]:
    """Fraction of closed trades with pnl > 0; None when there are none."""
    if not trades:
        return None
    wins = sum(1 for t in trades if t.pnl > 0.0)
    return wins / len(trades)


def risk_report(
    equity: Sequence[float],
    trades: Sequence["Trade"],
    periods_per_year: int,
) -> RiskReport:
    """Assemble every metric from one equity curve and its closed trades.

    var95 is None when the curve is too short for a 20-return quantile.
    """
    if len(equity) < 2:
        raise TooShort("need at least 2 equity points")
    rets = [math.log(b / a) for a, b in zip(equity, equity[1:])]
    return RiskReport(
        total_return=total_return(equity),
        sharpe=sharpe(rets, periods_per_year),
        sortino=sortino(rets, periods_per_year),
        var95=hist_var(rets) if len(rets) >= 20 else None,
        max_drawdown=max_drawdown(equity),
        win_rate=win_rate(trades),
        n_trades=len(trades),
    )
