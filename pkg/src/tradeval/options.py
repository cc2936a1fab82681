"""Black-Scholes engine: pricing, Greeks, implied volatility, and
multi-leg expiry payoff analysis with accuracy scoring rules.

European exercise, no dividends. Theta is reported per year; vega per
unit volatility. Implied vol is solved by bracketed bisection on
sigma in [1e-6, 5].
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import (
    EmptyLegs,
    InvalidInput,
    MixedExpiries,
    NoConvergence,
    PriceOutOfBounds,
    ZeroVol,
)

VOL_FLOOR = 1e-12
IV_LO = 1e-6
IV_HI = 5.0
IV_PRICE_TOL = 1e-8
IV_MAX_ITER = 200


def _norm_cdf(x: float) -> float:
    return 0.5 * (1.0 + math.erf(x / math.sqrt(2.0)))


def _norm_pdf(x: float) -> float:
    return math.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)


def _check_inputs(spot: float, strike: float, vol: float, expiry: float, right: str) -> None:
    if spot <= 0 or strike <= 0 or expiry <= 0:
        raise InvalidInput(f"spot, strike, expiry must be positive: S={spot} K={strike} T={expiry}")
    if vol < 0:
        raise InvalidInput(f"volatility must be non-negative: {vol}")
    if right not in ("call", "put"):
        raise InvalidInput(f"right must be 'call' or 'put': {right!r}")


def bs_price(spot: float, strike: float, rate: float, vol: float, expiry: float, right: str) -> float:
    """Black-Scholes value; below the vol floor returns the discounted-intrinsic limit."""
    _check_inputs(spot, strike, vol, expiry, right)
    disc_k = strike * math.exp(-rate * expiry)
    if vol < VOL_FLOOR:
        intrinsic = spot - disc_k if right == "call" else disc_k - spot
        return max(intrinsic, 0.0)
    sqrt_t = math.sqrt(expiry)
    d1 = (math.log(spot / strike) + (rate + 0.5 * vol * vol) * expiry) / (vol * sqrt_t)
    d2 = d1 - vol * sqrt_t
    if right == "call":
        return spot * _norm_cdf(d1) - disc_k * _norm_cdf(d2)
    return disc_k * _norm_cdf(-d2) - spot * _norm_cdf(-d1)


@dataclass(frozen=True)
class Greeks:
    """Price sensitivities; theta per year, vega per unit volatility."""

    delta: float
    gamma: float
    theta: float
    vega: float

    def to_json_dict(self) -> dict:
        return {"delta": self.delta, "gamma": self.gamma, "theta": self.theta, "vega": self.vega}


def bs_greeks(spot: float, strike: float, rate: float, vol: float, expiry: float, right: str) -> Greeks:
    """Closed-form delta, gamma, theta, vega."""
    _check_inputs(spot, strike, vol, expiry, right)
    if vol < VOL_FLOOR:
        raise ZeroVol("Greeks need a strictly positive volatility")
    sqrt_t = math.sqrt(expiry)
    d1 = (math.log(spot / strike) + (rate + 0.5 * vol * vol) * expiry) / (vol * sqrt_t)
    d2 = d1 - vol * sqrt_t
    pdf_d1 = _norm_pdf(d1)
    disc_k = strike * math.exp(-rate * expiry)
    gamma = pdf_d1 / (spot * vol * sqrt_t)
    vega = spot * pdf_d1 * sqrt_t
    decay = -spot * pdf_d1 * vol / (2.0 * sqrt_t)
    if right == "call":
        delta = _norm_cdf(d1)
        theta = decay - rate * disc_k * _norm_cdf(d2)
    else:
        delta = _norm_cdf(d1) - 1.0
        theta = decay + rate * disc_k * _norm_cdf(-d2)
    return Greeks(delta=delta, gamma=gamma, theta=theta, vega=vega)


def implied_vol(price: float, spot: float, strike: float, rate: float, expiry: float, right: str) -> float:
    """Invert bs_price by bisection on [1e-6, 5].

    Raises PriceOutOfBounds outside the no-arbitrage band and NoConvergence
    when the root lies outside the sigma bracket (price indistinguishable
    from the zero-vol limit, or above the sigma=5 value).
    """
    _check_inputs(spot, strike, 0.0, expiry, right)
    disc_k = strike * math.exp(-rate * expiry)
    intrinsic = max(spot - disc_k if right == "call" else disc_k - spot, 0.0)
    upper = spot if right == "call" else disc_k
    slack = 1e-12 * max(1.0, spot, strike)
    if price < intrinsic - slack or price > upper + slack:
        raise PriceOutOfBounds(
            f"price {price} outside no-arbitrage bounds [{intrinsic}, {upper}]"
        )
    lo, hi = IV_LO, IV_HI
    f_lo = bs_price(spot, strike, rate, lo, expiry, right) - price
    f_hi = bs_price(spot, strike, rate, hi, expiry, right) - price
    if f_lo > IV_PRICE_TOL:
        raise NoConvergence("price below the minimum-vol value: vol under 1e-6")
    if f_hi < -IV_PRICE_TOL:
        raise NoConvergence("price above the maximum-vol value: vol over 5")
    for _ in range(IV_MAX_ITER):
        mid = 0.5 * (lo + hi)
        f_mid = bs_price(spot, strike, rate, mid, expiry, right) - price
        if f_mid <= 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-12:
            break
    sigma = 0.5 * (lo + hi)
    if abs(bs_price(spot, strike, rate, sigma, expiry, right) - price) > IV_PRICE_TOL:
        raise NoConvergence(f"no sigma in [{IV_LO}, {IV_HI}] reproduces price {price}")
    return sigma


@dataclass(frozen=True)
class OptionLeg:
    """One leg of a strategy; premium is per contract, side long or short."""

    right: str
    side: str
    strike: float
    expiry_years: float
    quantity: float
    premium: float

    def __post_init__(self):
        if self.right not in ("call", "put"):
            raise InvalidInput(f"right must be 'call' or 'put': {self.right!r}")
        if self.side not in ("long", "short"):
            raise InvalidInput(f"side must be 'long' or 'short': {self.side!r}")
        if self.strike <= 0 or self.expiry_years <= 0 or self.quantity <= 0:
            raise InvalidInput("strike, expiry_years and quantity must be positive")
        if self.premium < 0:
            raise InvalidInput("premium must be non-negative")

    @property
    def sign(self) -> float:
        return 1.0 if self.side == "long" else -1.0


@dataclass(frozen=True)
class StrategyPnL:
    """Expiry payoff summary; infinities mark unbounded sides."""

    max_profit: float
    max_loss: float
    breakevens: tuple[float, ...]

    def to_json_dict(self) -> dict:
        return {
            "max_profit": _inf_str(self.max_profit),
            "max_loss": _inf_str(self.max_loss),
            "breakevens": list(self.breakevens),
        }


def _inf_str(x: float):
    return "inf" if math.isinf(x) else x


def payoff_at(legs: Sequence[OptionLeg], underlying: float) -> float:
    """Net expiry payoff at one underlying price, premiums included."""
    total = 0.0
    for leg in legs:
        if leg.right == "call":
            intrinsic = max(underlying - leg.strike, 0.0)
        else:
            intrinsic = max(leg.strike - underlying, 0.0)
        total += leg.sign * leg.quantity * (intrinsic - leg.premium)
    return total


def strategy_pnl(legs: Sequence[OptionLeg]) -> StrategyPnL:
    """Max profit, max loss (magnitude) and breakevens of the expiry payoff.

    The payoff is piecewise linear with kinks only at strikes, so the
    extremes live on the kink set {0, strikes} plus the slope at infinity,
    and each segment holds at most one isolated root.
    """
    if not legs:
        raise EmptyLegs("strategy needs at least one leg")
    expiries = {leg.expiry_years for leg in legs}
    if len(expiries) > 1:
        raise MixedExpiries(f"legs span {len(expiries)} expiries")

    kinks = sorted({leg.strike for leg in legs})
    points = [0.0] + kinks
    values = [payoff_at(legs, s) for s in points]
    # Slope beyond the last strike: only calls contribute.
    tail_slope = sum(leg.sign * leg.quantity for leg in legs if leg.right == "call")

    max_profit = max(values)
    max_loss = -min(values)
    if tail_slope > 0:
        max_profit = math.inf
    elif tail_slope < 0:
        max_loss = math.inf

    breakevens: list[float] = []

    def add_root(x: float) -> None:
        if not any(math.isclose(x, b, rel_tol=1e-12, abs_tol=1e-12) for b in breakevens):
            breakevens.append(x)

    for (a, fa), (b, fb) in zip(zip(points, values), zip(points[1:], values[1:])):
        if fa == 0.0 and fb == 0.0:
            continue  # identically-zero segment: no isolated root
        if fa == 0.0:
            add_root(a)
        if fb == 0.0:
            add_root(b)
        if fa * fb < 0.0:
            add_root(a + (b - a) * (-fa) / (fb - fa))
    last_x, last_v = points[-1], values[-1]
    if tail_slope != 0.0:
        root = last_x - last_v / tail_slope
        if root > last_x and last_v != 0.0:
            add_root(root)
    elif last_v == 0.0 and len(points) > 1 and values[-2] == 0.0:
        # Flat zero tail: drop the kink root recorded by the last segment.
        breakevens = [b for b in breakevens if b != last_x]

    return StrategyPnL(max_profit=max_profit, max_loss=max_loss, breakevens=tuple(sorted(breakevens)))


def position_greeks(legs: Sequence[OptionLeg], spot: float, rate: float, vol: float) -> Greeks:
    """Net Greeks of a strategy: signed, quantity-weighted sum over legs."""
    if not legs:
        raise EmptyLegs("strategy needs at least one leg")
    delta = gamma = theta = vega = 0.0
    for leg in legs:
        g = bs_greeks(spot, leg.strike, rate, vol, leg.expiry_years, leg.right)
        delta += leg.sign * leg.quantity * g.delta
        gamma += leg.sign * leg.quantity * g.gamma
        theta += leg.sign * leg.quantity * g.theta
        vega += leg.sign * leg.quantity * g.vega
    return Greeks(delta=delta, gamma=gamma, theta=theta, vega=vega)


GREEK_REL_TOL = 0.05
GREEK_ABS_TOL = 1e-4
GREEK_SMALL = 1e-3
PNL_REL_TOL = 0.01


def _greek_ok(reported: float, truth: float) -> bool:
    if abs(truth) < GREEK_SMALL:
        return abs(reported - truth) <= GREEK_ABS_TOL
    return abs(reported - truth) <= GREEK_REL_TOL * abs(truth)


def score_greeks(reported: Greeks, truth: Greeks) -> float:
    """25 points per Greek within 5% relative tolerance (absolute 1e-4
    when the true value is below 1e-3 in magnitude)."""
    score = 0.0
    for name in ("delta", "gamma", "theta", "vega"):
        if _greek_ok(getattr(reported, name), getattr(truth, name)):
            score += 25.0
    return score


def _pnl_item_ok(reported: float, truth: float) -> bool:
    if math.isinf(truth) or math.isinf(reported):
        return reported == truth
    return abs(reported - truth) <= max(PNL_REL_TOL * abs(truth), 1e-9)


def _breakeven_fraction(reported: Sequence[float], truth: Sequence[float]) -> float:
    if not truth and not reported:
        return 1.0
    if not truth or not reported:
        return 0.0
    remaining = list(reported)
    matched = 0
    for t in sorted(truth):
        best = None
        for r in remaining:
            if abs(r - t) <= max(PNL_REL_TOL * abs(t), 1e-9):
                if best is None or abs(r - t) < abs(best - t):
                    best = r
        if best is not None:
            remaining.remove(best)
            matched += 1
    return matched / max(len(truth), len(reported))


def score_pnl(reported: StrategyPnL, truth: StrategyPnL) -> float:
    """Equal thirds over max profit, max loss, and the breakeven set.

    Numeric items pass within 1% relative (infinities must match exactly);
    the breakeven third is the fraction of levels matched within 1%.
    """
    parts = [
        1.0 if _pnl_item_ok(reported.max_profit, truth.max_profit) else 0.0,
        1.0 if _pnl_item_ok(reported.max_loss, truth.max_loss) else 0.0,
        _breakeven_fraction(reported.breakevens, truth.breakevens),
    ]
    return 100.0 * sum(parts) / 3.0
