"""OHLC resampling and up/down deviation statistics in pipettes."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .engine import PreconditionError


@dataclass(frozen=True)
class OhlcBar:
    """Open/high/low/close of one fixed-length interval, in pipettes."""

    index: int  # 1-based interval number
    open: int
    high: int
    low: int
    close: int

    def __post_init__(self) -> None:
        if not (self.low <= min(self.open, self.close)
                and max(self.open, self.close) <= self.high):
            raise ValueError(
                f"bar {self.index}: OHLC ordering violated "
                f"(O={self.open} H={self.high} L={self.low} C={self.close})"
            )

    @property
    def pos_dev(self) -> int:
        """Uptrend deviation (high - open), pipettes."""
        return self.high - self.open

    @property
    def neg_dev(self) -> int:
        """Downtrend deviation (open - low), pipettes."""
        return self.open - self.low


@dataclass(frozen=True)
class DeviationSplit:
    """Cumulative up/down deviation totals and their percentage split."""

    total_pos: int
    total_neg: int
    pct_pos: int
    pct_neg: int


def resample(prices: Sequence[int], interval_len: int) -> list[OhlcBar]:
    """Cluster a price series into consecutive fixed-length OHLC bars.

    Emits one bar per complete cluster; an incomplete tail is dropped.
    """
    if interval_len < 1:
        raise PreconditionError(f"interval_len must be >= 1, got {interval_len}")
    bars = []
    n_bars = len(prices) // interval_len
    for k in range(n_bars):
        cluster = prices[k * interval_len : (k + 1) * interval_len]
        bars.append(
            OhlcBar(
                index=k + 1,
                open=cluster[0],
                high=max(cluster),
                low=min(cluster),
                close=cluster[-1],
            )
        )
    return bars


def bar_deviations(bar: OhlcBar) -> tuple[int, int]:
    """(uptrend, downtrend) deviation of a bar in pipettes."""
    return bar.pos_dev, bar.neg_dev


def cumulative_split(bars: Sequence[OhlcBar]) -> DeviationSplit:
    """Total up/down deviations over bars, with a rounded percentage split.

    pct_pos rounds half-up; pct_neg is its complement so the pair always
    sums to 100.
    """
    total_pos = sum(b.pos_dev for b in bars)
    total_neg = sum(b.neg_dev for b in bars)
    total = total_pos + total_neg
    if total == 0:
        raise PreconditionError("all deviations are zero; split is undefined")
    pct_pos = (200 * total_pos + total) // (2 * total)
    return DeviationSplit(
        total_pos=total_pos,
        total_neg=total_neg,
        pct_pos=pct_pos,
        pct_neg=100 - pct_pos,
    )
