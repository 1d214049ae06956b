"""CSV/JSON wire formats.

Money amounts are serialized as 2-decimal strings so files round-trip
exactly; prices are 5-decimal strings; deviations are plain integers.
"""

from __future__ import annotations

import csv
import json
from decimal import Decimal
from typing import IO, Sequence

from .engine import (
    RewardReport,
    RiskAppetite,
    SimulationConfig,
    SimulationResult,
    TradeDirection,
    price_from_str,
    price_to_str,
)
from .ohlc import DeviationSplit, OhlcBar

TRADES_HEADER = ["index", "trade_type", "risk_appetite", "open_price", "post_price"]
PRICES_HEADER = ["index", "price"]
BARS_HEADER = ["interval", "open", "high", "low", "close",
               "pos_dev_pipettes", "neg_dev_pipettes"]


def _appetite_str(appetite: RiskAppetite) -> str:
    return f"{appetite.units / appetite.grid:.{appetite.decimals}f}"


def write_trades_csv(stream: IO[str], result: SimulationResult) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(TRADES_HEADER)
    for t in result.trades:
        writer.writerow([
            t.index,
            t.direction.wire,
            _appetite_str(t.appetite),
            price_to_str(t.open_price),
            price_to_str(t.post_price),
        ])


def read_script_csv(
    stream: IO[str], appetite_decimals: int = 2
) -> list[tuple[TradeDirection, RiskAppetite]]:
    """Read a trades CSV (or a bare trade_type,risk_appetite CSV) as a replay
    script. Price columns, when present, are ignored."""
    reader = csv.DictReader(stream)
    if reader.fieldnames is None:
        raise ValueError("empty script file")
    for col in ("trade_type", "risk_appetite"):
        if col not in reader.fieldnames:
            raise ValueError(f"script file is missing column {col!r}")
    script = []
    for line_no, row in enumerate(reader, start=2):
        try:
            direction = TradeDirection.from_wire(row["trade_type"])
            appetite = RiskAppetite.parse(row["risk_appetite"], appetite_decimals)
        except ValueError as exc:
            raise ValueError(f"script row {line_no}: {exc}") from None
        script.append((direction, appetite))
    return script


def write_prices_csv(stream: IO[str], prices: Sequence[int]) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(PRICES_HEADER)
    for i, p in enumerate(prices):
        writer.writerow([i, price_to_str(p)])


def read_prices_csv(stream: IO[str]) -> list[int]:
    reader = csv.DictReader(stream)
    if reader.fieldnames is None or "price" not in reader.fieldnames:
        raise ValueError("prices file must have a 'price' column")
    return [price_from_str(row["price"]) for row in reader]


def write_reward_json(stream: IO[str], report: RewardReport, config: SimulationConfig) -> None:
    json.dump(
        {
            "seed": config.seed,
            "n_trades": config.n_trades,
            "aggregate_traders_reward": str(report.aggregate_traders_reward),
            "intelligent_market_reward": str(report.intelligent_market_reward),
            "oracle_market_reward": str(report.oracle_market_reward),
            "zero_sum_ok": report.zero_sum_ok,
        },
        stream,
        indent=2,
    )
    stream.write("\n")


def write_bars_csv(
    stream: IO[str], bars: Sequence[OhlcBar], times: Sequence[str] | None = None
) -> None:
    """Bars CSV; when interval timestamps are known (ingested data) a leading
    ``time`` column is preserved."""
    writer = csv.writer(stream, lineterminator="\n")
    header = (["time"] if times is not None else []) + BARS_HEADER
    writer.writerow(header)
    for i, b in enumerate(bars):
        row = [times[i]] if times is not None else []
        row += [
            b.index,
            price_to_str(b.open),
            price_to_str(b.high),
            price_to_str(b.low),
            price_to_str(b.close),
            b.pos_dev,
            b.neg_dev,
        ]
        writer.writerow(row)


def read_bars_csv(stream: IO[str]) -> list[OhlcBar]:
    reader = csv.DictReader(stream)
    if reader.fieldnames is None:
        raise ValueError("empty bars file")
    for col in ("interval", "open", "high", "low", "close"):
        if col not in reader.fieldnames:
            raise ValueError(f"bars file is missing column {col!r}")
    bars = []
    for line_no, row in enumerate(reader, start=2):
        try:
            bars.append(
                OhlcBar(
                    index=int(row["interval"]),
                    open=price_from_str(row["open"]),
                    high=price_from_str(row["high"]),
                    low=price_from_str(row["low"]),
                    close=price_from_str(row["close"]),
                )
            )
        except ValueError as exc:
            raise ValueError(f"bars row {line_no}: {exc}") from None
    return bars


def split_to_dict(split: DeviationSplit) -> dict:
    return {
        "total_pos": split.total_pos,
        "total_neg": split.total_neg,
        "pct_pos": split.pct_pos,
        "pct_neg": split.pct_neg,
    }


def split_from_dict(data: dict) -> DeviationSplit:
    return DeviationSplit(
        total_pos=int(data["total_pos"]),
        total_neg=int(data["total_neg"]),
        pct_pos=int(data["pct_pos"]),
        pct_neg=int(data["pct_neg"]),
    )
