"""Sequential trader-vs-market game engine.

Prices are integer pipette counts (1 pipette = 0.00001 price units) and
risk appetites are integer grid units (0.01 steps by default), so every
price move and every reward is exact: zero-sum holds as an equality, not
a tolerance. Conversion to 5-decimal strings happens only at I/O edges.

The market counter-moves against each trade: a buy pushes the price down,
a sell pushes it up, by appetite * 0.001 price units.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from decimal import Decimal
from typing import Iterable, Sequence

import numpy as np

from . import kernel
from .rng import Xoshiro256StarStar

PIPETTES_PER_UNIT_PRICE = 100_000

__all__ = [
    "TradeDirection",
    "RiskAppetite",
    "SimulationConfig",
    "TradeRecord",
    "SimulationResult",
    "RewardReport",
    "PreconditionError",
    "price_from_str",
    "price_to_str",
    "speculation_sign",
    "counter_adjustment",
    "apply_counter_move",
    "run_simulation",
    "replay_simulation",
    "trader_reward",
    "aggregate_rewards",
    "closed_form_market_reward",
    "market_reward_for_config",
]


class PreconditionError(ValueError):
    """A domain precondition was violated (degenerate or invalid input)."""


class TradeDirection(enum.Enum):
    """Buy speculates up (+1), sell speculates down (-1)."""

    BUY = 0
    SELL = 1

    @property
    def sign(self) -> int:
        return 1 if self is TradeDirection.BUY else -1

    @property
    def wire(self) -> str:
        """Serialized code: "0" for buy, "1" for sell."""
        return str(self.value)

    @classmethod
    def from_wire(cls, code: str) -> "TradeDirection":
        if code == "0":
            return cls.BUY
        if code == "1":
            return cls.SELL
        raise ValueError(f"trade type must be '0' or '1', got {code!r}")


def speculation_sign(direction: TradeDirection) -> int:
    return direction.sign


def price_from_str(text: str) -> int:
    """Parse a decimal price string to integer pipettes, exactly.

    Accepts up to 5 decimal places; shorter quotes (e.g. "1.0827") are
    right-padded. Rejects anything that cannot be represented without loss.
    """
    scaled = Decimal(text).scaleb(5)
    pipettes = int(scaled)
    if pipettes != scaled:
        raise ValueError(f"price {text!r} is not representable in pipettes")
    return pipettes


def price_to_str(pipettes: int) -> str:
    """Format integer pipettes as a 5-decimal price string."""
    sign = "-" if pipettes < 0 else ""
    whole, frac = divmod(abs(pipettes), PIPETTES_PER_UNIT_PRICE)
    return f"{sign}{whole}.{frac:05d}"


@dataclass(frozen=True)
class RiskAppetite:
    """Trader confidence in (0, 1], stored as integer grid units.

    With the default 2-decimal grid, units range over 1..100 and
    ``units == value * 100``.
    """

    units: int
    decimals: int = 2

    def __post_init__(self) -> None:
        if self.decimals not in (1, 2):
            raise ValueError(f"appetite decimals must be 1 or 2, got {self.decimals}")
        if not 1 <= self.units <= self.grid:
            raise ValueError(
                f"appetite units must be in [1, {self.grid}], got {self.units}"
            )

    @property
    def grid(self) -> int:
        return 10**self.decimals

    @property
    def value(self) -> Decimal:
        return Decimal(self.units).scaleb(-self.decimals)

    @classmethod
    def parse(cls, text: str, decimals: int = 2) -> "RiskAppetite":
        scaled = Decimal(text).scaleb(decimals)
        units = int(scaled)
        if units != scaled:
            raise ValueError(
                f"appetite {text!r} is not on the {decimals}-decimal grid"
            )
        return cls(units, decimals)

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class SimulationConfig:
    """Run parameters and the EURUSD constants."""

    n_trades: int
    initial_price: int = 108_280  # 1.08280
    ppt: Decimal = Decimal("0.001")
    lot_size: int = 100_000
    seed: int = 0
    appetite_decimals: int = 2

    def __post_init__(self) -> None:
        if self.n_trades < 0:
            raise ValueError("n_trades must be non-negative")
        if self.initial_price <= 0:
            raise ValueError("initial_price must be positive")
        if self.appetite_decimals not in (1, 2):
            raise ValueError("appetite_decimals must be 1 or 2")
        # one appetite unit must map to a whole number of pipettes
        unit_pipettes = Decimal(self.ppt).scaleb(5) / self.grid
        if unit_pipettes != int(unit_pipettes) or int(unit_pipettes) < 1:
            raise ValueError(
                f"ppt {self.ppt} with {self.appetite_decimals}-decimal appetites "
                "produces fractional pipette adjustments"
            )
        if self.lot_size % (1000 * self.grid) != 0:
            raise ValueError(
                f"lot_size {self.lot_size} does not yield whole-cent rewards "
                f"on the {self.appetite_decimals}-decimal appetite grid"
            )

    @property
    def grid(self) -> int:
        return 10**self.appetite_decimals

    @property
    def pipettes_per_unit(self) -> int:
        """Counter-adjustment pipettes per appetite grid unit (1 by default)."""
        return int(Decimal(self.ppt).scaleb(5)) // self.grid

    @property
    def cents_per_unit_pipette(self) -> int:
        """Reward cents per (appetite unit x pipette of deviation)."""
        return self.lot_size // (1000 * self.grid)


@dataclass(frozen=True)
class TradeRecord:
    """One trader's move and the market's response."""

    index: int
    direction: TradeDirection
    appetite: RiskAppetite
    open_price: int
    post_price: int


@dataclass(frozen=True)
class SimulationResult:
    """Complete outcome of one game: all trades plus the price path."""

    config: SimulationConfig
    trades: tuple[TradeRecord, ...]
    price_progression: tuple[int, ...]

    @property
    def final_price(self) -> int:
        if not self.price_progression:
            return self.config.initial_price
        return self.price_progression[-1]


@dataclass(frozen=True)
class RewardReport:
    """Per-trader and aggregate rewards in account-currency units."""

    per_trader: tuple[Decimal, ...]
    aggregate_traders_reward: Decimal
    intelligent_market_reward: Decimal
    oracle_market_reward: Decimal

    @property
    def zero_sum_ok(self) -> bool:
        return self.aggregate_traders_reward + self.intelligent_market_reward == 0


def counter_adjustment(appetite: RiskAppetite, config: SimulationConfig) -> int:
    """Magnitude of the market's counter-move, in pipettes."""
    if appetite.decimals != config.appetite_decimals:
        raise ValueError(
            f"appetite grid ({appetite.decimals} dp) does not match config "
            f"({config.appetite_decimals} dp)"
        )
    return appetite.units * config.pipettes_per_unit


def apply_counter_move(
    price: int,
    direction: TradeDirection,
    appetite: RiskAppetite,
    config: SimulationConfig,
) -> int:
    """Market response: move the price against the trader's speculation."""
    new_price = price - direction.sign * counter_adjustment(appetite, config)
    if new_price <= 0:
        raise PreconditionError(
            f"counter-move would drive the price to {price_to_str(new_price)}; "
            "configuration is degenerate"
        )
    return new_price


def _result_from_arrays(
    config: SimulationConfig,
    directions: np.ndarray,
    units: np.ndarray,
    opens: np.ndarray,
    posts: np.ndarray,
) -> SimulationResult:
    decimals = config.appetite_decimals
    trades = tuple(
        TradeRecord(
            index=i,
            direction=TradeDirection(int(d)),
            appetite=RiskAppetite(int(u), decimals),
            open_price=int(o),
            post_price=int(p),
        )
        for i, (d, u, o, p) in enumerate(zip(directions, units, opens, posts))
    )
    return SimulationResult(
        config=config,
        trades=trades,
        price_progression=tuple(int(p) for p in posts),
    )


def simulate_arrays(
    config: SimulationConfig,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Seeded trade loop returning raw arrays; the fast path for batch stats."""
    try:
        return kernel.run_trades(
            config.seed,
            config.n_trades,
            config.initial_price,
            config.grid,
            config.pipettes_per_unit,
        )
    except ValueError as exc:
        raise PreconditionError(str(exc)) from None


def run_simulation(
    config: SimulationConfig, rng: Xoshiro256StarStar | None = None
) -> SimulationResult:
    """Run the seeded game: each round draws direction then appetite, then
    the market counter-moves. Deterministic per (seed, config).

    Passing an explicit ``rng`` bypasses the compiled kernel and drives the
    reference loop with that generator state.
    """
    if rng is None:
        return _result_from_arrays(config, *simulate_arrays(config))

    script = []
    for _ in range(config.n_trades):
        direction, units = rng.draw_trade(config.grid)
        script.append(
            (TradeDirection(direction), RiskAppetite(units, config.appetite_decimals))
        )
    return replay_simulation(script, config.initial_price, config)


def replay_simulation(
    script: Sequence[tuple[TradeDirection, RiskAppetite]],
    initial_price: int,
    config: SimulationConfig,
) -> SimulationResult:
    """Run the game with scripted moves instead of random draws."""
    if initial_price <= 0:
        raise PreconditionError("initial_price must be positive")
    price = initial_price
    trades = []
    progression = []
    for i, (direction, appetite) in enumerate(script):
        new_price = apply_counter_move(price, direction, appetite, config)
        trades.append(
            TradeRecord(
                index=i,
                direction=direction,
                appetite=appetite,
                open_price=price,
                post_price=new_price,
            )
        )
        progression.append(new_price)
        price = new_price
    run_config = SimulationConfig(
        n_trades=len(trades),
        initial_price=initial_price,
        ppt=config.ppt,
        lot_size=config.lot_size,
        seed=config.seed,
        appetite_decimals=config.appetite_decimals,
    )
    return SimulationResult(
        config=run_config, trades=tuple(trades), price_progression=tuple(progression)
    )


def _reward_cents(
    open_price: int,
    final_price: int,
    sign: int,
    appetite_units: int,
    config: SimulationConfig,
) -> int:
    return (final_price - open_price) * sign * appetite_units * config.cents_per_unit_pipette


def _cents_to_money(cents: int) -> Decimal:
    return Decimal(cents).scaleb(-2)


def trader_reward(
    trade: TradeRecord, final_price: int, config: SimulationConfig
) -> Decimal:
    """Trader payoff: appetite * lot_size * (final - open) * sign, exact."""
    cents = _reward_cents(
        trade.open_price, final_price, trade.direction.sign, trade.appetite.units, config
    )
    return _cents_to_money(cents)


def aggregate_rewards(result: SimulationResult) -> RewardReport:
    """Per-trader rewards, their sum, and the market's (negated) reward.

    The oracle cross-check is the closed-form market reward, computed from
    the trade script alone.
    """
    config = result.config
    final = result.final_price
    cents = [
        _reward_cents(
            t.open_price, final, t.direction.sign, t.appetite.units, config
        )
        for t in result.trades
    ]
    total = sum(cents)
    return RewardReport(
        per_trader=tuple(_cents_to_money(c) for c in cents),
        aggregate_traders_reward=_cents_to_money(total),
        intelligent_market_reward=_cents_to_money(-total),
        oracle_market_reward=closed_form_market_reward(result.trades, config),
    )


def closed_form_market_reward(
    trades: Iterable[TradeRecord], config: SimulationConfig
) -> Decimal:
    """Market reward from the trade script alone, without simulating prices.

    With u_i = appetite_i * sign_i, the telescoped payoff sum gives
    market reward = (lot_size * ppt / 2) * ((sum u_i)^2 + sum u_i^2).
    Order-independent; verified against brute force in the test suite.
    """
    signed_units = [t.direction.sign * t.appetite.units for t in trades]
    s = sum(signed_units)
    q = sum(u * u for u in signed_units)
    # units scale: multiply by cents_per_unit_pipette * pipettes_per_unit / 2,
    # expressed so the division is exact (s*s + q is always even).
    numerator = (s * s + q) * config.cents_per_unit_pipette * config.pipettes_per_unit
    half, rem = divmod(numerator, 2)
    if rem:
        raise AssertionError("closed-form reward is not a whole number of half-cents")
    return _cents_to_money(half)


def market_reward_for_config(config: SimulationConfig) -> Decimal:
    """Simulated intelligent-market reward without materializing trade records.

    Used for large batch experiments; equals
    aggregate_rewards(run_simulation(config)).intelligent_market_reward.
    """
    directions, units, opens, posts = simulate_arrays(config)
    if len(posts) == 0:
        return Decimal(0)
    final = int(posts[-1])
    signs = 1 - 2 * directions.astype(np.int64)
    cents = (final - opens) * signs * units * config.cents_per_unit_pipette
    return _cents_to_money(-int(cents.sum()))
