"""Seeded trader-vs-market zero-sum game simulator and evaluation pipeline."""

__version__ = "0.1.0"

from .engine import (
    PreconditionError,
    RewardReport,
    RiskAppetite,
    SimulationConfig,
    SimulationResult,
    TradeDirection,
    TradeRecord,
    aggregate_rewards,
    apply_counter_move,
    closed_form_market_reward,
    counter_adjustment,
    market_reward_for_config,
    price_from_str,
    price_to_str,
    replay_simulation,
    run_simulation,
    speculation_sign,
    trader_reward,
)
from .kernel import KERNEL_BACKEND
from .ohlc import DeviationSplit, OhlcBar, bar_deviations, cumulative_split, resample
from .rng import Xoshiro256StarStar

__all__ = [
    "KERNEL_BACKEND",
    "PreconditionError",
    "RewardReport",
    "RiskAppetite",
    "SimulationConfig",
    "SimulationResult",
    "TradeDirection",
    "TradeRecord",
    "Xoshiro256StarStar",
    "DeviationSplit",
    "OhlcBar",
    "aggregate_rewards",
    "apply_counter_move",
    "bar_deviations",
    "closed_form_market_reward",
    "counter_adjustment",
    "cumulative_split",
    "market_reward_for_config",
    "price_from_str",
    "price_to_str",
    "replay_simulation",
    "resample",
    "run_simulation",
    "speculation_sign",
    "trader_reward",
    "__version__",
]
