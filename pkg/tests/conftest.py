from decimal import Decimal

import pytest

from fxgame import RiskAppetite, SimulationConfig, TradeDirection, price_from_str

TABLE1_SCRIPT = [
    (TradeDirection.BUY, RiskAppetite.parse("0.43")),
    (TradeDirection.BUY, RiskAppetite.parse("0.56")),
    (TradeDirection.BUY, RiskAppetite.parse("0.27")),
]

DEFAULT_INITIAL = price_from_str("1.0828")


@pytest.fixture
def default_config() -> SimulationConfig:
    return SimulationConfig(n_trades=0, seed=0)


def naive_market_reward(script, initial_price, config) -> Decimal:
    """Independent brute-force oracle: walk prices step by step with plain
    Decimal arithmetic and negate the summed trader payoffs."""
    pipette = Decimal("0.00001")
    price = Decimal(initial_price) * pipette
    opens = []
    for direction, appetite in script:
        opens.append(price)
        move = appetite.value * Decimal(config.ppt) * direction.sign
        price = price - move
    final = price
    total = Decimal(0)
    for (direction, appetite), open_price in zip(script, opens):
        total += (final - open_price) * direction.sign * appetite.value * config.lot_size
    return -total
