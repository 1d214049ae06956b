"""Pure-Python trade-loop kernel. Fallback when the compiled core is absent.

Produces bit-identical output to ``fxgame._core`` for the same arguments.
"""

from __future__ import annotations

import numpy as np

from .rng import Xoshiro256StarStar

BACKEND = "python"


def run_trades(
    seed: int,
    n_trades: int,
    initial_price: int,
    grid: int,
    pipettes_per_unit: int,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Run the seeded trade loop in integer pipette arithmetic.

    Returns (directions, appetite_units, open_prices, post_prices) where
    directions are 0 (buy) / 1 (sell), appetite_units are grid indices in
    [1, grid], and prices are pipette counts. Raises ValueError if the
    counter-move would drive the price to zero or below.
    """
    rng = Xoshiro256StarStar(seed)
    directions = np.empty(n_trades, dtype=np.uint8)
    units = np.empty(n_trades, dtype=np.int64)
    opens = np.empty(n_trades, dtype=np.int64)
    posts = np.empty(n_trades, dtype=np.int64)

    price = initial_price
    for i in range(n_trades):
        direction, u = rng.draw_trade(grid)
        adjustment = u * pipettes_per_unit
        new_price = price - adjustment if direction == 0 else price + adjustment
        if new_price <= 0:
            raise ValueError(
                f"price driven to {new_price} pipettes at trade {i}; "
                "configuration is degenerate"
            )
        directions[i] = direction
        units[i] = u
        opens[i] = price
        posts[i] = new_price
        price = new_price

    return directions, units, opens, posts
