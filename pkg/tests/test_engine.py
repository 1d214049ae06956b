import itertools
import random
from decimal import Decimal

import pytest

from fxgame import (
    PreconditionError,
    RiskAppetite,
    SimulationConfig,
    TradeDirection,
    TradeRecord,
    aggregate_rewards,
    apply_counter_move,
    closed_form_market_reward,
    counter_adjustment,
    price_from_str,
    price_to_str,
    replay_simulation,
    run_simulation,
    speculation_sign,
    trader_reward,
)

from conftest import DEFAULT_INITIAL, TABLE1_SCRIPT, naive_market_reward


def cfg(n=0, **kw):
    return SimulationConfig(n_trades=n, **kw)


class TestPrices:
    def test_round_trip(self):
        assert price_from_str("1.08280") == 108280
        assert price_to_str(108280) == "1.08280"

    def test_short_quote_padded(self):
        assert price_from_str("1.0827") == 108270

    def test_too_precise_rejected(self):
        with pytest.raises(ValueError):
            price_from_str("1.000001")


class TestDirection:
    def test_signs(self):
        assert speculation_sign(TradeDirection.BUY) == 1
        assert speculation_sign(TradeDirection.SELL) == -1
        assert (speculation_sign(TradeDirection.BUY)
                * speculation_sign(TradeDirection.SELL) == -1)

    def test_wire_codes(self):
        assert TradeDirection.BUY.wire == "0"
        assert TradeDirection.SELL.wire == "1"
        assert TradeDirection.from_wire("1") is TradeDirection.SELL
        with pytest.raises(ValueError):
            TradeDirection.from_wire("2")


class TestAppetite:
    def test_bounds(self):
        with pytest.raises(ValueError):
            RiskAppetite(0)
        with pytest.raises(ValueError):
            RiskAppetite(101)
        assert RiskAppetite(100).value == Decimal("1.00")

    def test_off_grid_rejected(self):
        with pytest.raises(ValueError):
            RiskAppetite.parse("0.005")


class TestCounterAdjustment:
    @pytest.mark.parametrize("appetite,pipettes", [
        ("0.43", 43),
        ("1.00", 100),
        ("0.01", 1),
    ])
    def test_examples(self, appetite, pipettes, default_config):
        assert counter_adjustment(RiskAppetite.parse(appetite), default_config) == pipettes

    def test_grid_mismatch_rejected(self, default_config):
        with pytest.raises(ValueError):
            counter_adjustment(RiskAppetite.parse("0.4", decimals=1), default_config)


class TestCounterMove:
    def test_table1_rows(self, default_config):
        p = apply_counter_move(price_from_str("1.08280"), TradeDirection.BUY,
                               RiskAppetite.parse("0.43"), default_config)
        assert price_to_str(p) == "1.08237"
        p = apply_counter_move(price_from_str("1.08237"), TradeDirection.BUY,
                               RiskAppetite.parse("0.56"), default_config)
        assert price_to_str(p) == "1.08181"

    def test_sell_adds(self, default_config):
        p = apply_counter_move(price_from_str("1.00000"), TradeDirection.SELL,
                               RiskAppetite.parse("0.50"), default_config)
        assert price_to_str(p) == "1.00050"

    def test_negative_price_errors(self, default_config):
        with pytest.raises(PreconditionError):
            apply_counter_move(50, TradeDirection.BUY,
                               RiskAppetite.parse("1.00"), default_config)


class TestReplay:
    def test_table1_progression(self, default_config):
        result = replay_simulation(TABLE1_SCRIPT, DEFAULT_INITIAL, default_config)
        assert [price_to_str(p) for p in result.price_progression] == [
            "1.08237", "1.08181", "1.08154",
        ]
        assert result.final_price == price_from_str("1.08154")

    def test_empty_script(self, default_config):
        result = replay_simulation([], DEFAULT_INITIAL, default_config)
        assert result.trades == ()
        assert result.final_price == DEFAULT_INITIAL

    def test_round_trip_with_seeded_run(self):
        config = cfg(50, seed=99)
        simulated = run_simulation(config)
        script = [(t.direction, t.appetite) for t in simulated.trades]
        replayed = replay_simulation(script, config.initial_price, config)
        assert replayed.price_progression == simulated.price_progression
        assert replayed.trades == simulated.trades


class TestRunSimulation:
    def test_zero_trades(self):
        result = run_simulation(cfg(0, seed=1))
        assert result.trades == ()
        assert result.final_price == 108280

    def test_determinism(self):
        a = run_simulation(cfg(500, seed=7))
        b = run_simulation(cfg(500, seed=7))
        assert a == b

    def test_seed_changes_outcome(self):
        a = run_simulation(cfg(500, seed=7))
        b = run_simulation(cfg(500, seed=8))
        assert a.price_progression != b.price_progression

    def test_telescoping_identity(self):
        result = run_simulation(cfg(1000, seed=3))
        drift = sum(
            t.direction.sign * counter_adjustment(t.appetite, result.config)
            for t in result.trades
        )
        assert result.final_price == result.config.initial_price - drift

    def test_manual_replay_of_recorded_draws(self):
        result = run_simulation(cfg(2, seed=11))
        price = result.config.initial_price
        for t in result.trades:
            assert t.open_price == price
            price = apply_counter_move(price, t.direction, t.appetite, result.config)
            assert t.post_price == price


class TestTraderReward:
    def test_worked_example(self):
        # buy at 1.0225 closed at 1.0350 with appetite 0.01 earns 12.5
        config = cfg(0, initial_price=price_from_str("1.0225"))
        trade = TradeRecord(0, TradeDirection.BUY, RiskAppetite.parse("0.01"),
                            price_from_str("1.0225"), price_from_str("1.0224"))
        assert trader_reward(trade, price_from_str("1.0350"), config) == Decimal("12.5")

    def test_single_buy_half_appetite(self, default_config):
        trade = TradeRecord(0, TradeDirection.BUY, RiskAppetite.parse("0.50"),
                            price_from_str("1.08280"), price_from_str("1.08230"))
        assert trader_reward(trade, price_from_str("1.08230"), default_config) == Decimal("-25.0")

    def test_no_deviation_no_reward(self, default_config):
        for direction in TradeDirection:
            trade = TradeRecord(0, direction, RiskAppetite.parse("0.77"),
                                108280, 108280)
            assert trader_reward(trade, 108280, default_config) == 0


class TestAggregateRewards:
    def test_buy_sell_pair_full_appetite(self, default_config):
        script = [
            (TradeDirection.BUY, RiskAppetite.parse("1.00")),
            (TradeDirection.SELL, RiskAppetite.parse("1.00")),
        ]
        report = aggregate_rewards(
            replay_simulation(script, DEFAULT_INITIAL, default_config))
        assert list(report.per_trader) == [Decimal("0.00"), Decimal("-100.00")]
        assert report.aggregate_traders_reward == Decimal("-100.00")
        assert report.intelligent_market_reward == Decimal("100.00")
        assert report.oracle_market_reward == Decimal("100.00")
        assert report.zero_sum_ok

    def test_empty_result(self, default_config):
        report = aggregate_rewards(replay_simulation([], DEFAULT_INITIAL, default_config))
        assert report.per_trader == ()
        assert report.aggregate_traders_reward == 0
        assert report.intelligent_market_reward == 0
        assert report.zero_sum_ok

    def test_single_buy(self, default_config):
        script = [(TradeDirection.BUY, RiskAppetite.parse("0.50"))]
        report = aggregate_rewards(
            replay_simulation(script, DEFAULT_INITIAL, default_config))
        assert report.aggregate_traders_reward == Decimal("-25.00")
        assert report.intelligent_market_reward == Decimal("25.00")


class TestClosedFormOracle:
    def test_single_buy(self, default_config):
        trades = replay_simulation(
            [(TradeDirection.BUY, RiskAppetite.parse("0.50"))],
            DEFAULT_INITIAL, default_config).trades
        assert closed_form_market_reward(trades, default_config) == Decimal("25.00")

    def test_buy_sell_pair(self, default_config):
        trades = replay_simulation(
            [(TradeDirection.BUY, RiskAppetite.parse("1.00")),
             (TradeDirection.SELL, RiskAppetite.parse("1.00"))],
            DEFAULT_INITIAL, default_config).trades
        assert closed_form_market_reward(trades, default_config) == Decimal("100.00")

    def test_no_trades(self, default_config):
        assert closed_form_market_reward((), default_config) == 0

    def test_against_brute_force(self, default_config):
        rnd = random.Random(2024)
        for _ in range(200):
            n = rnd.randrange(0, 20)
            script = [
                (rnd.choice(list(TradeDirection)), RiskAppetite(rnd.randint(1, 100)))
                for _ in range(n)
            ]
            expected = naive_market_reward(script, DEFAULT_INITIAL, default_config)
            trades = replay_simulation(script, DEFAULT_INITIAL, default_config).trades
            assert closed_form_market_reward(trades, default_config) == expected

    def test_exhaustive_sign_patterns(self, default_config):
        appetites = [RiskAppetite(u) for u in (7, 100, 1, 43, 56, 27, 91, 15)]
        for signs in itertools.product(list(TradeDirection), repeat=len(appetites)):
            script = list(zip(signs, appetites))
            result = replay_simulation(script, DEFAULT_INITIAL, default_config)
            report = aggregate_rewards(result)
            assert report.intelligent_market_reward == report.oracle_market_reward

    def test_permutation_invariance(self, default_config):
        rnd = random.Random(5)
        script = [
            (rnd.choice(list(TradeDirection)), RiskAppetite(rnd.randint(1, 100)))
            for _ in range(12)
        ]
        base = closed_form_market_reward(
            replay_simulation(script, DEFAULT_INITIAL, default_config).trades,
            default_config)
        for _ in range(20):
            rnd.shuffle(script)
            result = replay_simulation(script, DEFAULT_INITIAL, default_config)
            report = aggregate_rewards(result)
            assert report.intelligent_market_reward == base


class TestConfigValidation:
    def test_negative_trades(self):
        with pytest.raises(ValueError):
            SimulationConfig(n_trades=-1)

    def test_nonpositive_price(self):
        with pytest.raises(ValueError):
            SimulationConfig(n_trades=1, initial_price=0)

    def test_fractional_pipette_rejected(self):
        with pytest.raises(ValueError):
            SimulationConfig(n_trades=1, ppt=Decimal("0.0001"), appetite_decimals=2)

    def test_one_decimal_grid(self):
        config = SimulationConfig(n_trades=1, appetite_decimals=1)
        assert config.pipettes_per_unit == 10
