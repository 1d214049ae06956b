"""Command-line entry point.

Subcommands: simulate, resample, ingest, batches, compare, chart. Every
output directory gets a sidecar JSON recording the effective configuration
(seed included) so any artifact can be regenerated. Exit codes: 2 for
parse errors, 3 for precondition violations, 4 for I/O failures.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import io
import json
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .engine import (
    PreconditionError,
    SimulationConfig,
    aggregate_rewards,
    price_from_str,
    replay_simulation,
    run_simulation,
)
from .ingest import FORMATS, Batch, IngestError, parse_ohlc_csv, extract_batches
from .kernel import KERNEL_BACKEND
from .ohlc import cumulative_split, resample
from .report import (
    build_comparison,
    render_candlestick_svg,
    render_line_svg,
    render_pie_svg,
    write_comparison_csv,
    write_comparison_json,
)
from .serialize import (
    read_bars_csv,
    read_prices_csv,
    read_script_csv,
    split_from_dict,
    write_bars_csv,
    write_prices_csv,
    write_reward_json,
    write_trades_csv,
)

EXIT_PARSE = 2
EXIT_PRECONDITION = 3
EXIT_IO = 4


class ParseInputError(ValueError):
    """Input file could not be parsed."""


def _write_text(path: Path, content: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(content, encoding="utf-8")


def _sidecar(path: Path, settings: dict) -> None:
    _write_text(path, json.dumps(settings, indent=2, sort_keys=True) + "\n")


def _render_run_artifacts(config: SimulationConfig, result) -> dict[str, str]:
    """Build all simulate outputs in memory so errors leave no partial files."""
    report = aggregate_rewards(result)
    trades_buf = io.StringIO()
    write_trades_csv(trades_buf, result)
    prices_buf = io.StringIO()
    write_prices_csv(prices_buf, result.price_progression)
    reward_buf = io.StringIO()
    write_reward_json(reward_buf, report, config)
    return {
        "trades.csv": trades_buf.getvalue(),
        "prices.csv": prices_buf.getvalue(),
        "reward.json": reward_buf.getvalue(),
    }


def _config_dict(config: SimulationConfig) -> dict:
    return {
        "n_trades": config.n_trades,
        "initial_price": config.initial_price,
        "ppt": str(config.ppt),
        "lot_size": config.lot_size,
        "seed": config.seed,
        "appetite_decimals": config.appetite_decimals,
        "kernel_backend": KERNEL_BACKEND,
        "version": __version__,
    }


def _run_one_seed(args: tuple) -> tuple[int, str, bool]:
    seed, n_trades, initial_price, out_dir = args
    config = SimulationConfig(n_trades=n_trades, initial_price=initial_price, seed=seed)
    result = run_simulation(config)
    files = _render_run_artifacts(config, result)
    run_dir = Path(out_dir)
    for name, content in files.items():
        _write_text(run_dir / name, content)
    _sidecar(run_dir / "run_config.json", _config_dict(config))
    reward = json.loads(files["reward.json"])
    return seed, reward["intelligent_market_reward"], reward["zero_sum_ok"]


def cmd_simulate(args: argparse.Namespace) -> int:
    initial_price = price_from_str(args.initial)
    out_dir = Path(args.out_dir)

    if args.script is not None:
        with open(args.script, encoding="utf-8") as fh:
            script = read_script_csv(fh)
        config = SimulationConfig(
            n_trades=len(script), initial_price=initial_price, seed=args.seed or 0
        )
        result = replay_simulation(script, initial_price, config)
        files = _render_run_artifacts(result.config, result)
        for name, content in files.items():
            _write_text(out_dir / name, content)
        settings = _config_dict(result.config)
        settings["script"] = str(args.script)
        _sidecar(out_dir / "run_config.json", settings)
        reward = json.loads(files["reward.json"])
        print(f"intelligent_market_reward={reward['intelligent_market_reward']} "
              f"zero_sum_ok={reward['zero_sum_ok']}")
        return 0

    if args.seed is None:
        raise PreconditionError("--seed is required for simulate (no silent entropy)")

    if args.batch > 1:
        jobs = [
            (args.seed + k, args.trades, initial_price, out_dir / f"seed-{args.seed + k}")
            for k in range(args.batch)
        ]
        with concurrent.futures.ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_run_one_seed, jobs))
        for seed, reward, ok in sorted(results):
            print(f"seed={seed} intelligent_market_reward={reward} zero_sum_ok={ok}")
        return 0

    seed, reward, ok = _run_one_seed((args.seed, args.trades, initial_price, out_dir))
    print(f"intelligent_market_reward={reward} zero_sum_ok={ok}")
    return 0


def cmd_resample(args: argparse.Namespace) -> int:
    with open(args.prices, encoding="utf-8") as fh:
        try:
            prices = read_prices_csv(fh)
        except ValueError as exc:
            raise ParseInputError(str(exc)) from None
    bars = resample(prices, args.interval)
    out = Path(args.out)
    buf = io.StringIO()
    write_bars_csv(buf, bars)
    _write_text(out, buf.getvalue())
    _sidecar(out.with_suffix(out.suffix + ".meta.json"),
             {"prices": str(args.prices), "interval_len": args.interval,
              "bars": len(bars), "version": __version__})
    print(f"wrote {len(bars)} bars to {out}")
    return 0


def cmd_ingest(args: argparse.Namespace) -> int:
    with open(args.input, encoding="utf-8") as fh:
        rows = parse_ohlc_csv(fh, args.format)
    from .ingest import rows_to_bars

    bars = rows_to_bars(rows)
    out = Path(args.out)
    buf = io.StringIO()
    write_bars_csv(buf, bars, times=[r.timestamp for r in rows])
    _write_text(out, buf.getvalue())
    _sidecar(out.with_suffix(out.suffix + ".meta.json"),
             {"input": str(args.input), "format": args.format,
              "rows": len(rows), "version": __version__})
    print(f"ingested {len(rows)} rows to {out}")
    return 0


def cmd_batches(args: argparse.Namespace) -> int:
    with open(args.bars, encoding="utf-8") as fh:
        rows = parse_ohlc_csv(fh, args.format)
    batches = extract_batches(rows, args.len, args.count)
    out_dir = Path(args.out_dir)
    for batch in batches:
        buf = io.StringIO()
        times = [r.timestamp for r in rows[(batch.batch_no - 1) * args.len :
                                           batch.batch_no * args.len]]
        write_bars_csv(buf, batch.bars, times=times)
        _write_text(out_dir / f"batch_{batch.batch_no:02d}.csv", buf.getvalue())
    _sidecar(out_dir / "batches.meta.json",
             {"bars": str(args.bars), "batch_len": args.len,
              "count": args.count, "version": __version__})
    print(f"wrote {len(batches)} batches to {out_dir}")
    return 0


def cmd_compare(args: argparse.Namespace) -> int:
    def load_bars(path: str):
        with open(path, encoding="utf-8") as fh:
            try:
                return read_bars_csv(fh)
            except ValueError as exc:
                raise ParseInputError(f"{path}: {exc}") from None

    synthetic = [load_bars(p) for p in args.synthetic]
    real = [Batch(batch_no=i + 1, bars=tuple(load_bars(p)))
            for i, p in enumerate(args.real)]
    report = build_comparison(synthetic, real)
    out = Path(args.out)
    buf = io.StringIO()
    write_comparison_json(buf, report)
    _write_text(out, buf.getvalue())
    if args.csv:
        csv_buf = io.StringIO()
        write_comparison_csv(csv_buf, report)
        _write_text(Path(args.csv), csv_buf.getvalue())
    _sidecar(out.with_suffix(out.suffix + ".meta.json"),
             {"synthetic": [str(p) for p in args.synthetic],
              "real": [str(p) for p in args.real], "version": __version__})
    s = report.synthetic_summary
    r = report.real_summary
    print(f"synthetic pct_pos {s.min_pct_pos}-{s.max_pct_pos} (mean {s.mean_pct_pos:.1f}); "
          f"real pct_pos {r.min_pct_pos}-{r.max_pct_pos} (mean {r.mean_pct_pos:.1f})")
    return 0


def cmd_chart(args: argparse.Namespace) -> int:
    if args.kind == "line":
        if args.prices is None:
            raise PreconditionError("chart line requires --prices")
        with open(args.prices, encoding="utf-8") as fh:
            try:
                series = read_prices_csv(fh)
            except ValueError as exc:
                raise ParseInputError(str(exc)) from None
        svg = render_line_svg(series)
    elif args.kind == "candles":
        if args.bars is None:
            raise PreconditionError("chart candles requires --bars")
        with open(args.bars, encoding="utf-8") as fh:
            try:
                bars = read_bars_csv(fh)
            except ValueError as exc:
                raise ParseInputError(str(exc)) from None
        svg = render_candlestick_svg(bars)
    else:  # pie
        if args.split is not None:
            with open(args.split, encoding="utf-8") as fh:
                try:
                    split = split_from_dict(json.load(fh))
                except (ValueError, KeyError) as exc:
                    raise ParseInputError(f"bad split JSON: {exc}") from None
        elif args.bars is not None:
            with open(args.bars, encoding="utf-8") as fh:
                try:
                    bars = read_bars_csv(fh)
                except ValueError as exc:
                    raise ParseInputError(str(exc)) from None
            split = cumulative_split(bars)
        else:
            raise PreconditionError("chart pie requires --split or --bars")
        svg = render_pie_svg(split)
    _write_text(Path(args.out), svg)
    print(f"wrote {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fxgame",
        description="Seeded trader-vs-market game simulator and evaluation pipeline",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"fxgame {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run the seeded game and write run artifacts",
                       formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    p.add_argument("--trades", type=int, default=200_000, help="number of trades")
    p.add_argument("--seed", type=int, default=None,
                   help="64-bit seed (required unless --script)")
    p.add_argument("--initial", default="1.0828", help="initial price")
    p.add_argument("--out-dir", required=True, help="output directory")
    p.add_argument("--script", default=None,
                   help="replay script CSV (trade_type,risk_appetite) instead of random draws")
    p.add_argument("--batch", type=int, default=1,
                   help="run this many consecutive seeds (seed, seed+1, ...)")
    p.add_argument("--jobs", type=int, default=None, help="parallel workers for --batch")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("resample", help="resample a prices CSV into OHLC bars",
                       formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    p.add_argument("--prices", required=True, help="prices CSV (index,price)")
    p.add_argument("--interval", type=int, default=3600, help="prices per bar")
    p.add_argument("--out", required=True, help="output bars CSV")
    p.set_defaults(func=cmd_resample)

    p = sub.add_parser("ingest", help="parse historical OHLC CSV to normalized bars",
                       formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    p.add_argument("--input", required=True, help="historical CSV file")
    p.add_argument("--format", default="default", choices=sorted(FORMATS),
                   help="input column mapping")
    p.add_argument("--out", required=True, help="normalized bars CSV")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("batches", help="cut historical bars into fixed-length batches",
                       formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    p.add_argument("--bars", required=True, help="historical CSV file")
    p.add_argument("--format", default="default", choices=sorted(FORMATS))
    p.add_argument("--len", type=int, default=55, help="intervals per batch")
    p.add_argument("--count", type=int, default=10, help="number of batches")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_batches)

    p = sub.add_parser("compare", help="synthetic-vs-real deviation comparison report",
                       formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    p.add_argument("--synthetic", nargs="+", required=True, help="synthetic bars CSVs")
    p.add_argument("--real", nargs="+", required=True, help="real batch bars CSVs")
    p.add_argument("--out", required=True, help="report JSON path")
    p.add_argument("--csv", default=None, help="also write a table-style CSV here")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("chart", help="emit an SVG chart",
                       formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    p.add_argument("kind", choices=["line", "candles", "pie"])
    p.add_argument("--prices", default=None, help="prices CSV (line)")
    p.add_argument("--bars", default=None, help="bars CSV (candles or pie)")
    p.add_argument("--split", default=None, help="split JSON (pie)")
    p.add_argument("--out", required=True, help="output SVG path")
    p.set_defaults(func=cmd_chart)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (IngestError, ParseInputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    raise SystemExit(main())
