"""Comparison reports and SVG chart emission.

Charts are standalone SVG 1.1 documents built by hand so output is
deterministic and diffable in tests. Line charts longer than
MAX_LINE_POINTS are min/max-decimated (extremes preserved) with the
factor recorded in the document metadata.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from typing import IO, Sequence
from xml.sax.saxutils import escape

from .engine import PreconditionError, price_to_str
from .ingest import Batch
from .ohlc import DeviationSplit, OhlcBar, cumulative_split

MAX_LINE_POINTS = 10_000

_WIDTH = 960
_HEIGHT = 540
_MARGIN = 60
_UP_FILL = "#2e7d32"
_DOWN_FILL = "#c62828"


@dataclass(frozen=True)
class CohortSummary:
    """Min/max/mean of the uptrend percentage across one cohort."""

    min_pct_pos: int
    max_pct_pos: int
    mean_pct_pos: float


@dataclass(frozen=True)
class ComparisonReport:
    """Synthetic-vs-real deviation splits with per-cohort summaries."""

    synthetic_splits: tuple[DeviationSplit, ...]
    real_splits: tuple[DeviationSplit, ...]
    synthetic_summary: CohortSummary
    real_summary: CohortSummary


def _summarize(splits: Sequence[DeviationSplit]) -> CohortSummary:
    pcts = [s.pct_pos for s in splits]
    return CohortSummary(
        min_pct_pos=min(pcts),
        max_pct_pos=max(pcts),
        mean_pct_pos=sum(pcts) / len(pcts),
    )


def build_comparison(
    synthetic: Sequence[Sequence[OhlcBar]], real: Sequence[Batch]
) -> ComparisonReport:
    """Deviation split per simulation and per real batch, plus summaries."""
    if not synthetic or not real:
        raise PreconditionError("both cohorts must be non-empty")
    synthetic_splits = tuple(cumulative_split(bars) for bars in synthetic)
    real_splits = tuple(cumulative_split(batch.bars) for batch in real)
    return ComparisonReport(
        synthetic_splits=synthetic_splits,
        real_splits=real_splits,
        synthetic_summary=_summarize(synthetic_splits),
        real_summary=_summarize(real_splits),
    )


def comparison_to_dict(report: ComparisonReport) -> dict:
    def splits(items):
        return [
            {
                "pct_pos": s.pct_pos,
                "pct_neg": s.pct_neg,
                "total_pos": s.total_pos,
                "total_neg": s.total_neg,
            }
            for s in items
        ]

    def summary(s: CohortSummary) -> dict:
        return {"min": s.min_pct_pos, "max": s.max_pct_pos, "mean": s.mean_pct_pos}

    return {
        "synthetic": splits(report.synthetic_splits),
        "real": splits(report.real_splits),
        "summary": {
            "synthetic": summary(report.synthetic_summary),
            "real": summary(report.real_summary),
        },
    }


def write_comparison_json(stream: IO[str], report: ComparisonReport) -> None:
    json.dump(comparison_to_dict(report), stream, indent=2)
    stream.write("\n")


def write_comparison_csv(stream: IO[str], report: ComparisonReport) -> None:
    """Table-style layout: one column per simulation/batch."""
    width = max(len(report.synthetic_splits), len(report.real_splits))
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["cohort", "metric"] + [str(i + 1) for i in range(width)])

    def rows(label, splits):
        pos = [s.pct_pos for s in splits] + [""] * (width - len(splits))
        neg = [s.pct_neg for s in splits] + [""] * (width - len(splits))
        writer.writerow([label, "pct_pos"] + pos)
        writer.writerow([label, "pct_neg"] + neg)

    rows("synthetic", report.synthetic_splits)
    rows("real", report.real_splits)


def _svg_document(body: list[str], metadata: dict | None = None) -> str:
    meta = ""
    if metadata:
        payload = escape(json.dumps(metadata, sort_keys=True))
        meta = f"  <metadata>{payload}</metadata>\n"
    return (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_WIDTH}" height="{_HEIGHT}" '
        f'viewBox="0 0 {_WIDTH} {_HEIGHT}">\n'
        + meta
        + "\n".join(body)
        + "\n</svg>\n"
    )


def _price_scale(lo: int, hi: int) -> tuple[int, int]:
    # constant series: pad by a pipette each side so scaling stays finite
    if lo == hi:
        return lo - 1, hi + 1
    return lo, hi


def _y_for(value: int, lo: int, hi: int) -> float:
    span = _HEIGHT - 2 * _MARGIN
    return _MARGIN + span * (hi - value) / (hi - lo)


def _axes(lo: int, hi: int, x_label: str) -> list[str]:
    x0, x1 = _MARGIN, _WIDTH - _MARGIN
    y0, y1 = _MARGIN, _HEIGHT - _MARGIN
    return [
        f'  <line x1="{x0}" y1="{y1}" x2="{x1}" y2="{y1}" stroke="black"/>',
        f'  <line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>',
        f'  <text x="{(x0 + x1) / 2:.1f}" y="{_HEIGHT - 15}" '
        f'text-anchor="middle" font-size="14">{escape(x_label)}</text>',
        f'  <text x="18" y="{(y0 + y1) / 2:.1f}" text-anchor="middle" '
        f'font-size="14" transform="rotate(-90 18 {(y0 + y1) / 2:.1f})">price</text>',
        f'  <text x="{x0 - 6}" y="{y1 + 4}" text-anchor="end" '
        f'font-size="12">{price_to_str(lo)}</text>',
        f'  <text x="{x0 - 6}" y="{y0 + 4}" text-anchor="end" '
        f'font-size="12">{price_to_str(hi)}</text>',
    ]


def _decimate_minmax(series: Sequence[int], target: int) -> tuple[list[int], int]:
    """Reduce a series keeping each chunk's min and max (order preserved)."""
    factor = math.ceil(len(series) / (target // 2))
    out: list[int] = []
    for start in range(0, len(series), factor):
        chunk = series[start : start + factor]
        lo_i = min(range(len(chunk)), key=chunk.__getitem__)
        hi_i = max(range(len(chunk)), key=chunk.__getitem__)
        first, second = sorted((lo_i, hi_i))
        out.append(chunk[first])
        if second != first:
            out.append(chunk[second])
    return out, factor


def render_line_svg(series: Sequence[int], title: str = "price progression") -> str:
    """Line chart of a price series as a single polyline."""
    if len(series) < 2:
        raise PreconditionError("line chart needs at least 2 points")
    factor = 1
    plotted = list(series)
    if len(plotted) > MAX_LINE_POINTS:
        plotted, factor = _decimate_minmax(plotted, MAX_LINE_POINTS)
    lo, hi = _price_scale(min(plotted), max(plotted))

    x0, x1 = _MARGIN, _WIDTH - _MARGIN
    step = (x1 - x0) / (len(plotted) - 1)
    points = " ".join(
        f"{x0 + i * step:.2f},{_y_for(v, lo, hi):.2f}" for i, v in enumerate(plotted)
    )
    body = [
        f'  <title>{escape(title)}</title>',
        *_axes(lo, hi, "trade number"),
        f'  <polyline points="{points}" fill="none" stroke="#1565c0" stroke-width="1"/>',
    ]
    return _svg_document(
        body,
        metadata={
            "points_in": len(series),
            "points_plotted": len(plotted),
            "decimation_factor": factor,
        },
    )


def render_candlestick_svg(bars: Sequence[OhlcBar], title: str = "hourly intervals") -> str:
    """Candlestick chart: one wick+body group per bar, up/down fills."""
    if not bars:
        raise PreconditionError("candlestick chart needs at least 1 bar")
    lo, hi = _price_scale(min(b.low for b in bars), max(b.high for b in bars))

    x0, x1 = _MARGIN, _WIDTH - _MARGIN
    slot = (x1 - x0) / len(bars)
    body_w = max(1.0, slot * 0.6)
    parts = [f'  <title>{escape(title)}</title>', *_axes(lo, hi, "interval")]
    for i, b in enumerate(bars):
        cx = x0 + (i + 0.5) * slot
        y_high = _y_for(b.high, lo, hi)
        y_low = _y_for(b.low, lo, hi)
        y_open = _y_for(b.open, lo, hi)
        y_close = _y_for(b.close, lo, hi)
        fill = _UP_FILL if b.close >= b.open else _DOWN_FILL
        top = min(y_open, y_close)
        height = max(abs(y_close - y_open), 0.5)  # flat bars stay visible
        wick_len = max(y_low - y_high, 0.5)
        parts.append(
            f'  <g class="candle">'
            f'<line x1="{cx:.2f}" y1="{y_high:.2f}" x2="{cx:.2f}" '
            f'y2="{y_high + wick_len:.2f}" stroke="black"/>'
            f'<rect x="{cx - body_w / 2:.2f}" y="{top:.2f}" '
            f'width="{body_w:.2f}" height="{height:.2f}" fill="{fill}"/>'
            f'</g>'
        )
    return _svg_document(parts, metadata={"bars": len(bars)})


def render_pie_svg(split: DeviationSplit, title: str = "deviation split") -> str:
    """Two-sector pie of the up/down deviation totals."""
    total = split.total_pos + split.total_neg
    if total <= 0:
        raise PreconditionError("pie chart needs a positive deviation total")
    cx, cy, r = _WIDTH / 2, _HEIGHT / 2, (_HEIGHT - 2 * _MARGIN) / 2
    angle_pos = 360.0 * split.total_pos / total

    parts = [f'  <title>{escape(title)}</title>']
    if split.total_pos == 0 or split.total_neg == 0:
        fill = _UP_FILL if split.total_neg == 0 else _DOWN_FILL
        parts.append(
            f'  <circle cx="{cx}" cy="{cy}" r="{r}" fill="{fill}" class="sector"/>'
        )
    else:
        # sectors start at 12 o'clock, positive side drawn clockwise first
        def arc(start_deg: float, sweep_deg: float, fill: str) -> str:
            a0 = math.radians(start_deg - 90)
            a1 = math.radians(start_deg + sweep_deg - 90)
            x_start = cx + r * math.cos(a0)
            y_start = cy + r * math.sin(a0)
            x_end = cx + r * math.cos(a1)
            y_end = cy + r * math.sin(a1)
            large = 1 if sweep_deg > 180 else 0
            return (
                f'  <path class="sector" d="M {cx:.3f} {cy:.3f} '
                f'L {x_start:.3f} {y_start:.3f} '
                f'A {r:.3f} {r:.3f} 0 {large} 1 {x_end:.3f} {y_end:.3f} Z" '
                f'fill="{fill}"/>'
            )

        parts.append(arc(0.0, angle_pos, _UP_FILL))
        parts.append(arc(angle_pos, 360.0 - angle_pos, _DOWN_FILL))

    parts.append(
        f'  <text x="{cx:.1f}" y="{_MARGIN - 20}" text-anchor="middle" '
        f'font-size="16">{escape(title)}</text>'
    )
    parts.append(
        f'  <text x="{_MARGIN}" y="{_HEIGHT - 20}" font-size="14">'
        f'uptrend {split.pct_pos}% / downtrend {split.pct_neg}%</text>'
    )
    return _svg_document(
        parts,
        metadata={
            "angle_pos_deg": angle_pos,
            "angle_neg_deg": 360.0 - angle_pos,
            "pct_pos": split.pct_pos,
            "pct_neg": split.pct_neg,
        },
    )
