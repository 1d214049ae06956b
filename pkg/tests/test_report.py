import io
import json
import xml.etree.ElementTree as ET

import pytest

from fxgame import PreconditionError, SimulationConfig, run_simulation
from fxgame.ingest import Batch
from fxgame.ohlc import DeviationSplit, OhlcBar, resample
from fxgame.report import (
    MAX_LINE_POINTS,
    build_comparison,
    comparison_to_dict,
    render_candlestick_svg,
    render_line_svg,
    render_pie_svg,
    write_comparison_csv,
    write_comparison_json,
)

SVG_NS = "{http://www.w3.org/2000/svg}"


def parse_svg(doc: str) -> ET.Element:
    root = ET.fromstring(doc)
    assert root.tag == f"{SVG_NS}svg"
    assert root.get("width") and root.get("height")
    return root


def metadata(root: ET.Element) -> dict:
    return json.loads(root.find(f"{SVG_NS}metadata").text)


def bar(o, h, low, c, index=1):
    return OhlcBar(index=index, open=o, high=h, low=low, close=c)


def make_batch(no, pos, neg):
    return Batch(batch_no=no, bars=(bar(o=100, h=100 + pos, low=100 - neg, c=100),))


class TestBuildComparison:
    def test_summary_ranges(self):
        table6 = [(47, 53), (56, 44), (45, 55), (56, 44), (45, 55),
                  (50, 50), (42, 58), (50, 50), (40, 60), (47, 53)]
        real = [make_batch(i + 1, p, n) for i, (p, n) in enumerate(table6)]
        synthetic = [[bar(o=100, h=163, low=63, c=100)]]
        report = build_comparison(synthetic, real)
        assert report.real_summary.min_pct_pos == 40
        assert report.real_summary.max_pct_pos == 56
        assert report.synthetic_splits[0].pct_pos == 63

    def test_all_uptrend_synthetic(self):
        synthetic = [resample(list(range(1000, 1100)), 10)]
        report = build_comparison(synthetic, [make_batch(1, 50, 50)])
        assert report.synthetic_splits[0].pct_pos == 100

    def test_mean(self):
        real = [make_batch(1, 30, 70), make_batch(2, 50, 50)]
        report = build_comparison([[bar(o=100, h=110, low=90, c=100)]], real)
        assert report.real_summary.mean_pct_pos == pytest.approx(40.0)

    def test_empty_cohort_errors(self):
        with pytest.raises(PreconditionError):
            build_comparison([], [make_batch(1, 1, 1)])
        with pytest.raises(PreconditionError):
            build_comparison([[bar(o=1, h=2, low=0, c=1)]], [])

    def test_json_round_trip(self):
        report = build_comparison(
            [[bar(o=100, h=110, low=90, c=100)]],
            [make_batch(1, 30, 70), make_batch(2, 50, 50)])
        buf = io.StringIO()
        write_comparison_json(buf, report)
        data = json.loads(buf.getvalue())
        assert data == comparison_to_dict(report)
        assert data["summary"]["real"] == {"min": 30, "max": 50, "mean": 40.0}
        for entry in data["synthetic"] + data["real"]:
            assert entry["pct_pos"] + entry["pct_neg"] == 100

    def test_csv_layout(self):
        report = build_comparison(
            [[bar(o=100, h=110, low=90, c=100)]],
            [make_batch(1, 30, 70), make_batch(2, 50, 50)])
        buf = io.StringIO()
        write_comparison_csv(buf, report)
        lines = buf.getvalue().splitlines()
        assert lines[0] == "cohort,metric,1,2"
        assert lines[1] == "synthetic,pct_pos,50,"
        assert lines[3] == "real,pct_pos,30,50"


class TestLineSvg:
    def test_polyline_point_count(self):
        series = [100000 + i for i in range(500)]
        root = parse_svg(render_line_svg(series))
        polys = root.findall(f"{SVG_NS}polyline")
        assert len(polys) == 1
        assert len(polys[0].get("points").split()) == 500
        assert metadata(root)["decimation_factor"] == 1

    def test_two_points(self):
        root = parse_svg(render_line_svg([100000, 100100]))
        assert len(root.findall(f"{SVG_NS}polyline")) == 1

    def test_constant_series(self):
        doc = render_line_svg([100000] * 10)
        root = parse_svg(doc)
        poly = root.find(f"{SVG_NS}polyline")
        ys = {p.split(",")[1] for p in poly.get("points").split()}
        assert len(ys) == 1  # horizontal line

    def test_long_series_decimated(self):
        result = run_simulation(SimulationConfig(n_trades=50_000, seed=13))
        doc = render_line_svg(result.price_progression)
        root = parse_svg(doc)
        meta = metadata(root)
        assert meta["points_in"] == 50_000
        assert meta["points_plotted"] <= MAX_LINE_POINTS
        assert meta["decimation_factor"] > 1
        # extremes preserved through decimation
        points = root.find(f"{SVG_NS}polyline").get("points").split()
        assert len(points) == meta["points_plotted"]

    def test_too_short_errors(self):
        with pytest.raises(PreconditionError):
            render_line_svg([100000])


class TestCandlestickSvg:
    def test_candle_count(self):
        result = run_simulation(SimulationConfig(n_trades=5500, seed=3))
        bars = resample(result.price_progression, 100)
        root = parse_svg(render_candlestick_svg(bars))
        groups = root.findall(f"{SVG_NS}g")
        assert len(groups) == 55

    def test_fill_rule(self):
        up = bar(o=100, h=120, low=95, c=115)
        down = bar(o=115, h=120, low=95, c=100, index=2)
        root = parse_svg(render_candlestick_svg([up, down]))
        rects = root.findall(f".//{SVG_NS}rect")
        assert rects[0].get("fill") != rects[1].get("fill")

    def test_flat_bar_visible(self):
        root = parse_svg(render_candlestick_svg([bar(o=100, h=100, low=100, c=100)]))
        rect = root.find(f".//{SVG_NS}rect")
        assert float(rect.get("height")) > 0
        assert float(rect.get("width")) > 0

    def test_empty_errors(self):
        with pytest.raises(PreconditionError):
            render_candlestick_svg([])


class TestPieSvg:
    def test_table4_angles(self):
        split = DeviationSplit(total_pos=63, total_neg=37, pct_pos=63, pct_neg=37)
        root = parse_svg(render_pie_svg(split))
        meta = metadata(root)
        assert meta["angle_pos_deg"] == pytest.approx(226.8)
        assert meta["angle_neg_deg"] == pytest.approx(133.2)
        assert meta["angle_pos_deg"] + meta["angle_neg_deg"] == pytest.approx(
            360.0, abs=1e-6)
        assert len(root.findall(f".//{SVG_NS}path")) == 2

    def test_half_circles(self):
        split = DeviationSplit(total_pos=500, total_neg=500, pct_pos=50, pct_neg=50)
        root = parse_svg(render_pie_svg(split))
        meta = metadata(root)
        assert meta["angle_pos_deg"] == pytest.approx(180.0)

    def test_single_full_sector(self):
        split = DeviationSplit(total_pos=10, total_neg=0, pct_pos=100, pct_neg=0)
        root = parse_svg(render_pie_svg(split))
        assert len(root.findall(f".//{SVG_NS}circle")) == 1
        assert root.findall(f".//{SVG_NS}path") == []

    def test_labels_match_split(self):
        split = DeviationSplit(total_pos=63, total_neg=37, pct_pos=63, pct_neg=37)
        doc = render_pie_svg(split)
        assert "63%" in doc and "37%" in doc

    def test_zero_total_errors(self):
        with pytest.raises(PreconditionError):
            render_pie_svg(DeviationSplit(0, 0, 0, 100))


def test_svg_outputs_deterministic():
    split = DeviationSplit(total_pos=2, total_neg=3, pct_pos=40, pct_neg=60)
    assert render_pie_svg(split) == render_pie_svg(split)
    series = list(range(100000, 100200))
    assert render_line_svg(series) == render_line_svg(series)
