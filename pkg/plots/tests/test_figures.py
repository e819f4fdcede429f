import csv
import os

import pytest

from dbsp_plots.cli import main
from dbsp_plots.figures import (
    KINDS,
    REQUIRED_COLUMNS,
    FigureSpec,
    SchemaError,
    load_results,
    pareto_series,
    render,
    scurve_order,
    scurve_series,
)

GOLDEN = os.path.join(os.path.dirname(__file__), "data", "results.csv")


def golden_rows():
    with open(GOLDEN, newline="") as fh:
        return list(csv.DictReader(fh))


def test_all_four_kinds_render_from_golden_csv(tmp_path):
    # acceptance: the golden synthetic-sweep results.csv drives every kind
    for kind in KINDS:
        out = tmp_path / f"{kind}.png"
        spec = FigureSpec(input_csv=GOLDEN, kind=kind, output_path=str(out), image_format="png")
        assert render(spec) == str(out)
        assert out.exists() and out.stat().st_size > 0


def test_svg_output(tmp_path):
    out = tmp_path / "fig.svg"
    spec = FigureSpec(input_csv=GOLDEN, kind="pareto_sar", output_path=str(out), image_format="svg")
    render(spec)
    assert out.read_bytes().lstrip().startswith(b"<?xml")


def test_scurve_row_order_matches_independent_sort():
    # acceptance: compare against a sort done directly on the raw CSV text
    rows = golden_rows()
    for metric in ("chr", "precision"):
        baseline = {r["trace"]: float(r[metric]) for r in rows if r["config_id"] == "lru"}
        expected = sorted(baseline, key=lambda t: (baseline[t], t))
        assert scurve_order(load_results(GOLDEN), metric) == expected


def test_scurve_series_aligned_with_trace_order():
    data = load_results(GOLDEN)
    traces, series = scurve_series(data, "chr")
    raw = golden_rows()
    for config_id, values in series.items():
        for trace, value in zip(traces, values):
            match = [r for r in raw if r["trace"] == trace and r["config_id"] == config_id]
            assert len(match) == 1
            assert value == float(match[0]["chr"])


def test_pareto_series_families_and_averages():
    data = load_results(GOLDEN)
    series = pareto_series(data, "precision")
    assert set(series) == {"LRU", "DBSP_f1", "DBSP_f2"}
    assert len(series["LRU"]) == 1
    raw = golden_rows()
    lru_chr = [float(r["chr"]) for r in raw if r["config_id"] == "lru"]
    assert series["LRU"][0][0] == pytest.approx(sum(lru_chr) / len(lru_chr))
    for family, points in series.items():
        xs = [p[0] for p in points]
        assert xs == sorted(xs)


def test_pareto_series_deterministic():
    data = load_results(GOLDEN)
    assert pareto_series(data, "sar") == pareto_series(data, "sar")


def test_empty_csv_is_error_and_writes_nothing(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text(",".join(REQUIRED_COLUMNS) + "\n")
    out = tmp_path / "fig.png"
    spec = FigureSpec(input_csv=str(empty), kind="pareto_precision", output_path=str(out), image_format="png")
    with pytest.raises(SchemaError, match="no data rows"):
        render(spec)
    assert not out.exists()


def test_missing_columns_listed(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("trace,config_id\nfoo,lru\n")
    with pytest.raises(SchemaError) as err:
        load_results(str(bad))
    assert "chr" in str(err.value)
    assert "sar" in str(err.value)


def test_unknown_kind_rejected(tmp_path):
    with pytest.raises(ValueError, match="unknown figure kind"):
        FigureSpec(input_csv=GOLDEN, kind="histogram", output_path="x.png", image_format="png")


def test_unknown_format_rejected():
    with pytest.raises(ValueError, match="image format"):
        FigureSpec(input_csv=GOLDEN, kind="scurve_chr", output_path="x.bmp", image_format="bmp")


def test_cli_renders_and_reports(tmp_path, capsys):
    out = tmp_path / "front.png"
    assert main(["pareto_precision", GOLDEN, str(out)]) == 0
    assert str(out) in capsys.readouterr().out
    assert out.exists()


def test_cli_error_exit_code(tmp_path, capsys):
    missing = tmp_path / "missing.csv"
    assert main(["pareto_precision", str(missing), str(tmp_path / "x.png")]) == 1
    assert "error:" in capsys.readouterr().err


def test_cli_rejects_bad_suffix(tmp_path, capsys):
    assert main(["pareto_precision", GOLDEN, str(tmp_path / "fig.bmp")]) == 1
    assert "image format" in capsys.readouterr().err


def test_input_csv_never_modified(tmp_path):
    before = open(GOLDEN, "rb").read()
    render(
        FigureSpec(
            input_csv=GOLDEN,
            kind="scurve_precision",
            output_path=str(tmp_path / "s.png"),
            image_format="png",
        )
    )
    assert open(GOLDEN, "rb").read() == before
