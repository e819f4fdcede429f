"""Chart data preparation and rendering for dbspsim results.csv files.

All plotted numbers are read straight from the CSV: the only processing here
is grouping rows by configuration, averaging a configuration's per-trace
values for the Pareto views, and ordering traces for the s-curves. Metric
formulas are never recomputed.
"""

from __future__ import annotations

from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import csv

import matplotlib.pyplot as plt

REQUIRED_COLUMNS = [
    "trace",
    "config_id",
    "s_c",
    "l_a",
    "l_min",
    "l_max",
    "distance",
    "pref_rel_size",
    "chr",
    "precision",
    "sar",
    "n_ch",
    "n_cm",
    "n_pr",
    "n_eu",
    "n_dp_blocks",
    "n_dc_blocks",
]

KINDS = ("pareto_precision", "pareto_sar", "scurve_chr", "scurve_precision")

FAMILY_BY_DISTANCE = {"lru": "LRU", "f1": "DBSP_f1", "f2": "DBSP_f2"}
FAMILY_ORDER = ("LRU", "DBSP_f1", "DBSP_f2")
PALETTE = {"LRU": "#555555", "DBSP_f1": "#1f77b4", "DBSP_f2": "#d62728"}
MARKERS = {"LRU": "s", "DBSP_f1": "o", "DBSP_f2": "^"}

IMAGE_FORMATS = ("png", "svg")


class SchemaError(ValueError):
    """Input CSV does not match the sweep results schema."""


@dataclass(frozen=True)
class FigureSpec:
    input_csv: str
    kind: str
    output_path: str
    image_format: str

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}; expected one of {', '.join(KINDS)}")
        if self.image_format not in IMAGE_FORMATS:
            raise ValueError(f"unsupported image format {self.image_format!r}; expected png or svg")


def load_results(path: str) -> list[dict]:
    """Read a results CSV, checking the schema and parsing the metric columns."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in REQUIRED_COLUMNS if c not in header]
        if missing:
            raise SchemaError(f"{path}: missing columns: {', '.join(missing)}")
        rows = []
        for row in reader:
            rows.append(
                {
                    **row,
                    "chr": float(row["chr"]),
                    "precision": float(row["precision"]),
                    "sar": float(row["sar"]),
                }
            )
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return rows


def config_order(rows) -> list[str]:
    """Configuration ids in first-appearance order."""
    seen = []
    for row in rows:
        if row["config_id"] not in seen:
            seen.append(row["config_id"])
    return seen


def family_of(row) -> str:
    return FAMILY_BY_DISTANCE.get(row["distance"], row["distance"])


def pareto_series(rows, metric: str) -> dict[str, list[tuple[float, float, str]]]:
    """Per-family series of per-configuration averages, sorted by CHR.

    Each point is (avg chr, avg metric, config_id), averaged over the traces a
    configuration was evaluated on.
    """
    per_config: dict[str, list[tuple[float, float]]] = {}
    fam: dict[str, str] = {}
    for row in rows:
        per_config.setdefault(row["config_id"], []).append((row["chr"], row[metric]))
        fam[row["config_id"]] = family_of(row)
    series: dict[str, list[tuple[float, float, str]]] = {}
    for config_id in config_order(rows):
        points = per_config[config_id]
        x = sum(p[0] for p in points) / len(points)
        y = sum(p[1] for p in points) / len(points)
        series.setdefault(fam[config_id], []).append((x, y, config_id))
    for family in series:
        series[family].sort(key=lambda p: (p[0], p[2]))
    return series


def scurve_order(rows, metric: str, reference: str | None = None) -> list[str]:
    """Trace names sorted by the reference configuration's metric value."""
    configs = config_order(rows)
    if reference is None:
        reference = "lru" if "lru" in configs else configs[0]
    ref_values = {row["trace"]: row[metric] for row in rows if row["config_id"] == reference}
    if not ref_values:
        raise SchemaError(f"reference configuration {reference!r} has no rows")
    return sorted(ref_values, key=lambda t: (ref_values[t], t))


def scurve_series(rows, metric: str, reference: str | None = None):
    """(trace order, {config_id: values aligned with the trace order})."""
    traces = scurve_order(rows, metric, reference)
    values: dict[str, dict[str, float]] = {}
    for row in rows:
        values.setdefault(row["config_id"], {})[row["trace"]] = row[metric]
    series = {
        config_id: [per_trace.get(t) for t in traces]
        for config_id, per_trace in ((c, values[c]) for c in config_order(rows))
    }
    return traces, series


_METRIC_LABEL = {"chr": "Cache Hit Ratio", "precision": "Precision", "sar": "Storage Activity Ratio"}


def _render_pareto(rows, metric: str, ax):
    for family in FAMILY_ORDER:
        points = pareto_series(rows, metric).get(family)
        if not points:
            continue
        xs = [p[0] for p in points]
        ys = [p[1] for p in points]
        ax.plot(
            xs,
            ys,
            marker=MARKERS[family],
            color=PALETTE[family],
            label=family,
            linestyle="-" if len(points) > 1 else "none",
        )
    ax.set_xlabel("Avg. Cache Hit Ratio")
    ax.set_ylabel(f"Avg. {_METRIC_LABEL[metric]}")
    ax.legend()
    ax.grid(True, alpha=0.3)


def _render_scurve(rows, metric: str, ax):
    traces, series = scurve_series(rows, metric)
    positions = range(len(traces))
    cycle = plt.cm.tab20.colors
    for idx, (config_id, values) in enumerate(series.items()):
        ax.scatter(
            values,
            list(positions),
            label=config_id,
            color=cycle[idx % len(cycle)],
            s=24,
        )
    ax.set_yticks(list(positions))
    ax.set_yticklabels(traces)
    ax.set_xlabel(_METRIC_LABEL[metric])
    ax.legend(fontsize=7, loc="center left", bbox_to_anchor=(1.0, 0.5))
    ax.grid(True, alpha=0.3)


def render(spec: FigureSpec) -> str:
    """Render one figure kind to spec.output_path; returns the path."""
    rows = load_results(spec.input_csv)
    fig, ax = plt.subplots(figsize=(8, 5))
    try:
        if spec.kind == "pareto_precision":
            _render_pareto(rows, "precision", ax)
            ax.set_title("Pareto view: Avg. Precision vs Avg. CHR")
        elif spec.kind == "pareto_sar":
            _render_pareto(rows, "sar", ax)
            ax.set_title("Pareto view: Avg. SAR vs Avg. CHR")
        elif spec.kind == "scurve_chr":
            _render_scurve(rows, "chr", ax)
            ax.set_title("S-curve: Cache Hit Ratio per trace")
        else:
            _render_scurve(rows, "precision", ax)
            ax.set_title("S-curve: Precision per trace")
        fig.tight_layout()
        fig.savefig(spec.output_path, format=spec.image_format, dpi=120)
    finally:
        plt.close(fig)
    return spec.output_path
