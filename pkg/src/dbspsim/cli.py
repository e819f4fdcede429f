"""Command-line sweep driver: evaluates a grid of prefetcher configurations
over a set of traces and writes the chart datasets."""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .dbsp import DbspConfig
from .harness import (
    SimConfig,
    dbsp_family,
    get_target_metrics,
    lru_family,
    pareto_front,
    s_curve,
)
from .trace import Trace, load_trace, synth_correlated_trace

RESULT_COLUMNS = [
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

DEFAULT_SC_VALUES = [1, 2, 3, 5, 7, 9]
BASELINE_ID = "lru"


class CliError(Exception):
    pass


@dataclass(frozen=True)
class SweepSpec:
    trace_paths: tuple[str, ...]
    synthetic: tuple[tuple[int, int, int, int], ...]
    s_c_values: tuple[int, ...]
    l_min: int
    l_max: int
    l_a: int
    distances: tuple[str, ...]
    pref_rel_sizes: tuple[float, ...]
    cache_pct: float
    block_size: int
    seed: int
    output_dir: str
    jobs: int


@dataclass(frozen=True)
class ConfigRow:
    """One sweep configuration plus the scalars a worker needs to run it."""

    config_id: str
    distance: str  # "lru", "f1" or "f2"
    s_c: int
    l_a: int
    l_min: int
    l_max: int
    pref_rel_size: float
    cache_pct: float
    block_size: int


def _fmt(value: float) -> str:
    return f"{value:.6g}"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dbspsim",
        description=(
            "Sweep sporadic-prefetcher configurations over I/O traces and emit "
            "results.csv, summary.json, Pareto fronts and s-curve datasets. "
            "results.csv columns: " + ",".join(RESULT_COLUMNS)
        ),
    )
    parser.add_argument("--traces", nargs="*", default=[], help="MSR CSV trace files")
    parser.add_argument("--trace-dir", help="directory whose *.csv files are all loaded")
    parser.add_argument("--block-size", type=int, default=4096, help="cache block size in bytes")
    parser.add_argument(
        "--cache-pct", type=float, default=0.01,
        help="share of storage size given to fast memory (default 0.01)",
    )
    parser.add_argument(
        "--pref-rel-size", default="0.1",
        help="comma list of prefetcher shares of fast memory (default 0.1)",
    )
    parser.add_argument(
        "--sc", default=",".join(str(v) for v in DEFAULT_SC_VALUES),
        help="comma list of container sizes to sweep (default 1,2,3,5,7,9)",
    )
    parser.add_argument("--lmin", type=int, default=2, help="history length for mining eligibility (>= 2)")
    parser.add_argument("--lmax", type=int, default=8, help="max history length kept (default 8)")
    parser.add_argument("--lookahead", type=int, default=4, help="mining window l_a (default 4)")
    parser.add_argument(
        "--distance", choices=["f1", "f2", "both"], default="both",
        help="distance family: plain Manhattan (f1), length-normalized (f2), or both",
    )
    parser.add_argument("--seed", type=int, default=0, help="seed for synthetic traces")
    parser.add_argument("--out", default="out", help="output directory")
    parser.add_argument("--jobs", type=int, default=1, help="parallel (trace, config) jobs")
    parser.add_argument(
        "--synthetic", action="append", default=[], metavar="PAIRS,REPEATS,GAP,NOISE",
        help="generate a synthetic correlated trace (repeatable)",
    )
    return parser


def validate_config(args: argparse.Namespace) -> SweepSpec:
    """Apply defaults and reject contradictory flag combinations."""
    if args.lmin < 2:
        raise CliError("--lmin must be at least 2: a request must repeat at least twice before it can be mined")
    if args.lmax <= args.lmin:
        raise CliError(f"--lmax must exceed --lmin ({args.lmax} <= {args.lmin})")
    if args.lookahead < 1:
        raise CliError("--lookahead must be positive")
    if not 0 < args.cache_pct <= 1:
        raise CliError("--cache-pct must be in (0, 1]")

    try:
        s_c_values = tuple(int(v) for v in str(args.sc).split(",") if v != "")
    except ValueError as exc:
        raise CliError(f"--sc: {exc}") from exc
    if not s_c_values or min(s_c_values) < 1:
        raise CliError("--sc needs at least one positive value")

    try:
        prs_values = tuple(float(v) for v in str(args.pref_rel_size).split(",") if v != "")
    except ValueError as exc:
        raise CliError(f"--pref-rel-size: {exc}") from exc
    if not prs_values:
        raise CliError("--pref-rel-size needs at least one value")
    for prs in prs_values:
        if not 0 <= prs < 1:
            raise CliError(f"--pref-rel-size {prs:g} must be in [0, 1)")
        if prs > 0.10:
            print(
                f"warning: --pref-rel-size {prs:g} exceeds the 10% prefetcher-share guidance",
                file=sys.stderr,
            )

    synthetic = []
    for spec in args.synthetic:
        parts = str(spec).split(",")
        if len(parts) != 4:
            raise CliError(f"--synthetic {spec!r}: expected PAIRS,REPEATS,GAP,NOISE")
        try:
            synthetic.append(tuple(int(p) for p in parts))
        except ValueError as exc:
            raise CliError(f"--synthetic {spec!r}: {exc}") from exc

    trace_paths = list(args.traces)
    if args.trace_dir:
        if not os.path.isdir(args.trace_dir):
            raise CliError(f"--trace-dir {args.trace_dir!r} is not a directory")
        trace_paths.extend(
            os.path.join(args.trace_dir, f)
            for f in sorted(os.listdir(args.trace_dir))
            if f.endswith(".csv")
        )
    if not trace_paths and not synthetic:
        raise CliError("no traces: give --traces, --trace-dir or --synthetic")

    distances = ("f1", "f2") if args.distance == "both" else (args.distance,)
    if args.jobs < 1:
        raise CliError("--jobs must be positive")

    return SweepSpec(
        trace_paths=tuple(trace_paths),
        synthetic=tuple(synthetic),
        s_c_values=s_c_values,
        l_min=args.lmin,
        l_max=args.lmax,
        l_a=args.lookahead,
        distances=distances,
        pref_rel_sizes=prs_values,
        cache_pct=args.cache_pct,
        block_size=args.block_size,
        seed=args.seed,
        output_dir=args.out,
        jobs=args.jobs,
    )


def _config_rows(spec: SweepSpec) -> list[ConfigRow]:
    rows = [
        ConfigRow(
            config_id=BASELINE_ID,
            distance="lru",
            s_c=0,
            l_a=0,
            l_min=0,
            l_max=0,
            pref_rel_size=0.0,
            cache_pct=spec.cache_pct,
            block_size=spec.block_size,
        )
    ]
    for dist in spec.distances:
        for s_c in spec.s_c_values:
            for prs in spec.pref_rel_sizes:
                rows.append(
                    ConfigRow(
                        config_id=f"dbsp_{dist}_sc{s_c}_prs{prs:g}",
                        distance=dist,
                        s_c=s_c,
                        l_a=spec.l_a,
                        l_min=spec.l_min,
                        l_max=spec.l_max,
                        pref_rel_size=prs,
                        cache_pct=spec.cache_pct,
                        block_size=spec.block_size,
                    )
                )
    return rows


def _sim_config(row: ConfigRow) -> tuple[SimConfig, object]:
    if row.distance == "lru":
        return (
            SimConfig(
                cache_pct=row.cache_pct,
                pref_rel_size=0.0,
                block_size=row.block_size,
            ),
            lru_family,
        )
    template = DbspConfig(
        nr_r=1,
        nr_c=1,
        nr_p=1,
        l_a=row.l_a,
        s_c=row.s_c,
        l_min=row.l_min,
        l_max=row.l_max,
        normalised=(row.distance == "f2"),
    )
    cfg = SimConfig(
        cache_pct=row.cache_pct,
        pref_rel_size=row.pref_rel_size,
        block_size=row.block_size,
        dbsp=template,
    )
    return cfg, dbsp_family


def _eval_job(job: tuple[Trace, ConfigRow]):
    trace, row = job
    cfg, factory = _sim_config(row)
    result = get_target_metrics(factory, trace, cfg)
    return trace.name, row.config_id, result


def _load_traces(spec: SweepSpec) -> list[Trace]:
    traces = []
    for path in spec.trace_paths:
        try:
            traces.append(load_trace(path, spec.block_size))
        except Exception as exc:
            raise CliError(f"trace {path!r}: {exc}") from exc
    for idx, (pairs, repeats, gap, noise) in enumerate(spec.synthetic):
        traces.append(synth_correlated_trace(pairs, repeats, gap, noise, seed=spec.seed + idx))
    return traces


def run_sweep(spec: SweepSpec) -> dict[str, str]:
    """Evaluate the configuration grid and write the six output files."""
    traces = _load_traces(spec)
    configs = _config_rows(spec)
    jobs = [(trace, row) for trace in traces for row in configs]

    if spec.jobs > 1:
        with ProcessPoolExecutor(max_workers=spec.jobs) as pool:
            outcomes = list(pool.map(_eval_job, jobs))
    else:
        outcomes = [_eval_job(job) for job in jobs]

    by_config: dict[str, dict[str, object]] = {row.config_id: {} for row in configs}
    for trace_name, config_id, result in outcomes:
        by_config[config_id][trace_name] = result

    os.makedirs(spec.output_dir, exist_ok=True)
    paths = {
        name: os.path.join(spec.output_dir, f"{name}.csv")
        for name in ("results", "pareto_precision", "pareto_sar", "scurve_chr", "scurve_precision")
    }
    paths["summary"] = os.path.join(spec.output_dir, "summary.json")

    with open(paths["results"], "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(RESULT_COLUMNS)
        for trace in traces:
            for row in configs:
                r = by_config[row.config_id][trace.name]
                writer.writerow(
                    [
                        trace.name,
                        row.config_id,
                        row.s_c,
                        row.l_a,
                        row.l_min,
                        row.l_max,
                        row.distance,
                        _fmt(row.pref_rel_size),
                        _fmt(r.chr),
                        _fmt(r.precision),
                        _fmt(r.sar),
                        r.n_ch,
                        r.n_cm,
                        r.n_pr,
                        r.n_eu,
                        r.n_dp_blocks,
                        r.n_dc_blocks,
                    ]
                )

    averages = {}
    for row in configs:
        results = [by_config[row.config_id][t.name] for t in traces]
        n = len(results)
        averages[row.config_id] = (
            sum(r.chr for r in results) / n,
            sum(r.precision for r in results) / n,
            sum(r.sar for r in results) / n,
        )

    front_prec = pareto_front(
        [(averages[row.config_id][0], averages[row.config_id][1], row.config_id) for row in configs],
        "maximize",
    )
    front_sar = pareto_front(
        [(averages[row.config_id][0], averages[row.config_id][2], row.config_id) for row in configs],
        "minimize",
    )
    row_by_id = {row.config_id: row for row in configs}
    for name, front, metric in (
        ("pareto_precision", front_prec, "precision"),
        ("pareto_sar", front_sar, "sar"),
    ):
        with open(paths[name], "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["config_id", "distance", "s_c", "pref_rel_size", "avg_chr", f"avg_{metric}"])
            for chr_val, y_val, config_id in front:
                row = row_by_id[config_id]
                writer.writerow(
                    [config_id, row.distance, row.s_c, _fmt(row.pref_rel_size), _fmt(chr_val), _fmt(y_val)]
                )

    for name, metric in (("scurve_chr", "chr"), ("scurve_precision", "precision")):
        table = s_curve(by_config, metric, reference=BASELINE_ID)
        with open(paths[name], "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["trace"] + list(table.configs))
            for trace_name, values in table.rows:
                writer.writerow([trace_name] + [_fmt(v) for v in values])

    summary = {
        "traces": [t.name for t in traces],
        "configs": [
            {
                "config_id": row.config_id,
                "distance": row.distance,
                "s_c": row.s_c,
                "l_a": row.l_a,
                "l_min": row.l_min,
                "l_max": row.l_max,
                "pref_rel_size": row.pref_rel_size,
                "avg_chr": averages[row.config_id][0],
                "avg_precision": averages[row.config_id][1],
                "avg_sar": averages[row.config_id][2],
            }
            for row in configs
        ],
        "pareto_precision": [
            {"config_id": cid, "avg_chr": x, "avg_precision": y} for x, y, cid in front_prec
        ],
        "pareto_sar": [
            {"config_id": cid, "avg_chr": x, "avg_sar": y} for x, y, cid in front_sar
        ],
    }
    with open(paths["summary"], "w", newline="") as fh:
        json.dump(summary, fh, indent=2)
        fh.write("\n")

    return paths


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        spec = validate_config(args)
        paths = run_sweep(spec)
    except (CliError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for name in sorted(paths):
        print(f"{name}: {paths[name]}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
