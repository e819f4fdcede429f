"""Evaluation harness: memory budgeting, paired replays, and chart datasets.

A configuration is evaluated by replaying the same read sequence twice: once
through a plain LRU cache owning the whole fast-memory budget (the baseline,
which defines the download denominator of SAR) and once through a smaller
cache paired with the prefetcher under the Always policy. CHR and Precision
come from the treatment run; SAR is the ratio of blocks downloaded across the
pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .cache import BlockCache
from .dbsp import DbspConfig, DbspPrefetcher
from .metrics import cache_hit_ratio, precision, sar
from .trace import Trace

# Per-row byte costs for sizing the three tables: a key plus l_min (record) or
# l_max (compute) stamps, or a key plus s_c (key, degree) pairs, at 8 bytes a
# word.
_WORD = 8


def _default_dbsp_template() -> DbspConfig:
    return DbspConfig(nr_r=1, nr_c=1, nr_p=1, l_a=4, s_c=3)


@dataclass(frozen=True)
class SimConfig:
    cache_pct: float = 0.01
    pref_rel_size: float = 0.10
    block_size: int = 4096
    table_split: tuple[float, float, float] = (1 / 3, 1 / 3, 1 / 3)
    dbsp: DbspConfig = field(default_factory=_default_dbsp_template)
    policy: str = "always"

    def __post_init__(self):
        if not 0 < self.cache_pct <= 1:
            raise ValueError("cache_pct must be in (0, 1]")
        if not 0 <= self.pref_rel_size < 1:
            raise ValueError("pref_rel_size must be in [0, 1)")
        if self.block_size < 1 or self.block_size & (self.block_size - 1):
            raise ValueError("block_size must be a power of two")
        if len(self.table_split) != 3 or min(self.table_split) <= 0:
            raise ValueError("table_split needs three positive fractions")
        if abs(sum(self.table_split) - 1.0) > 1e-9:
            raise ValueError("table_split fractions must sum to 1")
        if self.policy != "always":
            raise ValueError(f"unsupported prefetch policy {self.policy!r}")


@dataclass(frozen=True)
class Budget:
    mem_bytes: int  # total fast memory M
    prefetcher_bytes: int  # share handed to the prefetcher tables
    cache_capacity_blocks: int
    nr_r: int
    nr_c: int
    nr_p: int


def budget(storage_blocks: int, cfg: SimConfig) -> Budget:
    """Split the fast-memory budget between the cache and the tables.

    M = round(cache_pct * storage bytes); the prefetcher gets
    round(pref_rel_size * M) and the cache the rest. Table row counts come
    from per-row byte costs and the configured split, clamped to >= 1 row.
    """
    if storage_blocks < 1:
        raise ValueError("storage_blocks must be positive")
    mem = round(cfg.cache_pct * storage_blocks * cfg.block_size)
    pref = round(cfg.pref_rel_size * mem)
    capacity = (mem - pref) // cfg.block_size
    if capacity < 1:
        raise ValueError(
            f"cache budget below one block ({mem - pref} bytes at block size {cfg.block_size})"
        )
    row_cost_r = _WORD * (1 + cfg.dbsp.l_min)
    row_cost_c = _WORD * (1 + cfg.dbsp.l_max)
    row_cost_p = _WORD * (1 + 2 * cfg.dbsp.s_c)
    share_r, share_c, share_p = cfg.table_split
    return Budget(
        mem_bytes=mem,
        prefetcher_bytes=pref,
        cache_capacity_blocks=capacity,
        nr_r=max(1, math.floor(share_r * pref / row_cost_r)),
        nr_c=max(1, math.floor(share_c * pref / row_cost_c)),
        nr_p=max(1, math.floor(share_p * pref / row_cost_p)),
    )


@dataclass(frozen=True)
class TraceResult:
    name: str
    chr: float
    precision: float
    sar: float
    n_ch: int
    n_cm: int
    n_pr: int
    n_eu: int
    n_dp_blocks: int
    n_dc_blocks: int


@dataclass(frozen=True)
class EvalResult:
    per_trace: tuple[TraceResult, ...]
    avg_chr: float
    avg_precision: float
    avg_sar: float


def lru_family(b: Budget, cfg: SimConfig):
    """No prefetcher: the treatment run is a plain LRU cache."""
    return None


def dbsp_family(b: Budget, cfg: SimConfig) -> DbspPrefetcher:
    """Build a prefetcher from the config template and the budgeted table sizes."""
    conf = replace(
        cfg.dbsp,
        nr_r=b.nr_r,
        nr_c=b.nr_c,
        nr_p=b.nr_p,
        l_a=min(cfg.dbsp.l_a, b.nr_c),
    )
    return DbspPrefetcher(conf)


def get_target_metrics(prefetcher_factory, trace: Trace, cfg: SimConfig) -> TraceResult:
    """Run the paired baseline/treatment replays for one trace."""
    if not trace.reads:
        raise ValueError(f"trace {trace.name!r} is empty")
    b = budget(trace.storage_blocks, cfg)

    baseline_capacity = b.mem_bytes // cfg.block_size
    baseline = BlockCache(baseline_capacity)
    for r in trace.reads:
        baseline.access(r)
    n_dc = baseline.n_dp_blocks

    cache = BlockCache(b.cache_capacity_blocks)
    prefetcher = prefetcher_factory(b, cfg)
    last_size: dict[int, int] = {}
    prefetch_id = 0
    for r in trace.reads:
        if prefetcher is not None:
            assoc = prefetcher.on_request(r.key, r.ts)
            if assoc:
                # Always policy: admit every association, skipping only the
                # triggering key itself and spans the cache cannot hold.
                for entry in assoc:
                    if entry.assoc_key == r.key:
                        continue
                    size = last_size.get(entry.assoc_key, 1)
                    if size > cache.capacity_blocks:
                        continue
                    cache.admit_prefetch(entry.assoc_key, size, prefetch_id)
                    prefetch_id += 1
        cache.access(r)
        last_size[r.key] = r.size_blocks

    return TraceResult(
        name=trace.name,
        chr=cache_hit_ratio(cache.n_ch, cache.n_cm),
        precision=precision(cache.n_pr, cache.n_eu),
        sar=sar(cache.n_dp_blocks, n_dc),
        n_ch=cache.n_ch,
        n_cm=cache.n_cm,
        n_pr=cache.n_pr,
        n_eu=cache.n_eu,
        n_dp_blocks=cache.n_dp_blocks,
        n_dc_blocks=n_dc,
    )


def evaluate_prefetcher(prefetcher_factory, traces, cfg: SimConfig) -> EvalResult:
    """Map get_target_metrics over traces and average the metric vectors."""
    traces = list(traces)
    if not traces:
        raise ValueError("need at least one trace")
    results = []
    for trace in traces:
        try:
            results.append(get_target_metrics(prefetcher_factory, trace, cfg))
        except Exception as exc:
            raise RuntimeError(f"evaluation failed on trace {trace.name!r}: {exc}") from exc
    n = len(results)
    return EvalResult(
        per_trace=tuple(results),
        avg_chr=sum(r.chr for r in results) / n,
        avg_precision=sum(r.precision for r in results) / n,
        avg_sar=sum(r.sar for r in results) / n,
    )


def pareto_front(points, y_direction: str = "maximize"):
    """Non-dominated subset of (chr, metric, ...) points, sorted by CHR ascending.

    The first element is maximized; the second is maximized or minimized per
    y_direction. Exact duplicates are kept once (first occurrence). Extra
    tuple elements are carried through untouched.
    """
    if y_direction not in ("maximize", "minimize"):
        raise ValueError(f"y_direction must be maximize or minimize, got {y_direction!r}")
    sign = 1.0 if y_direction == "maximize" else -1.0
    unique = []
    seen = set()
    for p in points:
        xy = (p[0], p[1])
        if xy not in seen:
            seen.add(xy)
            unique.append(p)
    unique.sort(key=lambda p: (-p[0], -sign * p[1]))
    front = []
    best = -math.inf
    for p in unique:
        y = sign * p[1]
        if y > best:
            front.append(p)
            best = y
    front.reverse()
    return front


@dataclass(frozen=True)
class SCurveTable:
    metric: str
    configs: tuple[str, ...]
    rows: tuple[tuple[str, tuple[float, ...]], ...]  # (trace, value per config)


def s_curve(results, metric: str, reference: str | None = None) -> SCurveTable:
    """Per-trace metric table sorted by the reference configuration's value.

    results maps config id -> {trace name -> TraceResult}; columns follow the
    mapping's order and the reference defaults to the first configuration.
    """
    configs = tuple(results)
    if not configs:
        return SCurveTable(metric=metric, configs=(), rows=())
    if reference is None:
        reference = configs[0]
    ref = results[reference]
    order = sorted(ref, key=lambda t: (getattr(ref[t], metric), t))
    rows = tuple(
        (t, tuple(getattr(results[c][t], metric) for c in configs)) for t in order
    )
    return SCurveTable(metric=metric, configs=configs, rows=rows)
