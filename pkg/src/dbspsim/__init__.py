"""Trace-driven storage cache simulator for distance-based sporadic prefetching."""

from .cache import AccessResult, BlockCache, BlockState
from .dbsp import (
    DEGREE_MAX,
    AssocContainer,
    AssocEntry,
    DbspConfig,
    DbspPrefetcher,
    HistoryTable,
    PrefetchTable,
    RequestHistory,
    compute_associated_requests,
    get_association_degree,
    insert_in_container,
)
from .harness import (
    Budget,
    EvalResult,
    SCurveTable,
    SimConfig,
    TraceResult,
    budget,
    dbsp_family,
    evaluate_prefetcher,
    get_target_metrics,
    lru_family,
    pareto_front,
    s_curve,
)
from .metrics import RunMetrics, cache_hit_ratio, precision, sar
from .trace import (
    ReadRequest,
    Trace,
    TraceError,
    TraceRecord,
    load_trace,
    parse_msr_line,
    storage_size,
    synth_correlated_trace,
    write_msr_csv,
)

__all__ = [
    "AccessResult",
    "AssocContainer",
    "AssocEntry",
    "BlockCache",
    "BlockState",
    "Budget",
    "DEGREE_MAX",
    "DbspConfig",
    "DbspPrefetcher",
    "EvalResult",
    "HistoryTable",
    "PrefetchTable",
    "ReadRequest",
    "RequestHistory",
    "RunMetrics",
    "SCurveTable",
    "SimConfig",
    "Trace",
    "TraceError",
    "TraceRecord",
    "TraceResult",
    "budget",
    "cache_hit_ratio",
    "compute_associated_requests",
    "dbsp_family",
    "evaluate_prefetcher",
    "get_association_degree",
    "get_target_metrics",
    "insert_in_container",
    "load_trace",
    "lru_family",
    "pareto_front",
    "parse_msr_line",
    "precision",
    "s_curve",
    "sar",
    "storage_size",
    "synth_correlated_trace",
    "write_msr_csv",
]
