"""Run counters and the derived metrics: CHR, Precision, SAR."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass
class RunMetrics:
    n_ch: int = 0  # demand hits
    n_cm: int = 0  # demand misses
    n_pr: int = 0  # prefetch requests issued
    n_eu: int = 0  # prefetch requests evicted wholly untouched
    n_dp_blocks: int = 0  # blocks downloaded in the prefetcher run
    n_dc_blocks: int = 0  # blocks downloaded in the paired cache-only run


def cache_hit_ratio(n_ch: int, n_cm: int) -> float:
    """Fraction of demand reads served from cache."""
    total = n_ch + n_cm
    if total == 0:
        raise ValueError("no accesses")
    return n_ch / total


def precision(n_pr: int, n_eu: int) -> float:
    """Fraction of prefetch requests whose data was used before eviction.

    Defined as 1.0 when nothing was prefetched, so a disabled prefetcher is
    vacuously precise.
    """
    if n_pr == 0:
        return 1.0
    return (n_pr - n_eu) / n_pr


def sar(n_dp_blocks: int, n_dc_blocks: int) -> float:
    """Backend load relative to the cache-only baseline (1.0 = no extra load)."""
    if n_dc_blocks == 0:
        raise ValueError("baseline downloaded nothing")
    return n_dp_blocks / n_dc_blocks
