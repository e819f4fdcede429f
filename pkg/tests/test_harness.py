import math
import random

import pytest

from dbspsim.cache import BlockCache
from dbspsim.dbsp import DbspConfig
from dbspsim.harness import (
    SimConfig,
    budget,
    dbsp_family,
    evaluate_prefetcher,
    get_target_metrics,
    lru_family,
    pareto_front,
    s_curve,
)
from dbspsim.trace import ReadRequest, Trace, synth_correlated_trace


def template(**overrides):
    base = dict(nr_r=1, nr_c=1, nr_p=1, l_a=4, s_c=3, l_min=2, l_max=8)
    base.update(overrides)
    return DbspConfig(**base)


def single_read_trace():
    return Trace(name="one", reads=(ReadRequest(key=0, size_blocks=1, ts=0),), storage_blocks=1)


# --- budget ------------------------------------------------------------------


def test_budget_disabled_prefetcher_gets_nothing():
    cfg = SimConfig(cache_pct=0.01, pref_rel_size=0.0)
    b = budget(storage_blocks=25600, cfg=cfg)
    assert b.prefetcher_bytes == 0
    assert b.cache_capacity_blocks == b.mem_bytes // 4096
    assert (b.nr_r, b.nr_c, b.nr_p) == (1, 1, 1)


def test_budget_one_mebibyte_example():
    # storage of 25600 blocks at 4 KiB and 1% cache share puts M at exactly 1 MiB
    cfg = SimConfig(cache_pct=0.01, pref_rel_size=0.1, dbsp=template())
    b = budget(storage_blocks=25600, cfg=cfg)
    assert b.mem_bytes == 1_048_576
    assert b.prefetcher_bytes == round(104857.6)
    assert b.nr_r == 1456  # floor((P/3) / (8*(1+l_min)))
    assert b.nr_c == math.floor((b.prefetcher_bytes / 3) / (8 * (1 + 8)))
    assert b.nr_p == math.floor((b.prefetcher_bytes / 3) / (8 * (1 + 2 * 3)))


def test_budget_full_cache_degenerate():
    cfg = SimConfig(cache_pct=1.0, pref_rel_size=0.0)
    b = budget(storage_blocks=512, cfg=cfg)
    assert b.cache_capacity_blocks == 512


def test_budget_below_one_block_is_error():
    cfg = SimConfig(cache_pct=0.01, pref_rel_size=0.1)
    with pytest.raises(ValueError):
        budget(storage_blocks=10, cfg=cfg)


def test_sim_config_validation():
    with pytest.raises(ValueError):
        SimConfig(cache_pct=0.0)
    with pytest.raises(ValueError):
        SimConfig(pref_rel_size=1.0)
    with pytest.raises(ValueError):
        SimConfig(table_split=(0.5, 0.5, 0.5))
    with pytest.raises(ValueError):
        SimConfig(policy="never")


# --- paired replays -----------------------------------------------------------


def test_null_prefetcher_matches_plain_lru_at_reduced_capacity():
    trace = synth_correlated_trace(4, 4, 1, 100, seed=3)
    cfg = SimConfig(cache_pct=0.001, pref_rel_size=0.1)
    result = get_target_metrics(lru_family, trace, cfg)
    b = budget(trace.storage_blocks, cfg)
    replay = BlockCache(b.cache_capacity_blocks)
    for r in trace.reads:
        replay.access(r)
    assert result.n_ch == replay.n_ch
    assert result.n_dp_blocks == replay.n_dp_blocks
    assert result.precision == 1.0
    assert result.sar >= 1.0  # smaller treatment cache can only add downloads


def test_null_prefetcher_with_zero_share_has_unit_sar():
    trace = synth_correlated_trace(4, 4, 1, 100, seed=3)
    cfg = SimConfig(cache_pct=0.001, pref_rel_size=0.0)
    result = get_target_metrics(lru_family, trace, cfg)
    assert result.sar == 1.0
    assert result.n_dp_blocks == result.n_dc_blocks


def test_single_request_trace():
    cfg = SimConfig(cache_pct=1.0, pref_rel_size=0.0)
    result = get_target_metrics(lru_family, single_read_trace(), cfg)
    assert result.chr == 0.0
    assert result.precision == 1.0
    assert result.sar == 1.0


def synth_cfg(noise: bool):
    # capacities sized so pair keys evict between repeat rounds (otherwise the
    # plain LRU already holds them and prefetching cannot add hits) while the
    # small compute-table share makes mining fire early
    if noise:
        return SimConfig(
            cache_pct=1.1e-5,
            pref_rel_size=0.1,
            table_split=(0.55, 0.05, 0.40),
            dbsp=template(),
        )
    return SimConfig(
        cache_pct=0.36,
        pref_rel_size=0.1,
        table_split=(0.50, 0.05, 0.45),
        dbsp=template(),
    )


def test_synthetic_pattern_lifts_chr_over_baseline():
    trace = synth_correlated_trace(8, 4, 1, 80, seed=21)
    cfg = synth_cfg(noise=True)
    treated = get_target_metrics(dbsp_family, trace, cfg)
    base = get_target_metrics(lru_family, trace, cfg)
    assert treated.n_pr > 0
    assert treated.chr > base.chr


def test_noise_free_synthetic_has_perfect_precision():
    trace = synth_correlated_trace(8, 5, 1, 0, seed=4)
    result = get_target_metrics(dbsp_family, trace, synth_cfg(noise=False))
    assert result.n_pr > 0
    assert result.precision == 1.0


def test_paired_run_determinism():
    trace = synth_correlated_trace(6, 4, 1, 60, seed=9)
    cfg = synth_cfg(noise=True)
    first = get_target_metrics(dbsp_family, trace, cfg)
    second = get_target_metrics(dbsp_family, trace, cfg)
    assert first == second


def test_evaluate_prefetcher_singleton_mean():
    trace = synth_correlated_trace(4, 3, 1, 30, seed=2)
    cfg = SimConfig(cache_pct=0.01, pref_rel_size=0.1, dbsp=template())
    result = evaluate_prefetcher(dbsp_family, [trace], cfg)
    assert result.avg_chr == result.per_trace[0].chr
    assert result.avg_sar == result.per_trace[0].sar


def test_evaluate_prefetcher_averages():
    t1 = synth_correlated_trace(4, 3, 1, 30, seed=2)
    t2 = synth_correlated_trace(4, 3, 1, 30, seed=5)
    cfg = SimConfig(cache_pct=0.01, pref_rel_size=0.1, dbsp=template())
    result = evaluate_prefetcher(lru_family, [t1, t2], cfg)
    assert result.avg_chr == pytest.approx(
        (result.per_trace[0].chr + result.per_trace[1].chr) / 2
    )


def test_evaluate_prefetcher_empty_is_error():
    cfg = SimConfig()
    with pytest.raises(ValueError):
        evaluate_prefetcher(lru_family, [], cfg)


def test_evaluate_prefetcher_names_failing_trace():
    bad = Trace(name="tiny", reads=(ReadRequest(key=0, size_blocks=1, ts=0),), storage_blocks=1)
    cfg = SimConfig(cache_pct=0.01, pref_rel_size=0.0)  # budget below one block
    with pytest.raises(RuntimeError, match="tiny"):
        evaluate_prefetcher(lru_family, [bad], cfg)


# --- pareto front ---------------------------------------------------------------


def dominance_oracle(points, y_direction):
    sign = 1.0 if y_direction == "maximize" else -1.0
    unique = []
    seen = set()
    for p in points:
        if (p[0], p[1]) not in seen:
            seen.add((p[0], p[1]))
            unique.append(p)
    front = []
    for p in unique:
        dominated = False
        for q in unique:
            if q is p:
                continue
            if (
                q[0] >= p[0]
                and sign * q[1] >= sign * p[1]
                and (q[0] > p[0] or sign * q[1] > sign * p[1])
            ):
                dominated = True
                break
        if not dominated:
            front.append(p)
    return sorted(front, key=lambda p: p[0])


def test_pareto_example():
    points = [(0.1, 0.9), (0.2, 0.8), (0.15, 0.95)]
    assert pareto_front(points, "maximize") == [(0.15, 0.95), (0.2, 0.8)]


def test_pareto_single_point():
    assert pareto_front([(0.3, 0.4)], "maximize") == [(0.3, 0.4)]


def test_pareto_duplicates_kept_once():
    assert pareto_front([(0.3, 0.4), (0.3, 0.4)], "maximize") == [(0.3, 0.4)]


def test_pareto_minimize_direction():
    points = [(0.1, 1.0), (0.2, 1.5), (0.15, 0.9)]
    assert pareto_front(points, "minimize") == [(0.15, 0.9), (0.2, 1.5)]


def test_pareto_matches_oracle_randomized():
    rng = random.Random(31)
    for trial in range(40):
        n = rng.randrange(1, 120)
        points = [
            (rng.randrange(0, 12) / 12, rng.randrange(0, 12) / 12, trial * 1000 + i)
            for i in range(n)
        ]
        for direction in ("maximize", "minimize"):
            got = pareto_front(points, direction)
            want = dominance_oracle(points, direction)
            assert [(p[0], p[1]) for p in got] == [(p[0], p[1]) for p in want]


def test_pareto_rejects_bad_direction():
    with pytest.raises(ValueError):
        pareto_front([(0, 0)], "sideways")


# --- s-curve ---------------------------------------------------------------------


class FakeResult:
    def __init__(self, chr_value, precision_value=1.0):
        self.chr = chr_value
        self.precision = precision_value


def test_s_curve_single_cell():
    table = s_curve({"cfg": {"t1": FakeResult(0.5)}}, "chr")
    assert table.configs == ("cfg",)
    assert table.rows == (("t1", (0.5,)),)


def test_s_curve_sorts_by_reference_metric():
    results = {
        "ref": {"a": FakeResult(0.3), "b": FakeResult(0.1), "c": FakeResult(0.2)},
        "other": {"a": FakeResult(0.9), "b": FakeResult(0.8), "c": FakeResult(0.7)},
    }
    table = s_curve(results, "chr", reference="ref")
    assert [row[0] for row in table.rows] == ["b", "c", "a"]
    assert table.rows[0][1] == (0.1, 0.8)


def test_s_curve_column_count_matches_configs():
    results = {
        f"cfg{i}": {"t": FakeResult(0.1 * i)} for i in range(5)
    }
    table = s_curve(results, "chr")
    assert len(table.configs) == 5
    assert all(len(values) == 5 for _, values in table.rows)
