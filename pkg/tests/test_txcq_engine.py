"""Zone location and the measured query strategies."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from tkcore import (
    ContractViolation,
    MeasureDescriptor,
    QuerySpec,
    TimeInterval,
    ZoneRecord,
    brute_force_txcq,
    canonical_result,
    get_measure,
    reference_core,
    run_otcd_star,
    run_tcd_star,
    run_txcq,
    zone_contains,
    zone_member_intervals,
)

from conftest import random_instance


def canon(result_or_none, mode):
    return canonical_result(result_or_none, mode)


# -- zone geometry --------------------------------------------------------


@pytest.fixture
def staircase_zone(g0):
    """Three overlapping rectangles sharing one tight corner at [4, 5]."""
    core = reference_core(g0, 2, (1, 3))
    return ZoneRecord(
        core=core,
        tti=TimeInterval(4, 5),
        ltis=(TimeInterval(3, 8), TimeInterval(2, 7), TimeInterval(1, 6)),
    )


def test_zone_rectangle_dimensions(staircase_zone):
    z = staircase_zone
    assert z.rect_width(TimeInterval(3, 8)) == 4
    assert z.rect_height(TimeInterval(3, 8)) == 2
    assert z.rect_width(TimeInterval(1, 6)) == 2
    assert z.rect_height(TimeInterval(1, 6)) == 4
    assert z.max_rect_dims == (4, 4)
    assert z.sum_rect_dims == 18


def test_zone_membership_is_the_rectangle_union(staircase_zone):
    z = staircase_zone
    assert zone_contains(z, (4, 5))  # the tight corner itself
    assert zone_contains(z, (1, 6))
    assert zone_contains(z, (2, 6))
    assert not zone_contains(z, (1, 7))  # outside every rectangle
    assert not zone_contains(z, (5, 5))  # does not contain the tight corner
    assert not zone_contains(z, (4, 4))
    members = zone_member_intervals(z)
    assert len(members) == 13
    assert members == sorted(members)
    assert all(zone_contains(z, m) for m in members)


def test_member_list_of_a_single_rectangle_zone(g0):
    zones = {z.tti: z for z in run_otcd_star(g0, 2, (1, 5))}
    assert zone_member_intervals(zones[TimeInterval(1, 3)]) == [
        TimeInterval(1, 3),
        TimeInterval(1, 4),
    ]


# -- query specs ----------------------------------------------------------


def test_spec_coerces_window_and_validates():
    spec = QuerySpec(k=2, window=(1, 5))
    assert spec.window == TimeInterval(1, 5)
    with pytest.raises(ValueError):
        QuerySpec(k=0, window=(1, 5))
    with pytest.raises(ValueError):
        QuerySpec(k=2, window=(1, 5), mode="rank")
    with pytest.raises(ValueError):
        QuerySpec(k=2, window=(1, 5), mode="optimize")  # no measure
    with pytest.raises(ValueError):
        QuerySpec(k=2, window=(1, 5), measure=get_measure("size"), mode="constrain")


# -- phase 1 --------------------------------------------------------------


def test_zone_location_on_the_worked_example(g0):
    zones = run_otcd_star(g0, 2, (1, 5))
    assert [(tuple(z.tti), [tuple(l) for l in z.ltis]) for z in zones] == [
        ((1, 3), [(1, 4)]),
        ((1, 5), [(1, 5)]),
        ((2, 5), [(2, 5)]),
    ]
    assert all(sorted(g0.label_of(v) for v in z.core.vertices) == ["a", "b", "c"] for z in zones)


def test_enumerate_query_reports_rectangle_prune_stats(g0):
    res = run_txcq(g0, QuerySpec(k=2, window=(1, 5)))
    assert [e.zone.tti for e in res.entries] == [
        TimeInterval(1, 3),
        TimeInterval(1, 5),
        TimeInterval(2, 5),
    ]
    assert res.stats.algorithm == "otcd-star"
    assert res.stats.cells_visited == 6
    assert res.stats.prune_counters["decompositions"] == 6
    assert res.stats.prune_counters["trigger_counts"] == {
        "PoR": 0, "PoU": 0, "PoL": 0, "Rule4": 1, "Empty": 3,
    }


def test_empty_window_yields_no_zones(g0):
    assert run_otcd_star(g0, 2, (8, 9)) == []
    assert run_txcq(g0, QuerySpec(k=2, window=(8, 9))).entries == ()


# -- phase 2: one evaluation per zone for insensitive measures -------------


def test_insensitive_optimize_evaluates_once_per_zone(g0):
    res = run_txcq(g0, QuerySpec(k=2, window=(1, 5), measure=get_measure("size"), mode="optimize"))
    assert res.stats.x_evaluations == 3
    # all three zones are the same triangle, so all tie at the optimum
    assert canon(res, "optimize") == (
        frozenset({TimeInterval(1, 3), TimeInterval(1, 5), TimeInterval(2, 5)}),
        3,
    )
    # winners report their full membership
    by_tti = {e.zone.tti: e for e in res.entries}
    assert by_tti[TimeInterval(1, 3)].qualifying == (TimeInterval(1, 3), TimeInterval(1, 4))


def test_insensitive_single_winner_cases(g0):
    for name, best in (("time_span", 2), ("persistence", 1)):
        res = run_txcq(g0, QuerySpec(k=2, window=(1, 5), measure=get_measure(name), mode="optimize"))
        assert canon(res, "optimize") == (frozenset({TimeInterval(1, 3)}), best)


def test_insensitive_constrain_keeps_qualifying_zones_whole(g0):
    res = run_txcq(
        g0, QuerySpec(k=2, window=(1, 5), measure=get_measure("size"), mode="constrain", sigma=3)
    )
    assert canon(res, "constrain") == frozenset(
        {TimeInterval(1, 3), TimeInterval(1, 4), TimeInterval(1, 5), TimeInterval(2, 5)}
    )


# -- phase 2: monotonic optimization ---------------------------------------


def test_shrink_improving_optimum_sits_at_the_tight_corner(g0):
    res = run_txcq(
        g0, QuerySpec(k=2, window=(1, 5), measure=get_measure("burstiness"), mode="optimize")
    )
    assert res.stats.x_evaluations == 3  # one tight corner per zone
    assert canon(res, "optimize") == (frozenset({TimeInterval(1, 3)}), Fraction(2))
    (entry,) = res.entries
    assert entry.qualifying == (TimeInterval(1, 3),)
    assert entry.x_value == Fraction(2)


def test_expand_improving_optimum_sits_at_a_loose_corner(g0):
    window_length = MeasureDescriptor(
        "window_length", "monotonic", "higher",
        lambda core, w, ctx: w.duration, improves_on="expand",
    )
    spec = QuerySpec(k=2, window=(1, 5), measure=window_length, mode="optimize")
    want = (frozenset({TimeInterval(1, 5)}), 5)
    assert canon(run_txcq(g0, spec), "optimize") == want
    assert canon(run_tcd_star(g0, spec), "optimize") == want
    assert canon(brute_force_txcq(g0, spec), "optimize") == want


def test_monotonic_optimize_agrees_for_every_builtin(g0):
    for name, want in (
        ("growth_rate", (frozenset({TimeInterval(1, 3)}), Fraction(1))),
        ("engagement", (frozenset({TimeInterval(1, 3)}), Fraction(1))),
    ):
        spec = QuerySpec(k=2, window=(1, 5), measure=get_measure(name), mode="optimize")
        assert canon(run_txcq(g0, spec), "optimize") == want


# -- phase 2: monotonic threshold walk --------------------------------------


def test_boundary_walk_counts_and_results(g0):
    spec = QuerySpec(
        k=2, window=(1, 5), measure=get_measure("burstiness"), mode="constrain", sigma=Fraction(3, 2)
    )
    res = run_txcq(g0, spec)
    assert canon(res, "constrain") == frozenset(
        {TimeInterval(1, 3), TimeInterval(1, 4), TimeInterval(2, 5)}
    )
    assert res.stats.zone_eval_counts == {
        TimeInterval(1, 3): 2,
        TimeInterval(1, 5): 1,
        TimeInterval(2, 5): 1,
    }
    assert res.stats.x_evaluations == 4
    zones = {z.tti: z for z in run_otcd_star(g0, 2, (1, 5))}
    for tti, evals in res.stats.zone_eval_counts.items():
        assert evals <= zones[tti].sum_rect_dims


def test_boundary_walk_in_the_expand_direction(g0):
    window_length = MeasureDescriptor(
        "window_length", "monotonic", "higher",
        lambda core, w, ctx: w.duration, improves_on="expand",
    )
    spec = QuerySpec(k=2, window=(1, 5), measure=window_length, mode="constrain", sigma=4)
    res = run_txcq(g0, spec)
    want = frozenset({TimeInterval(1, 4), TimeInterval(1, 5), TimeInterval(2, 5)})
    assert canon(res, "constrain") == want
    assert canon(brute_force_txcq(g0, spec), "constrain") == want
    assert res.stats.x_evaluations == 4


# -- dispatch and the exhaustive fallback ------------------------------------


def test_nonmonotonic_measures_fall_back_to_full_evaluation(g0):
    odd_window = MeasureDescriptor(
        "odd_window", "nonmonotonic", "higher", lambda core, w, ctx: w.duration % 2
    )
    spec = QuerySpec(k=2, window=(1, 5), measure=odd_window, mode="optimize")
    res = run_txcq(g0, spec)
    assert res.stats.algorithm == "tcd-star"
    assert res.stats.exhaustive
    want = (frozenset({TimeInterval(1, 3), TimeInterval(1, 5)}), 1)
    assert canon(res, "optimize") == want
    assert canon(brute_force_txcq(g0, spec), "optimize") == want


def test_exhaustive_fallback_reuses_proved_cores(g0):
    spec = QuerySpec(k=2, window=(1, 5), measure=get_measure("size"), mode="optimize")
    res = run_tcd_star(g0, spec)
    assert res.stats.x_evaluations == 4  # one per nonempty subinterval
    assert res.stats.cells_visited == 12  # walk stops at the all-empty corner
    assert res.stats.prune_counters["decompositions"] == 6
    assert canon(res, "optimize") == canon(run_txcq(g0, spec), "optimize")


def test_exhaustive_fallback_requires_a_measure(g0):
    with pytest.raises(ContractViolation):
        run_tcd_star(g0, QuerySpec(k=2, window=(1, 5)))


def test_thread_pool_does_not_change_results(g0, monkeypatch):
    spec = QuerySpec(k=2, window=(1, 5), measure=get_measure("engagement"), mode="optimize")
    base = canon(run_txcq(g0, spec), "optimize")
    monkeypatch.setenv("TXC_THREADS", "4")
    assert canon(run_txcq(g0, spec), "optimize") == base
    monkeypatch.setenv("TXC_THREADS", "not-a-number")
    assert canon(run_txcq(g0, spec), "optimize") == base


def test_canonical_enumerate_compares_full_geometry(g0):
    eng = run_txcq(g0, QuerySpec(k=2, window=(1, 5)))
    ora = brute_force_txcq(g0, QuerySpec(k=2, window=(1, 5)))
    assert canon(eng, "enumerate") == canon(ora, "enumerate")
    with pytest.raises(ValueError):
        canonical_result(eng, "benchmark")


# -- randomized equivalence -------------------------------------------------


@given(seed=st.integers(min_value=0, max_value=10_000))
@settings(max_examples=40, deadline=None)
def test_zone_records_match_the_oracle_classes(seed):
    rng = random.Random(seed)
    g = random_instance(rng, seed)
    k = rng.choice((2, 3))
    zones = run_otcd_star(g, k, (1, 14))
    eng = run_txcq(g, QuerySpec(k=k, window=(1, 14)))
    ora = brute_force_txcq(g, QuerySpec(k=k, window=(1, 14)))
    assert canon(eng, "enumerate") == canon(ora, "enumerate")
    # membership agrees with the rectangle union cell by cell
    for e in ora.entries:
        for member in zone_member_intervals(e.zone):
            assert any(zone_contains(z, member) for z in zones)


@given(seed=st.integers(min_value=0, max_value=10_000))
@settings(max_examples=25, deadline=None)
def test_measured_modes_match_the_oracle(seed):
    rng = random.Random(seed)
    g = random_instance(rng, seed, max_vertices=9, max_edges=40, max_timestamps=9)
    k = rng.choice((2, 3))
    for name, mode, sigma in (
        ("size", "optimize", None),
        ("burstiness", "optimize", None),
        ("engagement", "constrain", Fraction(1, 2)),
        ("frequency", "constrain", 1),
    ):
        spec = QuerySpec(k=k, window=(1, 9), measure=get_measure(name), mode=mode, sigma=sigma)
        want = canon(brute_force_txcq(g, spec), mode)
        assert canon(run_txcq(g, spec), mode) == want
        assert canon(run_tcd_star(g, spec), mode) == want
