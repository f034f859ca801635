"""Fixed points, the 2-cycle closed form, the scan engine, block structure."""

import warnings

import pytest

from pwdyn import (
    CycleRecord,
    DegenerateParameterError,
    MapParams,
    PreconditionError,
    ResolutionWarning,
    Stability,
    block_partition,
    classify_cycle,
    eval_f,
    find_cycles,
    fixed_points,
    four_block_regime,
    iterate_n,
    odd_period_scan,
    transition_check,
    two_cycle_a_window,
    two_cycle_b_window,
    two_cycle_closed_form,
    two_cycle_exists,
    two_cycle_ratio_test,
    two_cycle_region_oracle,
    two_cycle_survey,
)


def test_fixed_points_generic():
    fp = fixed_points(MapParams(0.3, 0.7))
    assert fp.points == (0.0, 1.0)
    assert fp.intervals == ()


def test_fixed_points_degenerate_regimes():
    fp = fixed_points(MapParams(0.0, 0.7))
    assert fp.points == (1.0,)
    assert len(fp.intervals) == 1
    iv = fp.intervals[0]
    assert (iv.lo, iv.hi) == (0.0, 0.5) and not iv.lo_open and not iv.hi_open

    fp = fixed_points(MapParams(0.7, 0.0))
    assert fp.points == (0.0,)
    iv = fp.intervals[0]
    assert (iv.lo, iv.hi) == (0.5, 1.0) and iv.lo_open and not iv.hi_open

    fp = fixed_points(MapParams(0.0, 0.0))
    assert fp.points == ()
    iv = fp.intervals[0]
    assert (iv.lo, iv.hi) == (0.0, 1.0)


def test_two_cycle_window_predicates():
    # both windows hold at (0.8, 0.8); the ratio variant disagrees elsewhere
    assert two_cycle_b_window(0.8, 0.8) and two_cycle_a_window(0.8, 0.8)
    assert two_cycle_exists(0.8, 0.8)
    assert two_cycle_exists(1.0, 0.9) and not two_cycle_ratio_test(1.0, 0.9)
    assert not two_cycle_exists(0.3, 0.2) and two_cycle_ratio_test(0.3, 0.2)


def test_two_cycle_closed_form_values():
    c = two_cycle_closed_form(MapParams(0.8, 0.8))
    assert c is not None and c.prime_period == 2
    assert abs(c.points[0] - 0.40370879821637384) <= 1e-15
    assert abs(c.points[1] - 0.5962912017836262) <= 1e-15
    assert abs(c.multiplier - 1.3318681542923976) <= 1e-15
    assert c.classification is Stability.REPELLING
    # the pair actually swaps under the map
    assert abs(eval_f(MapParams(0.8, 0.8), c.points[0]) - c.points[1]) <= 1e-15
    assert abs(iterate_n(MapParams(0.8, 0.8), c.points[0], 2) - c.points[0]) <= 1e-10


def test_two_cycle_closed_form_absent():
    assert two_cycle_closed_form(MapParams(0.3, 0.2)) is None
    assert two_cycle_closed_form(MapParams(0.0, 0.5)) is None


def test_classify_cycle_switch_point():
    p = MapParams(0.4, 0.4)
    c = classify_cycle(p, CycleRecord(points=(0.5, 0.6), prime_period=2, multiplier=None, classification=None))
    assert c.classification is Stability.UNDEFINED_DERIVATIVE
    assert c.multiplier is None


def test_find_cycles_three_cycle():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ResolutionWarning)
        recs = find_cycles(MapParams(0.5, 1.0), 3)
    p3 = [c for c in recs if c.prime_period == 3]
    assert len(p3) == 1
    got = p3[0]
    expect = (0.3603211937440487, 0.4755661092855049, 0.600267601777781)
    assert all(abs(g - e) <= 1e-9 for g, e in zip(got.points, expect))
    assert abs(got.multiplier - 1.401655576238098) <= 1e-9
    assert got.classification is Stability.REPELLING


def test_find_cycles_includes_endpoint_fixed_points():
    recs = find_cycles(MapParams(0.5, 0.5), 2)
    ones = [c for c in recs if c.prime_period == 1]
    assert sorted(c.points[0] for c in ones) == [0.0, 1.0]
    assert all(abs(c.multiplier - 1.5) <= 1e-12 for c in ones)
    twos = [c for c in recs if c.prime_period == 2]
    assert len(twos) == 1
    assert abs(twos[0].points[0] - 0.43844718719116965) <= 1e-9
    assert abs(twos[0].multiplier - 1.1268943743823394) <= 1e-9


def test_find_cycles_agrees_with_closed_form():
    for a, b in [(0.7, 0.7), (0.9, 0.85), (1.0, 1.0)]:
        p = MapParams(a, b)
        closed = two_cycle_closed_form(p)
        assert closed is not None
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ResolutionWarning)
            scanned = [c for c in find_cycles(p, 2) if c.prime_period == 2]
        assert len(scanned) == 1
        assert all(abs(g - e) <= 1e-9 for g, e in zip(scanned[0].points, closed.points))


def test_find_cycles_prime_periods_and_distinct_points():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ResolutionWarning)
        recs = find_cycles(MapParams(0.8, 0.8), 4)
    for c in recs:
        assert len(set(c.points)) == c.prime_period
        for d in range(1, c.prime_period):
            if c.prime_period % d == 0:
                assert abs(iterate_n(MapParams(0.8, 0.8), c.points[0], d) - c.points[0]) > 1e-6


def test_find_cycles_preconditions():
    p = MapParams(0.5, 0.5)
    with pytest.raises(PreconditionError):
        find_cycles(p, 13)
    with pytest.raises(PreconditionError):
        find_cycles(p, 2, grid=5_000)
    with pytest.raises(DegenerateParameterError):
        find_cycles(MapParams(0.0, 0.5), 2)


def test_close_roots_warn_then_resolve():
    # at (0.25, 0.25) two phases of one 4-cycle straddle the switch by ~1e-3,
    # under the coarse grid's resolution threshold
    p = MapParams(0.25, 0.25)
    with pytest.warns(ResolutionWarning):
        recs = find_cycles(p, 4, grid=10_000)
    p4 = [c for c in recs if c.prime_period == 4]
    assert len(p4) == 1
    assert min(abs(x - 0.5) for x in p4[0].points) < 1e-3

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        fine = find_cycles(p, 4, grid=100_000)
    assert not any(issubclass(w.category, ResolutionWarning) for w in caught)
    assert len([c for c in fine if c.prime_period == 4]) == 1


def test_region_oracle_spot_values():
    assert two_cycle_region_oracle(MapParams(0.8, 0.8))
    assert not two_cycle_region_oracle(MapParams(0.3, 0.2))
    with pytest.raises(PreconditionError):
        two_cycle_region_oracle(MapParams(0.5, 0.5), grid=500)
    with pytest.raises(DegenerateParameterError):
        two_cycle_region_oracle(MapParams(0.0, 0.5))


def test_region_oracle_matches_windows_on_coarse_grid():
    for i in range(10):
        for j in range(10):
            a, b = (i + 1) / 10.0, (j + 1) / 10.0
            assert two_cycle_region_oracle(MapParams(a, b), grid=1_024) == two_cycle_exists(a, b)


def test_odd_period_scan():
    assert odd_period_scan(MapParams(0.5, 0.5), 7, grid=100_000) == []
    assert odd_period_scan(MapParams(0.0, 0.5), 5) == []  # degenerate short-circuits
    hits = odd_period_scan(MapParams(0.5, 1.0), 3, grid=100_000)
    assert len(hits) == 1 and hits[0].prime_period == 3
    with pytest.raises(PreconditionError):
        odd_period_scan(MapParams(0.5, 0.5), 13)


def test_four_block_regime_membership():
    assert four_block_regime(0.5, 0.5)
    assert four_block_regime(0.6, 0.65)
    assert not four_block_regime(0.5, 0.4)  # needs b >= a
    assert not four_block_regime(0.0, 0.5)
    assert not four_block_regime(0.6, 0.97)  # past the upper boundary curve


def test_block_partition_dyadic_endpoints():
    bp = block_partition(MapParams(0.5, 0.5))
    assert (bp.outer_left.lo, bp.outer_left.hi) == (0.375, 0.382843017578125)
    assert (bp.inner_left.lo, bp.inner_left.hi) == (0.4921875, 0.5)
    assert (bp.inner_right.lo, bp.inner_right.hi) == (0.5, 0.5078125)
    assert (bp.outer_right.lo, bp.outer_right.hi) == (0.617156982421875, 0.625)

    bp = block_partition(MapParams(1.0, 1.0))
    assert (bp.outer_left.lo, bp.outer_left.hi) == (0.25, 0.31640625)
    assert (bp.inner_left.lo, bp.inner_left.hi) == (0.4375, 0.5)
    assert (bp.inner_right.lo, bp.inner_right.hi) == (0.5, 0.5625)
    assert (bp.outer_right.lo, bp.outer_right.hi) == (0.68359375, 0.75)
    assert (bp.gap_left.lo, bp.gap_left.hi) == (0.31640625, 0.4375)


def test_block_partition_matches_iterates():
    # endpoints are low-order iterates of the trapping interval's endpoints
    p = MapParams(0.6, 0.62)
    bp = block_partition(p)
    lo, hi = bp.outer_left.lo, bp.outer_right.hi
    assert abs(bp.inner_right.hi - eval_f(p, hi)) <= 1e-12
    assert abs(bp.inner_left.lo - eval_f(p, lo)) <= 1e-12
    assert abs(bp.outer_left.hi - iterate_n(p, hi, 2)) <= 1e-12
    assert abs(bp.outer_right.lo - iterate_n(p, lo, 2)) <= 1e-12
    with pytest.raises(PreconditionError):
        block_partition(MapParams(0.5, 0.4))


def test_transition_check_clean_points():
    for a, b in [(0.5, 0.5), (1.0, 1.0), (0.3, 0.3)]:
        rep = transition_check(MapParams(a, b), samples=2_000)
        assert rep.all_passed, [c.name for c in rep.checks if not c.passed]
        assert len(rep.checks) == 7


def test_transition_check_boundary_layer_leak():
    # near the regime's upper boundary the fourth block's image spills into
    # the left gap; the check reports it rather than papering over it
    rep = transition_check(MapParams(0.6, 0.65), samples=2_000)
    failed = [c for c in rep.checks if not c.passed]
    assert [c.name for c in failed] == ["outer-right-to-inner"]
    leak = failed[0]
    assert leak.violations == 206
    assert leak.counterexamples
    bp = block_partition(MapParams(0.6, 0.65))
    for x, fx in leak.counterexamples:
        assert x in bp.outer_right
        assert fx in bp.gap_left
    assert not rep.all_passed


def test_transition_check_precondition():
    with pytest.raises(PreconditionError):
        transition_check(MapParams(0.5, 0.5), samples=5)


def test_two_cycle_survey_small_grid():
    sv = two_cycle_survey(side=10, grid=1_024)
    assert sv.total_points == 100
    assert sv.window_vs_oracle == ()
    assert sv.agreement_ok
    assert len(sv.ratio_vs_window) == 52
    text = sv.summary()
    assert "0 disagreements" in text
    assert "52 points differ" in text
