"""Lyapunov estimation, parameter-sweep rules, bifurcation sampling, bands."""

import math

import numpy as np
import pytest

from pwdyn import (
    BRule,
    DomainError,
    MapParams,
    PreconditionError,
    RuleKind,
    RuleRangeError,
    band_count,
    bifurcation_sweep,
    lyapunov,
    lyapunov_ceiling,
    lyapunov_lanes,
    lyapunov_sweep,
    retained_within,
)


def test_lyapunov_spot_values():
    est = lyapunov(MapParams(0.5, 0.5), 0.3)
    assert abs(est.exponent - 0.05908893510845391) <= 1e-12
    assert est.n_used == 100_000 and est.n_skipped == 0
    est = lyapunov(MapParams(1.0, 1.0), 0.3)
    assert abs(est.exponent - 0.20979352760139966) <= 1e-12


def test_lyapunov_identity_is_exactly_zero():
    est = lyapunov(MapParams(0.0, 0.0), 0.3)
    assert est.exponent == 0.0
    assert est.n_used == 100_000


def test_lyapunov_bounds():
    rng = np.random.default_rng(5)
    for _ in range(10):
        a, b = rng.uniform(0.1, 1.0, 2)
        p = MapParams(float(a), float(b))
        est = lyapunov(p, 0.3, burn=2_000, n=20_000)
        assert -1e-6 <= est.exponent <= lyapunov_ceiling(p) + 1e-9
    assert lyapunov_ceiling(MapParams(0.4, 0.9)) == math.log(1.9)


def test_lyapunov_preconditions():
    p = MapParams(0.5, 0.5)
    with pytest.raises(DomainError):
        lyapunov(p, 0.5)  # derivative undefined at the switch
    with pytest.raises(DomainError):
        lyapunov(p, 0.0)
    with pytest.raises(DomainError):
        lyapunov(p, 1.0)
    with pytest.raises(PreconditionError):
        lyapunov(p, 0.3, n=500)


def test_scalar_and_lane_paths_agree():
    e = lyapunov(MapParams(0.7, 0.9), 0.3, burn=2_000, n=20_000)
    lam, used, skipped = lyapunov_lanes(
        np.array([0.7]), np.array([0.9]), np.array([0.3]), 2_000, 20_000
    )
    assert abs(e.exponent - lam[0]) <= 1e-12
    assert used[0] + skipped[0] == 20_000


def test_rule_parsing():
    cases = [
        ("b=a", RuleKind.EQUAL, 0.8),
        ("a/2", RuleKind.HALF, 0.4),
        ("b = 2a/3", RuleKind.TWO_THIRDS, 0.5333333333333333),
        ("3a/4", RuleKind.THREE_QUARTERS, 0.6000000000000001),
        ("4a/5", RuleKind.FOUR_FIFTHS, 0.6400000000000001),
        ("5a/6", RuleKind.FIVE_SIXTHS, 0.6666666666666667),
        ("a/(4-a^2)", RuleKind.RATIONAL_LOW, 0.2380952380952381),
        ("b=5a/(4-a**2)", RuleKind.RATIONAL_HIGH, 1.1904761904761905),
        ("0.7", RuleKind.CONST, 0.7),
        ("b=0.9a", RuleKind.RATIO, 0.7200000000000001),
        ("a/4", RuleKind.RATIO, 0.2),
    ]
    for text, kind, b_at_08 in cases:
        rule = BRule.parse(text)
        assert rule.kind is kind, text
        assert rule.b_of(0.8) == b_at_08, text
        assert rule.label().startswith("b=")


def test_rule_parse_rejections():
    with pytest.raises(RuleRangeError):
        BRule.parse("1.3")  # constant outside the parameter square
    with pytest.raises(RuleRangeError):
        BRule.parse("-0.5a")
    with pytest.raises(DomainError):
        BRule.parse("zzz")


def test_critical_rule_value():
    rule = BRule.parse("b=4a/(4-a^2)")
    assert rule.kind is RuleKind.CRITICAL
    assert abs(rule.b_of(0.6) - 0.6593406593406593) <= 1e-15


def test_sweep_rule_range_checked_up_front():
    # the critical curve exits [0,1] at a = 2(sqrt(2)-1) ~ 0.828
    with pytest.raises(RuleRangeError):
        lyapunov_sweep(BRule.parse("b=4a/(4-a^2)"), 0.1, 1.0, 10, n=2_000)
    with pytest.raises(PreconditionError):
        lyapunov_sweep(BRule.parse("b=a"), 0.0, 1.0, 10, n=2_000)


def test_lyapunov_sweep_thread_determinism():
    rule = BRule.parse("b=a")
    rows1 = lyapunov_sweep(rule, 0.1, 1.0, 40, burn=2_000, n=5_000, threads=1)
    rows4 = lyapunov_sweep(rule, 0.1, 1.0, 40, burn=2_000, n=5_000, threads=4)
    assert rows1 == rows4
    assert len(rows1) == 40
    assert rows1[0][0] == 0.1 and rows1[-1][0] == 1.0
    a_vals = [r[0] for r in rows1]
    assert a_vals == sorted(a_vals)
    for a, b, lam in rows1:
        assert b == a
        assert -1e-6 <= lam <= lyapunov_ceiling(MapParams(a, b)) + 1e-9


def test_bifurcation_sweep_determinism_and_containment():
    rule = BRule.parse("b=a")
    s1 = bifurcation_sweep(rule, 0.2, 0.9, 8, burn=2_000, keep=120, threads=1)
    s3 = bifurcation_sweep(rule, 0.2, 0.9, 8, burn=2_000, keep=120, threads=3)
    assert len(s1) == len(s3) == 8
    for x, y in zip(s1, s3):
        assert (x.a, x.b) == (y.a, y.b)
        assert np.array_equal(x.retained, y.retained)
    for s in s1:
        assert len(s.retained) == 120
        assert retained_within(s)
    with pytest.raises(PreconditionError):
        bifurcation_sweep(rule, 0.1, 1.0, 5, keep=50)


def test_band_count():
    assert band_count([0.1, 0.11, 0.5, 0.51], gap=0.1) == 2
    assert band_count([0.42]) == 1
    with pytest.raises(PreconditionError):
        band_count([])
    with pytest.raises(PreconditionError):
        band_count([0.1, 0.2], gap=0.0)


def test_band_count_accepts_sweep_samples():
    rule = BRule.parse("b=a")
    (sample,) = bifurcation_sweep(rule, 0.5, 0.5, 1, burn=10_000, keep=500)
    assert band_count(sample, gap=0.01) == 3
