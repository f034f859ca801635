"""Pointwise map evaluation, branches, derivatives, domain handling."""

import math

import numpy as np
import pytest

from pwdyn import (
    Branch,
    DomainError,
    MapParams,
    branch_of,
    conjugate_map_check,
    eval_f,
    eval_f_deriv,
    eval_f_vec,
    iterate_n,
    left_deriv_formula,
    preimages_of,
    right_deriv_formula,
)


def test_param_validation():
    with pytest.raises(DomainError):
        MapParams(1.2, 0.5)
    with pytest.raises(DomainError):
        MapParams(0.5, -0.1)
    p = MapParams(0, 1)
    assert p.a == 0.0 and p.b == 1.0
    assert p.is_degenerate and p.is_left_identity and not p.is_identity
    assert MapParams(0, 0).is_identity


def test_branch_ownership():
    assert branch_of(0.5) is Branch.LEFT
    assert branch_of(np.nextafter(0.5, 1.0)) is Branch.RIGHT
    assert branch_of(0.0) is Branch.LEFT
    assert branch_of(1.0) is Branch.RIGHT


def test_spot_values():
    p = MapParams(0.2, 0.8)
    assert abs(eval_f(p, 0.25) - 0.2875) <= 1e-15
    # right branch: 0.75 * (1 - 0.8 + 0.8*0.75) = 0.6
    assert abs(eval_f(p, 0.75) - 0.6) <= 1e-15
    assert eval_f(p, 0.0) == 0.0
    assert eval_f(p, 1.0) == 1.0


def test_switch_jump():
    for a, b in [(0.2, 0.8), (0.5, 0.5), (1.0, 1.0)]:
        p = MapParams(a, b)
        assert abs(eval_f(p, 0.5) - (0.5 + a / 4.0)) <= 1e-15
        right = eval_f(p, np.nextafter(0.5, 1.0))
        assert abs(right - (0.5 - b / 4.0)) <= 1e-12
        # the jump height is (a + b)/4
        assert abs((eval_f(p, 0.5) - right) - (a + b) / 4.0) <= 1e-12


def test_identity_parameters_exact():
    p = MapParams(0.0, 0.0)
    for x in (0.0, 0.3, 0.5, 0.7, 1.0):
        assert eval_f(p, x) == x
    assert iterate_n(p, 0.3, 7) == 0.3


def test_vector_matches_scalar_bitwise():
    rng = np.random.default_rng(7)
    xs = rng.uniform(0.0, 1.0, 2_000)
    for a, b in [(0.2, 0.8), (1.0, 1.0), (0.0, 0.5), (0.7, 0.0)]:
        p = MapParams(a, b)
        vec = eval_f_vec(p, xs)
        scal = np.array([eval_f(p, float(x)) for x in xs])
        assert (vec == scal).all()


def test_domain_snapping_and_rejection():
    p = MapParams(0.5, 0.5)
    assert eval_f(p, 1.0 + 1e-13) <= 1.0
    assert eval_f(p, -1e-13) >= 0.0
    with pytest.raises(DomainError):
        eval_f(p, 1.1)
    with pytest.raises(DomainError):
        eval_f(p, -0.01)
    with pytest.raises(DomainError):
        eval_f(p, float("nan"))


def test_derivative_values():
    p = MapParams(0.4, 0.6)
    assert eval_f_deriv(p, 0.5) is None
    assert abs(eval_f_deriv(p, 0.0) - 1.4) <= 1e-15
    assert abs(eval_f_deriv(p, 1.0) - 1.6) <= 1e-15
    # both one-sided formulas reach 1 at the switch
    assert abs(left_deriv_formula(p, 0.5) - 1.0) <= 1e-12
    assert abs(right_deriv_formula(p, 0.5) - 1.0) <= 1e-12


def test_derivative_exceeds_one_off_switch():
    rng = np.random.default_rng(11)
    p = MapParams(0.6, 0.9)
    for x in rng.uniform(0.0, 1.0, 500):
        if x == 0.5:
            continue
        d = eval_f_deriv(p, float(x))
        assert 1.0 < d <= 1.0 + max(p.a, p.b) + 1e-15


def test_iterate_n():
    p = MapParams(0.3, 0.3)
    assert iterate_n(p, 0.4, 0) == 0.4
    x = 0.4
    for _ in range(5):
        x = eval_f(p, x)
    assert iterate_n(p, 0.4, 5) == x


def test_reflection_identity():
    rng = np.random.default_rng(3)
    for _ in range(5):
        p = MapParams(rng.uniform(0, 1), rng.uniform(0, 1))
        for x in rng.uniform(0.0, 1.0, 200):
            if x == 0.5:
                continue
            lhs, rhs = conjugate_map_check(p, float(x))
            assert abs(lhs - rhs) < 1e-14


def test_reflection_flips_at_switch():
    p = MapParams(0.3, 0.7)
    lhs, rhs = conjugate_map_check(p, 0.5)
    assert abs(abs(lhs - rhs) - (0.3 + 0.7) / 4.0) <= 1e-12


def test_preimages_invert_the_map():
    rng = np.random.default_rng(19)
    for a, b in [(0.5, 0.5), (0.2, 0.8), (1.0, 1.0)]:
        p = MapParams(a, b)
        for y in rng.uniform(0.0, 1.0, 300):
            pres = preimages_of(p, float(y))
            assert len(pres) <= 2
            for x in pres:
                assert 0.0 <= x <= 1.0
                assert abs(eval_f(p, x) - y) <= 1e-12


def test_preimages_identity_branch():
    p = MapParams(0.0, 0.5)
    assert 0.3 in preimages_of(p, 0.3)
    # a value above the switch must come from the right branch only
    pres = preimages_of(p, 0.7)
    assert all(x > 0.5 for x in pres)
