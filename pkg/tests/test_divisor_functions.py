from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from lambert_divisors.divisor_functions import (
    IntegerExp,
    ModeError,
    PowerSum,
    RealExp,
    SymbolicShift,
    as_alpha,
    binomial_divisor_sum,
    divisor_table,
    divisors,
    powersum_eval,
    render_powersum,
    sigma,
    sigma_bounded,
    smallest_prime_factors,
    weighted_sigma,
)
from oracles import binomial_divisor_int, bounded_int, divisor_list, sigma_int


def test_known_values():
    assert sigma(1, 12) == 28
    assert sigma(0, 12) == 6
    assert binomial_divisor_sum(0, 2, 1, 4) == 14
    assert str(sigma_bounded("sym", 3, 12)) == "1 + 2^a + 3^a + 4^a"


def test_alpha_coercion():
    assert as_alpha(3) == IntegerExp(3)
    assert as_alpha("a") == SymbolicShift(0)
    assert as_alpha(0.5) == RealExp(0.5)
    with pytest.raises(TypeError):
        as_alpha(True)


@given(st.integers(1, 2000))
def test_divisors_by_trial_division(n):
    assert divisors(n) == divisor_list(n)
    assert list(divisor_table(2000)(n)) == divisor_list(n)


def test_smallest_prime_factors():
    spf = smallest_prime_factors(30)
    assert [spf[n] for n in (2, 9, 15, 29, 30)] == [2, 3, 3, 29, 2]


@given(st.integers(-3, 4), st.integers(1, 200))
def test_sigma_matches_enumeration(a, n):
    assert sigma(a, n) == sigma_int(a, n)


@given(st.integers(-2, 3), st.integers(1, 6), st.integers(1, 200))
def test_bounded_matches_enumeration(a, m, n):
    assert sigma_bounded(a, m, n) == bounded_int(a, m, n)


@given(st.integers(0, 3), st.integers(0, 4), st.integers(1, 5), st.integers(1, 120))
def test_binomial_divisor_sum_matches_enumeration(a, k, m, n):
    assert binomial_divisor_sum(a, k, m, n) == binomial_divisor_int(a, k, m, n)


@given(st.integers(1, 6), st.integers(1, 300))
def test_symbolic_specialises_to_integer(m, n):
    sym = sigma_bounded("a", m, n)
    for a in (-1, 0, 1, 3):
        assert powersum_eval(sym, a) == sigma_bounded(a, m, n)


@given(st.floats(-2, 3, allow_nan=False), st.integers(1, 200))
def test_real_mode_close_to_symbolic(a, n):
    ps = sigma("a", n)
    assert math.isclose(sigma(a, n), powersum_eval(ps, a), rel_tol=1e-12)


def test_bounded_m1_is_sigma():
    for n in range(1, 60):
        assert sigma_bounded("a", 1, n) == sigma("a", n)


def test_powersum_algebra_and_rendering():
    p = PowerSum({1: 1, 2: 1}) + PowerSum({4: 1})
    assert render_powersum(p) == "1 + 2^a + 4^a"
    assert str(p - PowerSum({1: 1, 2: 1, 4: 1})) == "0"
    assert str(PowerSum({3: -2, 1: Fraction(1, 2)})) == "1/2 - 2*3^a"
    assert p.shift(1) == PowerSum({1: 1, 2: 2, 4: 4})
    assert powersum_eval(p, 2) == 21


def test_symbolic_needs_integer_exponent_for_exact_eval():
    with pytest.raises(ModeError):
        powersum_eval(PowerSum({2: 1}), Fraction(1, 2))


def test_weighted_sigma_skips_nonpositive_n():
    assert weighted_sigma(as_alpha(1), [(3, 0, 1, 0), (2, 1, 2, 6)]) == 2 * (1 + 4 + 9)


@pytest.mark.parametrize("bad", [0, -3])
def test_positive_n_required(bad):
    with pytest.raises(ValueError):
        sigma(1, bad)
