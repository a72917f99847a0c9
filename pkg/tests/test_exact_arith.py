from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from lambert_divisors.exact_arith import (
    CapacityError,
    DomainError,
    StirlingTables,
    binomial_general,
    exact_pow,
    falling_factorial,
    reciprocal_factorial,
    stirling_first_unsigned,
    stirling_second,
)
from oracles import binom, cycles, subsets


def test_small_stirling_values():
    assert [stirling_first_unsigned(4, k) for k in range(5)] == [0, 6, 11, 6, 1]
    assert [stirling_second(5, k) for k in range(6)] == [0, 1, 15, 25, 10, 1]
    assert stirling_first_unsigned(0, 0) == stirling_second(0, 0) == 1


@given(st.integers(0, 40), st.integers(0, 40))
def test_stirling_against_recurrence(n, k):
    assert stirling_first_unsigned(n, k) == cycles(n, k)
    assert stirling_second(n, k) == subsets(n, k)


@given(st.integers(0, 25))
def test_stirling_inversion(n):
    # sum_k {n,k} [k,j] (-1)^(n-k) = delta_{nj}
    for j in range(n + 1):
        total = sum(
            (-1) ** (n - k) * stirling_second(n, k) * stirling_first_unsigned(k, j) for k in range(n + 1)
        )
        assert total == (1 if j == n else 0)


def test_fixed_capacity_table():
    table = StirlingTables(max_n=5, grow=False)
    assert table.first_kind(5, 2) == 50
    with pytest.raises(CapacityError):
        table.second_kind(6, 2)


def test_exact_pow_boundaries():
    assert exact_pow(0, 0) == 1
    assert exact_pow(2, -3) == Fraction(1, 8)
    with pytest.raises(DomainError):
        exact_pow(0, -1)


@given(st.integers(-30, 30), st.integers(0, 12))
def test_binomial_general_matches_falling_factorial(n, k):
    assert binomial_general(n, k) == binom(n, k)
    assert binomial_general(n, k) * reciprocal_factorial(k) ** -1 == falling_factorial(n, k)


def test_binomial_negative_lower_is_zero():
    assert binomial_general(5, -1) == 0
    assert binomial_general(-2, 2) == 3
    assert reciprocal_factorial(-3) == 0
