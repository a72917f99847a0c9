"""Brute-force reference implementations used only by the tests.

Nothing here imports the package's combinatorics: Stirling numbers come from
their defining recurrences, divisor sums from trial division, and the
coefficient sums from straight nested loops in a different order.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial


@lru_cache(maxsize=None)
def cycles(n: int, k: int) -> int:
    if n == k:
        return 1
    if n == 0 or k == 0:
        return 0
    return (n - 1) * cycles(n - 1, k) + cycles(n - 1, k - 1)


@lru_cache(maxsize=None)
def subsets(n: int, k: int) -> int:
    if n == k:
        return 1
    if n == 0 or k == 0:
        return 0
    return k * subsets(n - 1, k) + subsets(n - 1, k - 1)


def binom(n: int, k: int) -> int:
    if k < 0:
        return 0
    num = 1
    for t in range(k):
        num *= n - t
    return num // factorial(k)


def power(b: int, e: int) -> Fraction:
    return Fraction(b) ** e


def divisor_list(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def sigma_int(a: int, n: int) -> Fraction:
    return sum((power(d, a) for d in divisor_list(n)), Fraction(0))


def bounded_int(a: int, m: int, n: int) -> Fraction:
    return sum((power(d, a) for d in divisor_list(n) if d * m <= n), Fraction(0))


def binomial_divisor_int(a: int, k: int, m: int, n: int) -> Fraction:
    return sum(
        (comb(n // d - m + k, k) * power(d, a) for d in divisor_list(n) if d * m <= n),
        Fraction(0),
    )


def lambert_coeff(weight, m: int, k: int, n: int) -> Fraction:
    """``[q^n] sum_i w(i) q^(m i) (1-q^i)^-(k+1)`` by enumerating ``i`` and ``j`` with ``i(m+j) = n``."""
    total = Fraction(0)
    for i in range(1, n + 1):
        for j in range(n + 1):
            if i * (m + j) == n:
                total += weight(i) * comb(j + k, k)
    return total


def c4_raw(s: int, r: int, p: int, m: int) -> int:
    total = 0
    for k in range(m + 1):  # k outermost, every factor recomputed
        sign = (-1) ** ((s - r - k + p) % 2)
        total += (
            binom(s, r) * cycles(s - r, m) * subsets(m, k) * binom(s - r - k, p)
            * sign * factorial(k) * factorial(r)
        )
    return total


def c8_raw(s: int, r: int, p: int, n: int, w: int) -> Fraction:
    if n > r + 1:
        return Fraction(0)
    total = Fraction(0)
    for m2 in range(n + 1):
        for m1 in range(r + 2 - n):
            for k in range(s - r + 1):
                for m in range(k, s - r + 1):
                    b = binom(m2, w - m - m1)
                    if b == 0:
                        continue
                    e = m + m1 + m2 - w
                    total += (
                        binom(s, r) * cycles(s - r, m) * subsets(m, k) * binom(s - r - k, p)
                        * (-1) ** ((s - k + p + n) % 2) * factorial(k)
                        * (-1) ** ((m1 + m2) % 2) * cycles(r + 1 - n, m1) * cycles(n, m2)
                        * b * power(n - 2 - r, e)
                    )
    return total


def series_coeffs(numer: dict[int, Fraction], den_step: int, den_pow: int, N: int) -> list[Fraction]:
    """Coefficients of ``numer(q) / (1 - q^step)^den_pow`` up to ``q^N`` via long division."""
    den = [Fraction(0)] * (N + 1)
    for t in range(den_pow + 1):
        if den_step * t <= N:
            den[den_step * t] += (-1) ** t * comb(den_pow, t)
    num = [Fraction(numer.get(e, 0)) for e in range(N + 1)]
    out = [Fraction(0)] * (N + 1)
    for n in range(N + 1):
        acc = num[n] - sum((den[j] * out[n - j] for j in range(1, n + 1)), Fraction(0))
        out[n] = acc / den[0]
    return out
