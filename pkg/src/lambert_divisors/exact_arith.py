"""Exact rational kernel: factorials, generalized binomials and Stirling triangles.

Everything here returns Python ints or :class:`fractions.Fraction`; nothing
rounds.  The Stirling tables are dense triangles that grow on demand.
"""
from __future__ import annotations

import math
import threading
from fractions import Fraction

Rational = Fraction


class DomainError(ArithmeticError):
    """Raised for boundary cases with no exact value, e.g. ``0 ** -1``."""


class CapacityError(ValueError):
    """Raised when a fixed-capacity Stirling table is queried past ``max_n``."""


def factorial(n: int) -> int:
    return math.factorial(n)


def falling_factorial(n: int, k: int) -> int:
    """``n (n-1) ... (n-k+1)``; the empty product is 1."""
    if k < 0:
        raise ValueError(f"falling factorial needs k >= 0, got {k}")
    if 0 <= n < k:
        return 0
    out = 1
    for t in range(k):
        out *= n - t
    return out


def binomial_general(n: int, k: int) -> int:
    """Binomial coefficient with arbitrary integer upper argument.

    Uses the falling-factorial definition, so ``binomial_general(-2, 2) == 3``
    and ``binomial_general(n, k) == 0`` for ``k < 0``.
    """
    if k < 0:
        return 0
    if 0 <= n:
        return math.comb(n, k)
    return falling_factorial(n, k) // math.factorial(k)


def exact_pow(base, exp: int) -> Fraction:
    """``base ** exp`` as a Fraction with ``0 ** 0 == 1``.

    A zero base with negative exponent raises :class:`DomainError`.
    """
    if exp >= 0:
        return Fraction(base) ** exp
    if base == 0:
        raise DomainError(f"0 ** {exp} is undefined")
    return Fraction(1) / Fraction(base) ** (-exp)


def reciprocal_factorial(n: int) -> Fraction:
    """``1/n!`` extended by zero to negative ``n`` (poles of the Gamma function)."""
    if n < 0:
        return Fraction(0)
    return Fraction(1, math.factorial(n))


class StirlingTables:
    """Dense triangles of unsigned Stirling numbers of both kinds.

    Rows ``0..max_n`` are built eagerly.  With ``grow=True`` a query beyond
    the capacity extends both triangles under a lock; otherwise it raises
    :class:`CapacityError`.  Reads never lock once a row exists.
    """

    def __init__(self, max_n: int = 64, grow: bool = True):
        if max_n < 0:
            raise ValueError("max_n must be non-negative")
        self.grow = grow
        self._lock = threading.Lock()
        self._first: list[list[int]] = [[1]]
        self._second: list[list[int]] = [[1]]
        self._extend(max_n)

    @property
    def max_n(self) -> int:
        return len(self._first) - 1

    def _extend(self, n: int) -> None:
        first, second = list(self._first), list(self._second)
        for row in range(len(first), n + 1):
            prev1, prev2 = first[-1], second[-1]
            r1 = [0] * (row + 1)
            r2 = [0] * (row + 1)
            for k in range(1, row + 1):
                up = prev1[k] if k < row else 0
                r1[k] = (row - 1) * up + prev1[k - 1]
                up = prev2[k] if k < row else 0
                r2[k] = k * up + prev2[k - 1]
            first.append(r1)
            second.append(r2)
        # publish whole lists so concurrent readers never see a partial row
        self._first, self._second = first, second

    def _ensure(self, n: int) -> None:
        if n <= self.max_n:
            return
        if not self.grow:
            raise CapacityError(f"row {n} exceeds table capacity {self.max_n}")
        with self._lock:
            if n > self.max_n:
                self._extend(max(n, 2 * self.max_n))

    def first_kind(self, n: int, k: int) -> int:
        """Unsigned ``[n, k]``; zero outside the triangle."""
        if n < 0 or k < 0 or k > n:
            return 0
        self._ensure(n)
        return self._first[n][k]

    def second_kind(self, n: int, k: int) -> int:
        """``{n, k}``; zero outside the triangle."""
        if n < 0 or k < 0 or k > n:
            return 0
        self._ensure(n)
        return self._second[n][k]


_TABLES = StirlingTables()


def stirling_first_unsigned(n: int, k: int) -> int:
    return _TABLES.first_kind(n, k)


def stirling_second(n: int, k: int) -> int:
    return _TABLES.second_kind(n, k)
