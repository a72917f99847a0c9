"""Truncated formal power series over the rationals.

This is the ground-truth engine: identities about Lambert series are
decided by expanding both sides here.  Division only ever happens through
the closed expansions of ``(1-q)**-(m+1)`` and ``(1-q**i)**-(m+1)``.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

from .exact_arith import binomial_general, exact_pow, falling_factorial


class TruncationError(IndexError):
    """A coefficient past the truncation order was requested."""


class TruncatedSeries:
    """Coefficients ``c_0 .. c_N`` of a power series in ``q``; ``N`` is the order.

    Results of binary operations carry the smaller of the two orders.
    Reading a coefficient beyond the order raises :class:`TruncationError`.
    """

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs: Sequence = (), order: int | None = None):
        cs = [c if isinstance(c, Fraction) else Fraction(c) for c in coeffs]
        if order is None:
            order = len(cs) - 1
        if order < 0:
            raise ValueError("a truncated series needs order >= 0")
        if len(cs) <= order:
            cs.extend([Fraction(0)] * (order + 1 - len(cs)))
        self.coeffs = tuple(cs[: order + 1])
        self.order = order

    @classmethod
    def _raw(cls, coeffs: list, order: int) -> "TruncatedSeries":
        out = cls.__new__(cls)
        out.coeffs = tuple(coeffs)
        out.order = order
        return out

    @classmethod
    def zero(cls, order: int) -> "TruncatedSeries":
        return cls._raw([Fraction(0)] * (order + 1), order)

    @classmethod
    def monomial(cls, exponent: int, order: int, coeff=1) -> "TruncatedSeries":
        cs = [Fraction(0)] * (order + 1)
        if 0 <= exponent <= order:
            cs[exponent] = Fraction(coeff)
        return cls._raw(cs, order)

    @classmethod
    def polynomial(cls, terms: dict, order: int) -> "TruncatedSeries":
        """Build from ``{exponent: coeff}``; exponents past ``order`` are dropped."""
        cs = [Fraction(0)] * (order + 1)
        for e, c in terms.items():
            if 0 <= e <= order:
                cs[e] += Fraction(c)
        return cls._raw(cs, order)

    def __getitem__(self, x: int) -> Fraction:
        return coefficient(self, x)

    def __len__(self):
        return self.order + 1

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise TruncationError(f"cannot extend order {self.order} to {order}")
        return TruncatedSeries._raw(list(self.coeffs[: order + 1]), order)

    def _coerce(self, other):
        if isinstance(other, TruncatedSeries):
            return other
        if isinstance(other, (int, Fraction)):
            return TruncatedSeries.monomial(0, self.order, other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        n = min(self.order, other.order)
        return TruncatedSeries._raw([a + b for a, b in zip(self.coeffs[: n + 1], other.coeffs)], n)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries._raw([-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return series_mul(self, other)
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return TruncatedSeries._raw([c * other for c in self.coeffs], self.order)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        n = min(self.order, other.order)
        return self.coeffs[: n + 1] == other.coeffs[: n + 1]

    __hash__ = None

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __str__(self):
        parts = []
        for e, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mag = abs(c)
            mag_text = str(mag.numerator) if mag.denominator == 1 else f"({mag})"
            if e == 0:
                body = mag_text
            else:
                mono = "q" if e == 1 else f"q^{e}"
                body = mono if mag == 1 else f"{mag_text}*{mono}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(("+ " if c > 0 else "- ") + body)
        parts.append(f"+ O(q^{self.order + 1})")
        return " ".join(parts) if len(parts) > 1 else f"O(q^{self.order + 1})"

    def __repr__(self):
        return f"TruncatedSeries({[str(c) for c in self.coeffs]}, order={self.order})"


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product truncated to ``min(a.order, b.order)``.

    Zero coefficients of either factor are skipped, which keeps products with
    sparse factors such as ``(1 - q**i)**-k`` cheap.
    """
    n = min(a.order, b.order)
    if sum(1 for c in a.coeffs[: n + 1] if c) > sum(1 for c in b.coeffs[: n + 1] if c):
        a, b = b, a
    out = [Fraction(0)] * (n + 1)
    bc = b.coeffs
    b_nz = [(j, c) for j, c in enumerate(bc[: n + 1]) if c]
    for i, x in enumerate(a.coeffs[: n + 1]):
        if not x:
            continue
        lim = n - i
        for j, y in b_nz:
            if j > lim:
                break
            out[i + j] += x * y
    return TruncatedSeries._raw(out, n)


def series_derivative(a: TruncatedSeries) -> TruncatedSeries:
    """``D a``; the result has order ``a.order - 1``."""
    if a.order < 1:
        raise ValueError("the derivative of an order-0 series has no known coefficients")
    return TruncatedSeries._raw([(n + 1) * a.coeffs[n + 1] for n in range(a.order)], a.order - 1)


def nth_derivative(a: TruncatedSeries, j: int) -> TruncatedSeries:
    for _ in range(j):
        a = series_derivative(a)
    return a


@lru_cache(maxsize=512)
def geometric_pow(m: int, N: int) -> TruncatedSeries:
    """``1/(1-q)**(m+1)``: coefficient n is ``C(n+m, m)``."""
    return TruncatedSeries._raw([Fraction(binomial_general(n + m, m)) for n in range(N + 1)], N)


@lru_cache(maxsize=4096)
def geometric_pow_step(i: int, m: int, N: int) -> TruncatedSeries:
    """``1/(1-q**i)**(m+1)``: coefficient ``i*j`` is ``C(j+m, m)``."""
    if i < 1:
        raise ValueError("step must be positive")
    cs = [Fraction(0)] * (N + 1)
    for j in range(N // i + 1):
        cs[i * j] = Fraction(binomial_general(j + m, m))
    return TruncatedSeries._raw(cs, N)


@lru_cache(maxsize=512)
def one_minus_q_pow(e: int, N: int, step: int = 1) -> TruncatedSeries:
    """The polynomial ``(1 - q**step)**e`` truncated to order N, ``e >= 0``."""
    if e < 0:
        raise ValueError("use geometric_pow for negative powers")
    return TruncatedSeries.polynomial(
        {step * t: (-1) ** t * binomial_general(e, t) for t in range(e + 1)}, N
    )


def q_pow_deriv(s: int, f: TruncatedSeries) -> TruncatedSeries:
    """``q**s D**s f``: coefficient x is ``x(x-1)...(x-s+1) f_x``, order kept."""
    if s < 0:
        raise ValueError("derivative order must be non-negative")
    return TruncatedSeries._raw(
        [falling_factorial(x, s) * c if c else c for x, c in enumerate(f.coeffs)], f.order
    )


def coefficient(f: TruncatedSeries, x: int) -> Fraction:
    """``[q**x] f``; past the truncation order this is an error, never 0."""
    if x < 0:
        raise TruncationError(f"negative exponent {x}")
    if x > f.order:
        raise TruncationError(f"coefficient {x} is beyond truncation order {f.order}")
    return f.coeffs[x]


def sequence_series(g: Callable[[int], object] | Sequence, N: int) -> TruncatedSeries:
    """``G(q) = sum_n g_n q**n`` from a callable or a table of ``g_0 .. g_N``."""
    if callable(g):
        return TruncatedSeries([g(n) for n in range(N + 1)], N)
    return TruncatedSeries(list(g)[: N + 1], N)


def lambert_term(weight: Callable[[int], object], m: int, k: int, N: int) -> TruncatedSeries:
    """``sum_{i>=1} w(i) q**(m i) / (1 - q**i)**(k+1)`` truncated at order N."""
    if m < 1 or k < 0:
        raise ValueError("need m >= 1 and k >= 0")
    cs = [Fraction(0)] * (N + 1)
    for i in range(1, N // m + 1):
        w = Fraction(weight(i))
        if not w:
            continue
        for j in range((N - m * i) // i + 1):
            cs[i * (m + j)] += w * binomial_general(j + k, k)
    return TruncatedSeries._raw(cs, N)


@lru_cache(maxsize=64)
def lambert_sigma_gf(alpha: int, N: int) -> TruncatedSeries:
    """``F_alpha(q) = sum_i i**alpha q**i / (1 - q**i)``, expanded termwise.

    Built from the Lambert expansion itself, not from divisor enumeration,
    so comparing its coefficients with :func:`sigma` is a real check.
    """
    if isinstance(alpha, bool) or not isinstance(alpha, int):
        raise TypeError("the series oracle needs an integer alpha")
    return lambert_term(lambda i: exact_pow(i, alpha), 1, 0, N)
