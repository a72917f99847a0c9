"""Generalized and bounded divisor sums in three exponent modes.

The exponent ``alpha`` is one of

* :class:`IntegerExp` -- exact arithmetic, results are Fractions;
* :class:`SymbolicShift` -- ``alpha + offset`` left symbolic, results are
  :class:`PowerSum` objects ``sum_d c_d * d**alpha``;
* :class:`RealExp` -- floating point.

All divisor sums share the same accumulation code; only the leaf power
``d ** (alpha + shift)`` differs between modes (see :func:`divisor_power`).
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .exact_arith import binomial_general, exact_pow


class ModeError(ValueError):
    """An operation was asked for a result its alpha-mode cannot provide."""


@dataclass(frozen=True)
class IntegerExp:
    value: int

    def __post_init__(self):
        if isinstance(self.value, bool) or not isinstance(self.value, int):
            raise TypeError(f"IntegerExp needs an int, got {self.value!r}")


@dataclass(frozen=True)
class SymbolicShift:
    offset: int = 0


@dataclass(frozen=True)
class RealExp:
    value: float

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise ValueError(f"RealExp must be finite, got {self.value!r}")


AlphaValue = Union[IntegerExp, SymbolicShift, RealExp]


def as_alpha(value) -> AlphaValue:
    """Coerce ``3``, ``2.5``, ``"a"``/``"sym"`` or an AlphaValue."""
    if isinstance(value, (IntegerExp, SymbolicShift, RealExp)):
        return value
    if isinstance(value, bool):
        raise TypeError("alpha cannot be a bool")
    if isinstance(value, int):
        return IntegerExp(value)
    if isinstance(value, Fraction) and value.denominator == 1:
        return IntegerExp(int(value))
    if isinstance(value, float):
        return RealExp(value)
    if isinstance(value, str):
        text = value.strip()
        if text in ("a", "sym", "symbolic", "alpha"):
            return SymbolicShift(0)
        try:
            return IntegerExp(int(text))
        except ValueError:
            return RealExp(float(text))
    raise TypeError(f"cannot interpret {value!r} as an exponent")


def shift_alpha(alpha: AlphaValue, beta: int) -> AlphaValue:
    """The exponent ``alpha + beta`` in the same mode."""
    if isinstance(alpha, IntegerExp):
        return IntegerExp(alpha.value + beta)
    if isinstance(alpha, SymbolicShift):
        return SymbolicShift(alpha.offset + beta)
    return RealExp(alpha.value + beta)


class PowerSum:
    """A formal sum ``sum_d c_d * d**alpha`` over positive integer bases.

    Coefficients are Fractions; zero coefficients are never stored and
    bases are kept sorted so equality and hashing are canonical.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, object] | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[int, Fraction] = {}
        for base, coeff in items:
            if isinstance(base, bool) or not isinstance(base, int) or base < 1:
                raise ValueError(f"PowerSum bases must be positive ints, got {base!r}")
            acc[base] = acc.get(base, Fraction(0)) + Fraction(coeff)
        self._terms = {b: acc[b] for b in sorted(acc) if acc[b] != 0}
        self._hash = None

    @classmethod
    def _from_clean(cls, terms: dict[int, Fraction]) -> "PowerSum":
        out = cls.__new__(cls)
        out._terms = {b: terms[b] for b in sorted(terms) if terms[b] != 0}
        out._hash = None
        return out

    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    def bases(self) -> list[int]:
        return list(self._terms)

    def __iter__(self):
        return iter(self._terms.items())

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if isinstance(other, PowerSum):
            return self._terms == other._terms
        if other == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def __add__(self, other):
        if isinstance(other, PowerSum):
            acc = dict(self._terms)
            for b, c in other._terms.items():
                acc[b] = acc.get(b, 0) + c
            return PowerSum._from_clean(acc)
        if other == 0:
            return self
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return PowerSum._from_clean({b: -c for b, c in self._terms.items()})

    def __sub__(self, other):
        if isinstance(other, PowerSum):
            return self + (-other)
        if other == 0:
            return self
        return NotImplemented

    def __rsub__(self, other):
        if other == 0:
            return -self
        return NotImplemented

    def __mul__(self, scalar):
        if isinstance(scalar, (int, Fraction)) and not isinstance(scalar, bool):
            if scalar == 0:
                return PowerSum()
            return PowerSum._from_clean({b: c * scalar for b, c in self._terms.items()})
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        if isinstance(scalar, (int, Fraction)) and scalar != 0:
            return self * (Fraction(1) / Fraction(scalar))
        return NotImplemented

    def shift(self, beta: int) -> "PowerSum":
        """Replace ``alpha`` by ``alpha + beta``: ``c_d -> c_d * d**beta``."""
        return PowerSum._from_clean({b: c * exact_pow(b, beta) for b, c in self._terms.items()})

    def evaluate(self, at):
        return powersum_eval(self, at)

    def __str__(self):
        return render_powersum(self)

    def __repr__(self):
        inner = ", ".join(f"{b}: {c}" for b, c in self._terms.items())
        return f"PowerSum({{{inner}}})"


def _coeff_text(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def render_powersum(ps: PowerSum, symbol: str = "a") -> str:
    """Render as ``"1 + 2^a + 4^a"``: ascending bases, base 1 printed bare."""
    if not ps:
        return "0"
    parts = []
    for base, coeff in ps:
        mag = abs(coeff)
        if base == 1:
            body = _coeff_text(mag)
        elif mag == 1:
            body = f"{base}^{symbol}"
        else:
            body = f"{_coeff_text(mag)}*{base}^{symbol}"
        sign = "-" if coeff < 0 else "+"
        if not parts:
            parts.append(body if sign == "+" else f"-{body}")
        else:
            parts.append(f"{sign} {body}")
    return " ".join(parts)


DivisorValue = Union[Fraction, PowerSum, float]


def powersum_eval(ps: PowerSum, at):
    """Evaluate ``sum_d c_d d**at``.

    Integer ``at`` (int or integral Fraction) gives an exact Fraction; a
    float gives a float.  A non-integral Fraction has no exact value here.
    """
    if isinstance(at, (IntegerExp, RealExp)):
        at = at.value
    if isinstance(at, bool):
        raise TypeError("exponent cannot be a bool")
    if isinstance(at, Fraction):
        if at.denominator != 1:
            raise ModeError(f"exact evaluation needs an integer exponent, got {at}")
        at = int(at)
    if isinstance(at, int):
        return sum((c * exact_pow(b, at) for b, c in ps), Fraction(0))
    if isinstance(at, float):
        return math.fsum(float(c) * float(b) ** at for b, c in ps)
    raise TypeError(f"unsupported exponent {at!r}")


def mode_zero(alpha: AlphaValue):
    if isinstance(alpha, SymbolicShift):
        return PowerSum()
    if isinstance(alpha, RealExp):
        return 0.0
    return Fraction(0)


def divisor_power(alpha: AlphaValue, d: int, shift: int = 0):
    """``d ** (alpha + shift)`` in the mode of ``alpha``.

    Exact mode follows ``0**0 == 1`` and raises DomainError for ``0**neg``.
    """
    if isinstance(alpha, IntegerExp):
        return exact_pow(d, alpha.value + shift)
    if isinstance(alpha, SymbolicShift):
        if d < 1:
            raise ModeError("symbolic powers need a positive base")
        return PowerSum._from_clean({d: exact_pow(d, alpha.offset + shift)})
    if d == 0:
        return 1.0 if alpha.value + shift == 0 else 0.0
    return float(d) ** (alpha.value + shift)


def _check_positive(name: str, value: int) -> None:
    if isinstance(value, bool) or not isinstance(value, int):
        raise TypeError(f"{name} must be an int, got {value!r}")
    if value < 1:
        raise ValueError(f"{name} must be a positive integer, got {value}")


def divisors(n: int) -> list[int]:
    """Divisors of ``n`` in ascending order, by trial division up to sqrt(n)."""
    _check_positive("n", n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def smallest_prime_factors(limit: int) -> list[int]:
    """Linear sieve: ``spf[n]`` is the least prime dividing n (``spf[0] = spf[1] = 0``)."""
    spf = [0] * (limit + 1)
    primes: list[int] = []
    for n in range(2, limit + 1):
        if spf[n] == 0:
            spf[n] = n
            primes.append(n)
        for p in primes:
            if p > spf[n] or n * p > limit:
                break
            spf[n * p] = p
    return spf


class DivisorTable:
    """Divisor lists for ``1..limit`` built from a smallest-prime-factor sieve.

    Built once, then read-only; :func:`divisor_table` shares one instance.
    """

    def __init__(self, limit: int):
        self.limit = limit
        spf = smallest_prime_factors(limit)
        table: list[tuple[int, ...]] = [(), (1,)]
        for n in range(2, limit + 1):
            p, m, e = spf[n], n, 0
            while m % p == 0:
                m //= p
                e += 1
            base = table[m]
            out = []
            pk = 1
            for _ in range(e + 1):
                out.extend(d * pk for d in base)
                pk *= p
            table.append(tuple(sorted(out)))
        self._table = table

    def __call__(self, n: int) -> tuple[int, ...]:
        return self._table[n]


_TABLE_LOCK = threading.Lock()
_TABLE: DivisorTable | None = None


def divisor_table(limit: int) -> DivisorTable:
    """Shared divisor table covering at least ``1..limit``."""
    global _TABLE
    table = _TABLE
    if table is None or table.limit < limit:
        with _TABLE_LOCK:
            if _TABLE is None or _TABLE.limit < limit:
                _TABLE = DivisorTable(max(limit, 2 * (_TABLE.limit if _TABLE else 512)))
            table = _TABLE
    return table


def _divs(n: int) -> tuple[int, ...]:
    if n <= 4096:
        return divisor_table(n)(n)
    return tuple(divisors(n))


def _accumulate(alpha: AlphaValue, pairs):
    """Sum ``weight * d**(alpha+shift)`` over ``(d, weight, shift)`` triples."""
    if isinstance(alpha, SymbolicShift):
        acc: dict[int, Fraction] = {}
        for d, w, shift in pairs:
            if w:
                acc[d] = acc.get(d, 0) + w * exact_pow(d, alpha.offset + shift)
        return PowerSum._from_clean(acc)
    if isinstance(alpha, RealExp):
        return math.fsum(float(w) * float(d) ** (alpha.value + shift) for d, w, shift in pairs)
    return sum((w * exact_pow(d, alpha.value + shift) for d, w, shift in pairs), Fraction(0))


def sigma(alpha, n: int) -> DivisorValue:
    """``sigma_alpha(n) = sum_{d | n} d**alpha``."""
    alpha = as_alpha(alpha)
    _check_positive("n", n)
    return _accumulate(alpha, ((d, 1, 0) for d in _divs(n)))


def sigma_bounded(alpha, m: int, n: int) -> DivisorValue:
    """Divisor power sum restricted to divisors ``d <= n // m``."""
    alpha = as_alpha(alpha)
    _check_positive("m", m)
    _check_positive("n", n)
    bound = n // m
    return _accumulate(alpha, ((d, 1, 0) for d in _divs(n) if d <= bound))


def binomial_divisor_sum(alpha, k: int, m: int, n: int) -> DivisorValue:
    """``B_{k,m}(alpha; n) = sum_{d | n, d <= n//m} C(n/d - m + k, k) d**alpha``."""
    alpha = as_alpha(alpha)
    if k < 0:
        raise ValueError(f"k must be non-negative, got {k}")
    _check_positive("m", m)
    _check_positive("n", n)
    bound = n // m
    return _accumulate(
        alpha,
        ((d, binomial_general(n // d - m + k, k), 0) for d in _divs(n) if d <= bound),
    )


def weighted_sigma(alpha: AlphaValue, terms):
    """Sum of ``weight * sigma_{alpha+beta, m}(n)`` over ``(weight, beta, m, n)``.

    This is the workhorse for closed forms that mix many shifted and bounded
    divisor sums; ``n <= 0`` contributes nothing.
    """
    alpha = as_alpha(alpha)

    def pairs():
        for weight, beta, m, n in terms:
            if not weight or n <= 0:
                continue
            bound = n // m
            for d in _divs(n):
                if d > bound:
                    break
                yield d, weight, beta

    return _accumulate(alpha, pairs())
