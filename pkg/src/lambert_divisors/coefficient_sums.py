"""Multiple coefficient sums and the two component series built from them.

Three conventions of the component series are not pinned down by the
identities they are meant to satisfy, so the series take an explicit
:class:`FormulaVariant`:

* the ``q`` exponent of the eight-index series is ``(p+1)i + n - 1``
  ("def") or ``(p+2)i + n - 1`` ("proof");
* the four-index series divides by ``(1 - q**i)**(s-r+1)`` ("sr") or by
  ``(1 - q**i)**(k+1)`` with ``k`` the inner Stirling index ("k");
* the binomial-divisor expansion of the eight-index coefficients uses
  ``B_{s-r, p+1}`` ("p1") or ``B_{s-r, p+2}`` ("p2").

A fourth field selects the multiplier of the ``S48_{s-1,x-1}`` term in the
exact divisor-sum formula (``+s``, ``1`` as in the per-k bracket, or ``-s``
as produced by the derivative identity for ``(1-q) f``).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache

from .exact_arith import (
    DomainError,
    binomial_general,
    exact_pow,
    factorial,
    stirling_first_unsigned as cycle,
    stirling_second as subset,
)
from .power_series import (
    TruncatedSeries,
    geometric_pow,
    geometric_pow_step,
    q_pow_deriv,
    series_mul,
)


class ExponentRule(str, Enum):
    DEFINITION = "def"
    PROOF = "proof"


class DenominatorRule(str, Enum):
    POWER_SR = "sr"
    POWER_K = "k"


class CorollaryShift(str, Enum):
    P1 = "p1"
    P2 = "p2"


class SFactorRule(str, Enum):
    COROLLARY = "s"
    BRACKET = "1"
    DERIVATION = "-s"


_FIELD_TYPES = {
    "exponent": ExponentRule,
    "denominator": DenominatorRule,
    "shift": CorollaryShift,
    "s_factor": SFactorRule,
}


@dataclass(frozen=True)
class FormulaVariant:
    exponent_rule: ExponentRule = ExponentRule.DEFINITION
    denominator_rule: DenominatorRule = DenominatorRule.POWER_SR
    corollary_shift: CorollaryShift = CorollaryShift.P2
    s_factor: SFactorRule = SFactorRule.COROLLARY

    def __post_init__(self):
        for name, enum in (
            ("exponent_rule", ExponentRule),
            ("denominator_rule", DenominatorRule),
            ("corollary_shift", CorollaryShift),
            ("s_factor", SFactorRule),
        ):
            object.__setattr__(self, name, enum(getattr(self, name)))

    @property
    def exponent_offset(self) -> int:
        return 1 if self.exponent_rule is ExponentRule.DEFINITION else 2

    @property
    def shift_offset(self) -> int:
        return 1 if self.corollary_shift is CorollaryShift.P1 else 2

    def s_weight(self, s: int) -> int:
        """Multiplier of ``S48_{s-1,x-1}`` in the exact divisor-sum formula."""
        return {"s": s, "1": 1, "-s": -s}[self.s_factor.value]

    def label(self) -> str:
        return (
            f"exponent={self.exponent_rule.value},denominator={self.denominator_rule.value},"
            f"shift={self.corollary_shift.value},s_factor={self.s_factor.value}"
        )

    def to_dict(self) -> dict:
        return {
            "exponent": self.exponent_rule.value,
            "denominator": self.denominator_rule.value,
            "shift": self.corollary_shift.value,
            "s_factor": self.s_factor.value,
        }

    def replace(self, **changes) -> "FormulaVariant":
        fields = {
            "exponent_rule": self.exponent_rule,
            "denominator_rule": self.denominator_rule,
            "corollary_shift": self.corollary_shift,
            "s_factor": self.s_factor,
        }
        fields.update(changes)
        return FormulaVariant(**fields)

    @classmethod
    def parse(cls, text: str) -> "FormulaVariant":
        """Parse ``"def"``, ``"proof"`` or ``"exponent=proof,denominator=sr,..."``."""
        text = text.strip()
        if text == "def":
            return DEFINITION_VARIANT
        if text == "proof":
            return PROOF_VARIANT
        fields = {}
        names = {"exponent": "exponent_rule", "denominator": "denominator_rule",
                 "shift": "corollary_shift", "s_factor": "s_factor"}
        for part in filter(None, (p.strip() for p in text.split(","))):
            key, sep, value = part.partition("=")
            if not sep or key not in names:
                raise ValueError(f"bad variant field {part!r}")
            fields[names[key]] = _FIELD_TYPES[key](value)
        return cls(**fields)


# The stated conventions of each result taken at face value.
DEFINITION_VARIANT = FormulaVariant(
    ExponentRule.DEFINITION, DenominatorRule.POWER_SR, CorollaryShift.P2
)
# The alternative convention in every field but the shift.
PROOF_VARIANT = FormulaVariant(ExponentRule.PROOF, DenominatorRule.POWER_K, CorollaryShift.P1)


def structural_variants(s_factor: SFactorRule = SFactorRule.COROLLARY) -> list[FormulaVariant]:
    """All combinations of the three adjudicated fields, in a fixed order."""
    return [
        FormulaVariant(e, d, c, s_factor)
        for e, d, c in itertools.product(ExponentRule, DenominatorRule, CorollaryShift)
    ]


def _sign(e: int) -> int:
    return -1 if e % 2 else 1


@lru_cache(maxsize=None)
def c4_term(s: int, r: int, p: int, m: int, k: int) -> int:
    """Single ``k`` summand of :func:`c4`."""
    if k < 0 or k > m:
        return 0
    return (
        binomial_general(s, r) * cycle(s - r, m) * subset(m, k)
        * binomial_general(s - r - k, p) * _sign(s - r - k + p)
        * factorial(k) * factorial(r)
    )


@lru_cache(maxsize=None)
def c4(s: int, r: int, p: int, m: int) -> int:
    if s < 1:
        raise ValueError("coefficient sums need s >= 1")
    if r > s or r < 0:
        return 0
    return sum(c4_term(s, r, p, m, k) for k in range(m + 1))


@lru_cache(maxsize=None)
def c8(s: int, r: int, p: int, n: int, w: int) -> Fraction:
    """The quadruple sum over ``m, k, m1, m2``.

    A zero base raised to a negative power raises DomainError; this cannot
    happen for surviving terms because the binomial factor vanishes first.
    """
    if s < 1:
        raise ValueError("coefficient sums need s >= 1")
    if n > r + 1 or r > s or r < 0 or n < 0:
        return Fraction(0)
    total = 0
    lead = binomial_general(s, r)
    for m in range(s - r + 1):
        cyc = cycle(s - r, m)
        if not cyc:
            continue
        stir = sum(
            subset(m, k) * binomial_general(s - r - k, p) * _sign(s - k + p + n) * factorial(k)
            for k in range(m + 1)
        )
        if not stir:
            continue
        inner = Fraction(0)
        for m1 in range(r + 2 - n):
            c1 = cycle(r + 1 - n, m1)
            if not c1:
                continue
            for m2 in range(n + 1):
                b = binomial_general(m2, w - m - m1)
                if not b:
                    continue
                c2 = cycle(n, m2)
                if not c2:
                    continue
                inner += _sign(m1 + m2) * c1 * c2 * b * exact_pow(n - 2 - r, m + m1 + m2 - w)
        total += lead * cyc * stir * inner
    return Fraction(total)


_LAYER2_KINDS = (42, 43, 82, 83)


@lru_cache(maxsize=None)
def _layer2_kernel(kind: int, s: int, t: int, idx: tuple, level: int) -> Fraction:
    """``c_layer2`` without the ``k**u`` factor; ``t = x - k``."""
    if kind in (42, 43):
        p, m, u = idx
    else:
        w, p, u = idx
    total = Fraction(0)
    for r in range(s + 1):
        for j in range(s - r + 1):
            bj = binomial_general(j, u)
            if not bj:
                continue
            cyc = cycle(s - r, j)
            if not cyc:
                continue
            common = Fraction(
                cyc * bj * _sign(s - r - u) * exact_pow(p + level - s + r, j - u),
                factorial(s - r),
            )
            if kind == 42:
                total += binomial_general(t, r) * common * c4(s, r, p, m)
            elif kind == 43:
                total += binomial_general(t + 1, r + 1) * (r + 1) * common * c4(s, r, p, m)
            else:
                for n in range(r + 2):
                    if kind == 82:
                        weight = binomial_general(t + 1 - n + r, r) * binomial_general(r, n)
                    else:
                        weight = binomial_general(t + 2 - n + r, r + 1) * binomial_general(r + 1, n)
                    if weight:
                        total += weight * common * c8(s, r, p, n, w)
    return total


def c_layer2(kind: int, s: int, x: int, k: int, idx: tuple, level: int | None = None) -> Fraction:
    """Second-layer coefficient sums (kinds 42, 43, 82, 83).

    ``idx`` is ``(p, m, u)`` for kinds 42/43 and ``(w, p, u)`` for 82/83.
    ``level`` is the bound offset inside ``(p + level - s + r)``; it defaults
    to 1 for kinds 42/43 and 2 for kinds 82/83.
    """
    if kind not in _LAYER2_KINDS:
        raise ValueError(f"unknown coefficient sum kind {kind}")
    if s < 1:
        raise ValueError("coefficient sums need s >= 1")
    if level is None:
        level = 1 if kind in (42, 43) else 2
    u = idx[2]
    kernel = _layer2_kernel(kind, s, x - k, tuple(idx), level)
    if not kernel:
        return Fraction(0)
    return kernel * exact_pow(k, u)


def _check_si(s: int, i: int) -> None:
    if s < 1 or i < 1:
        raise ValueError("component series need s >= 1 and i >= 1")


@lru_cache(maxsize=4096)
def _sum4(s: int, i: int, N: int, denominator: DenominatorRule) -> TruncatedSeries:
    total = TruncatedSeries.zero(N)
    for r in range(s + 1):
        # numerators grouped by the (1-q**i) exponent they sit over
        groups: dict[int, tuple[dict, dict]] = {}
        for p in range(s + 1):
            e = (p + 1) * i + r
            if e > N:
                continue
            for m in range(s + 1):
                if denominator is DenominatorRule.POWER_SR:
                    pieces = [(s - r, c4(s, r, p, m))]
                else:
                    pieces = [(k, c4_term(s, r, p, m, k)) for k in range(m + 1)]
                for den, c in pieces:
                    if not c:
                        continue
                    a, b = groups.setdefault(den, ({}, {}))
                    a[e] = a.get(e, 0) + c * i ** (m + 1)
                    b[e] = b.get(e, 0) + c * (r + 1) * i ** m
        for den, (a, b) in sorted(groups.items()):
            num = series_mul(TruncatedSeries.polynomial(a, N), geometric_pow(r, N)) - series_mul(
                TruncatedSeries.polynomial(b, N), geometric_pow(r + 1, N)
            )
            total = total + series_mul(num, geometric_pow_step(i, den, N))
    return total


def sum4_series(s: int, i: int, N: int, v: FormulaVariant) -> TruncatedSeries:
    """The four-index component series in ``q`` for a fixed ``i``."""
    _check_si(s, i)
    return _sum4(s, i, N, v.denominator_rule)


@lru_cache(maxsize=4096)
def _sum8(s: int, i: int, N: int, exponent: ExponentRule) -> TruncatedSeries:
    offset = 1 if exponent is ExponentRule.DEFINITION else 2
    total = TruncatedSeries.zero(N)
    for r in range(s + 1):
        a: dict[int, Fraction] = {}
        b: dict[int, Fraction] = {}
        for p in range(s + 1):
            for n in range(r + 2):
                e = (p + offset) * i + n - 1
                if e > N:
                    continue
                weight = sum((c8(s, r, p, n, w) * i ** w for w in range(s + 1)), Fraction(0))
                if not weight:
                    continue
                a[e] = a.get(e, 0) + binomial_general(r, n) * weight
                b[e] = b.get(e, 0) + binomial_general(r + 1, n) * weight
        if not a and not b:
            continue
        num = series_mul(TruncatedSeries.polynomial(a, N), geometric_pow(r, N)) - series_mul(
            TruncatedSeries.polynomial(b, N), geometric_pow(r + 1, N)
        )
        total = total + series_mul(num, geometric_pow_step(i, s - r, N))
    return total


def sum8_series(s: int, i: int, N: int, v: FormulaVariant) -> TruncatedSeries:
    """The eight-index component series in ``q`` for a fixed ``i``."""
    _check_si(s, i)
    return _sum8(s, i, N, v.exponent_rule)


@lru_cache(maxsize=4096)
def sum_si_oracle(s: int, i: int, N: int) -> TruncatedSeries:
    """``sum_{j=0}^{i-2} q**s D**s[(i-j-1) q**(i+j) / (1 - q**i)]`` by series algebra.

    No coefficient sums are involved.  For ``i = 1`` the sum is empty.
    """
    if s < 0 or i < 1:
        raise ValueError("need s >= 0 and i >= 1")
    inv = geometric_pow_step(i, 0, N)
    total = TruncatedSeries.zero(N)
    for j in range(i - 1):
        term = series_mul(TruncatedSeries.monomial(i + j, N, i - j - 1), inv)
        total = total + q_pow_deriv(s, term)
    return total


def check_domain(value) -> None:
    """Re-raise helper so callers can treat DomainError uniformly."""
    if isinstance(value, DomainError):
        raise value
