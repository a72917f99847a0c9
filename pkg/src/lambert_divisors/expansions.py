"""Series coefficients of the higher derivatives of Lambert series.

Every quantity here has at least two independent evaluations:

* a closed-form finite sum over divisors (works in all alpha-modes), and
* a truncated power series oracle (integer alpha only).

The four- and eight-index coefficients ``S4``/``S8`` additionally have a
binomial-divisor-sum form and a bounded-divisor-sum form.  Nothing in this
module asserts that two evaluations agree; comparisons are returned as data.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Sequence

from .coefficient_sums import (
    DEFINITION_VARIANT,
    CorollaryShift,
    FormulaVariant,
    c4,
    c8,
    c_layer2,
    sum4_series,
    sum8_series,
)
from .divisor_functions import (
    AlphaValue,
    DivisorValue,
    IntegerExp,
    ModeError,
    _accumulate,
    _divs,
    as_alpha,
    mode_zero,
    weighted_sigma,
)
from .exact_arith import (
    binomial_general,
    exact_pow,
    factorial,
    falling_factorial,
    stirling_first_unsigned as cycle,
    stirling_second as subset,
)
from .power_series import (
    TruncatedSeries,
    coefficient,
    geometric_pow,
    geometric_pow_step,
    lambert_sigma_gf,
    q_pow_deriv,
    sequence_series,
    series_mul,
)


class Method(str, Enum):
    CLOSED_FORM = "closed"
    ORACLE_SERIES = "oracle"
    BINOMIAL_SUMS = "binomial"
    BOUNDED_SUMS = "bounded"


def default_method(alpha: AlphaValue) -> Method:
    """Oracle for exact integer alpha, bounded divisor sums otherwise."""
    return Method.ORACLE_SERIES if isinstance(alpha, IntegerExp) else Method.BOUNDED_SUMS


def oracle_order(x: int, s: int) -> int:
    """Truncation order for a coefficient at ``x``: ``x + s + 8`` rounded up to 16.

    Rounding lets neighbouring ``x`` share cached component series.
    """
    n = x + s + 8
    return -(-n // 16) * 16


def _integer_alpha(alpha: AlphaValue) -> int:
    if not isinstance(alpha, IntegerExp):
        raise ModeError("the series oracle needs an exact integer alpha")
    return alpha.value


def _check_x(x: int) -> None:
    if x < 1:
        raise ValueError(f"x must be positive, got {x}")


# --- L, S00, S01 and the general convolution ------------------------------


def _l_weight(s: int, x: int, k: int) -> int:
    return sum(
        binomial_general(s, r) * binomial_general(x - k, s - r) * factorial(s - r) * falling_factorial(k, r)
        for r in range(s + 1)
    )


def _general_weight(s: int, x: int, k: int, m: int) -> Fraction:
    return sum(
        (
            binomial_general(s, r) * binomial_general(x - k + m, s - r + m)
            * Fraction(factorial(s - r + m), factorial(m)) * falling_factorial(k, r)
            for r in range(s + 1)
        ),
        Fraction(0),
    )


def l_coeff(s: int, x: int, alpha) -> DivisorValue:
    """``[q^x] q^s D^s [F_alpha(q) / (1 - q)]`` as a finite divisor sum."""
    alpha = as_alpha(alpha)
    _check_x(x)
    return weighted_sigma(alpha, ((_l_weight(s, x, k), 0, 1, k) for k in range(1, x + 1)))


def _power_weights(alpha: AlphaValue, s: int, x: int, m: int, k_values) -> DivisorValue:
    return _accumulate(alpha, ((k, _general_weight(s, x, k, m), -1) for k in k_values))


def s00_coeff(s: int, x: int, alpha) -> DivisorValue:
    """``[q^x] q^s D^s [sum_{i>=1} i^(alpha-1) q^i / (1 - q)^2]``; ``k`` runs from 1."""
    alpha = as_alpha(alpha)
    _check_x(x)
    return _power_weights(alpha, s, x, 1, range(1, x + 1))


def s01_coeff(s: int, x: int, alpha) -> DivisorValue:
    """``[q^x] q^s D^s [sum_{i>=1} i^(alpha-1) q^i / (1 - q)]``; ``k`` runs from 1."""
    alpha = as_alpha(alpha)
    _check_x(x)
    return _power_weights(alpha, s, x, 0, range(1, x + 1))


def s01_component(s: int, x: int, k: int, alpha) -> DivisorValue:
    """The ``k``-th summand of :func:`s01_coeff`."""
    alpha = as_alpha(alpha)
    return _power_weights(alpha, s, x, 0, [k])


def s_general_coeff(g: Callable[[int], object] | Sequence, m: int, s: int, x: int) -> Fraction:
    """``[q^x] q^s D^s [G(q) / (1 - q)^(m+1)]`` by the binomial convolution formula."""
    if x < 0 or m < 0 or s < 0:
        raise ValueError("need x, m, s >= 0")
    get = g.__getitem__ if isinstance(g, Sequence) else g
    return sum((_general_weight(s, x, k, m) * Fraction(get(k)) for k in range(x + 1)), Fraction(0))


def s_general_oracle(g: Callable[[int], object] | Sequence, m: int, s: int, x: int) -> Fraction:
    """The same coefficient computed by series multiplication and ``q^s D^s``."""
    N = x + s + 8
    if isinstance(g, Sequence):
        g = list(g) + [0] * (N + 1 - len(g))
    series = series_mul(sequence_series(g, N), geometric_pow(m, N))
    return coefficient(q_pow_deriv(s, series), x)


def _power_series(alpha: int, N: int) -> TruncatedSeries:
    return sequence_series(lambda i: exact_pow(i, alpha - 1) if i else 0, N)


def l_oracle(s: int, x: int, alpha) -> Fraction:
    a = _integer_alpha(as_alpha(alpha))
    N = x + s + 8
    return coefficient(q_pow_deriv(s, series_mul(lambert_sigma_gf(a, N), geometric_pow(0, N))), x)


def s00_oracle(s: int, x: int, alpha) -> Fraction:
    a = _integer_alpha(as_alpha(alpha))
    N = x + s + 8
    return coefficient(q_pow_deriv(s, series_mul(_power_series(a, N), geometric_pow(1, N))), x)


def s01_oracle(s: int, x: int, alpha) -> Fraction:
    a = _integer_alpha(as_alpha(alpha))
    N = x + s + 8
    return coefficient(q_pow_deriv(s, series_mul(_power_series(a, N), geometric_pow(0, N))), x)


# --- S4 and S8 ---------------------------------------------------------------


def _oracle_component(series_fn, s: int, x: int, a: int, v: FormulaVariant, order: int | None) -> Fraction:
    N = order if order is not None else oracle_order(x, s)
    if N < x:
        raise ValueError("truncation order below the requested coefficient")
    # the eight-index series can start at q^(i-1), so i runs one past x
    return sum(
        (coefficient(series_fn(s, i, N, v), x) * exact_pow(i, a - 1) for i in range(1, x + 2)),
        Fraction(0),
    )


def _bsum_pairs(K: int, M: int, n: int, weight, shift: int):
    """``(d, weight * C(n/d - M + K, K), shift)`` triples for ``B_{K,M}``."""
    if n <= 0 or not weight:
        return
    bound = n // M
    for d in _divs(n):
        if d > bound:
            break
        b = binomial_general(n // d - M + K, K)
        if b:
            yield d, weight * b, shift


def _s4_binomial_pairs(s: int, x: int, k_values):
    for r in range(s + 1):
        for p in range(s + 1):
            for m in range(s + 1):
                c = c4(s, r, p, m)
                if not c:
                    continue
                for k in k_values:
                    if k > x - r:
                        continue
                    yield from _bsum_pairs(s - r, p + 1, k, binomial_general(x - k, r) * c, m)
                    yield from _bsum_pairs(
                        s - r, p + 1, k, -binomial_general(x + 1 - k, r + 1) * (r + 1) * c, m - 1
                    )


def _s8_binomial_pairs(s: int, x: int, k_values, shift: int):
    for r in range(s + 1):
        for p in range(s + 1):
            for w in range(s + 1):
                for n in range(r + 2):
                    c = c8(s, r, p, n, w)
                    if not c:
                        continue
                    for k in k_values:
                        if k > x + 1 - n:
                            continue
                        weight = (
                            binomial_general(x + 1 - n - k + r, r) * binomial_general(r, n)
                            - binomial_general(x + 2 - n - k + r, r + 1) * binomial_general(r + 1, n)
                        )
                        yield from _bsum_pairs(s - r, p + shift, k, weight * c, w - 1)


def _s4_bounded_terms(s: int, x: int, k_values):
    for k in k_values:
        for p in range(s + 1):
            for u in range(s + 1):
                for m in range(s + 1):
                    c = c_layer2(42, s, x, k, (p, m, u)) - c_layer2(43, s, x, k, (p, m + 1, u))
                    if c:
                        yield c, m - u, p + 1, k
                c = c_layer2(43, s, x, k, (p, 0, u))
                if c:
                    yield -c, -1 - u, p + 1, k


def _s8_bounded_terms(s: int, x: int, k_values, level: int):
    for k in k_values:
        for p in range(s + 1):
            for u in range(s + 1):
                for w in range(s + 1):
                    c = c_layer2(82, s, x, k, (w, p, u), level) - c_layer2(83, s, x, k, (w, p, u), level)
                    if c:
                        yield c, w - 1 - u, p + level, k


def _shift_level(v: FormulaVariant) -> int:
    return 1 if v.corollary_shift is CorollaryShift.P1 else 2


def s4_coeff(
    s: int, x: int, alpha, method: Method | str | None = None,
    v: FormulaVariant = DEFINITION_VARIANT, order: int | None = None,
) -> DivisorValue:
    """Coefficient of ``q^x`` in ``sum_{i>=1} i^(alpha-1) Sigma_4(q, i)``.

    ``ORACLE_SERIES`` reads the variant's denominator rule; the two divisor-sum
    forms are the stated expansions and do not depend on the variant.
    """
    alpha = as_alpha(alpha)
    method = Method(method) if method is not None else default_method(alpha)
    if s < 1:
        raise ValueError("s must be >= 1")
    if x < 1:
        return mode_zero(alpha)
    if method is Method.ORACLE_SERIES:
        return _oracle_component(sum4_series, s, x, _integer_alpha(alpha), v, order)
    if method is Method.BINOMIAL_SUMS:
        return _accumulate(alpha, _s4_binomial_pairs(s, x, range(1, x + 1)))
    if method is Method.BOUNDED_SUMS:
        return weighted_sigma(alpha, _s4_bounded_terms(s, x, range(1, x + 1)))
    raise ModeError(f"method {method.value} does not apply to S4")


def s8_coeff(
    s: int, x: int, alpha, method: Method | str | None = None,
    v: FormulaVariant = DEFINITION_VARIANT, order: int | None = None,
) -> DivisorValue:
    """Coefficient of ``q^x`` in ``sum_{i>=1} i^(alpha-1) Sigma_8(q, i)``.

    ``ORACLE_SERIES`` reads the exponent rule; the divisor-sum forms read the
    corollary shift (``B_{s-r,p+1}`` or ``B_{s-r,p+2}``).
    """
    alpha = as_alpha(alpha)
    method = Method(method) if method is not None else default_method(alpha)
    if s < 1:
        raise ValueError("s must be >= 1")
    if x < 1:
        return mode_zero(alpha)
    level = _shift_level(v)
    if method is Method.ORACLE_SERIES:
        return _oracle_component(sum8_series, s, x, _integer_alpha(alpha), v, order)
    if method is Method.BINOMIAL_SUMS:
        return _accumulate(alpha, _s8_binomial_pairs(s, x, range(1, x + 2), level))
    if method is Method.BOUNDED_SUMS:
        return weighted_sigma(alpha, _s8_bounded_terms(s, x, range(1, x + 2), level))
    raise ModeError(f"method {method.value} does not apply to S8")


def s48(s: int, x: int, alpha, method: Method | str | None = None,
        v: FormulaVariant = DEFINITION_VARIANT, order: int | None = None) -> DivisorValue:
    return s4_coeff(s, x, alpha, method, v, order) + s8_coeff(s, x, alpha, method, v, order)


def s48_component(s: int, x: int, k: int, alpha, method: Method | str = Method.BOUNDED_SUMS,
                  v: FormulaVariant = DEFINITION_VARIANT) -> DivisorValue:
    """``S48`` with the outer sum over ``k`` omitted (divisor-sum forms only)."""
    alpha = as_alpha(alpha)
    method = Method(method)
    level = _shift_level(v)
    if method is Method.BINOMIAL_SUMS:
        return _accumulate(alpha, _s4_binomial_pairs(s, x, [k])) + _accumulate(
            alpha, _s8_binomial_pairs(s, x, [k], level)
        )
    if method is Method.BOUNDED_SUMS:
        return weighted_sigma(alpha, _s4_bounded_terms(s, x, [k])) + weighted_sigma(
            alpha, _s8_bounded_terms(s, x, [k], level)
        )
    raise ModeError("component sums exist only for the divisor-sum methods")


# --- tau / rho and the exact formula ----------------------------------------


def tau_rho(s: int, x: int, k: int, alpha, v: FormulaVariant = DEFINITION_VARIANT,
            method: Method | str = Method.BOUNDED_SUMS) -> tuple[DivisorValue, DivisorValue]:
    """Per-``k`` bracket of the exact formula and its ``k = x`` remainder.

    ``tau = (S01_k + S48_{s,x,k} - S48_{s,x-1,k} + w * S48_{s-1,x-1,k}) / s!``
    with ``w`` from ``v.s_weight(s)``; ``rho = S48_{s,x,x}``.
    """
    alpha = as_alpha(alpha)
    if s < 2:
        raise ValueError("tau/rho need s >= 2")
    if not 1 <= k <= x - 1:
        raise ValueError("tau needs 1 <= k <= x - 1")
    body = (
        s01_component(s, x, k, alpha)
        + s48_component(s, x, k, alpha, method, v)
        - s48_component(s, x - 1, k, alpha, method, v)
        + s48_component(s - 1, x - 1, k, alpha, method, v) * v.s_weight(s)
    )
    tau = body / factorial(s)
    rho = s48_component(s, x, x, alpha, method, v)
    return tau, rho


def rho_exact(s: int, x: int, alpha, v: FormulaVariant = DEFINITION_VARIANT) -> DivisorValue:
    """Everything the exact formula puts on ``k >= x``, divided by ``s!``.

    Unlike ``rho`` above this includes ``S01_x``, the ``x - 1`` and ``s - 1``
    terms and the ``k = x + 1`` tail of the eight-index part, so
    ``sum_{k<x} tau(k) + rho_exact`` reproduces the exact formula.  The
    binomial-sum components are used because their ``k`` cutoffs are sharp.
    """
    alpha = as_alpha(alpha)
    if s < 2:
        raise ValueError("rho needs s >= 2")
    _check_x(x)
    m = Method.BINOMIAL_SUMS
    body = s01_component(s, x, x, alpha)
    for k in (x, x + 1):
        body = (
            body
            + s48_component(s, x, k, alpha, m, v)
            - s48_component(s, x - 1, k, alpha, m, v)
            + s48_component(s - 1, x - 1, k, alpha, m, v) * v.s_weight(s)
        )
    return body / factorial(s)


_F = Fraction


def _tau2_general(k: int) -> list:
    q = _F(1, 4)
    return [
        (q * k * k, -2, 3, k), (q * k * (k - 3), -1, 3, k), (-q * (3 * k - 2), 0, 3, k), (q * 2, 1, 3, k),
        (-q * k * k, -2, 1, k), (q * k * (k - 3), -1, 1, k), (-q * (3 * k - 2), 0, 1, k), (q * 2, 1, 1, k),
    ]


def _rho2_general(x: int) -> list:
    q = _F(1, 4)
    return [
        (q * x * x, -2, 3, x), (q * x * (x - 3), -1, 3, x), (-q * (3 * x - 2), 0, 3, x), (q * 2, 1, 3, x),
        (-q * x * x, -2, 1, x), (q * (2 * x * x + x - 2), 0, 1, x), (-q * x * (x - 3), -1, 1, x),
        (-q * 2, 1, 1, x),
    ]


def _tau2_special(k: int, a: int) -> list:
    # alpha is fixed, so the beta below are absolute orders minus alpha
    q = _F(1, 4)
    if a == 0:
        return [
            (q * (3 * k - 2), 0, 1, k), (-q * (k - 1), 1, 1, k), (-q, 2, 1, k),
            (q * k * k, -2, 3, k), (q * k * (k - 3), -1, 3, k), (-q * (3 * k - 2), 0, 3, k), (q * 2, 1, 3, k),
        ]
    return [
        (q * (3 - k) * k, -1, 1, k), (q * 2 * (k - 1), 0, 1, k), (-q * 2, 1, 1, k),
        (q * k * k, -2, 3, k), (q * (k - 3) * k, -1, 3, k), (-q * (3 * k - 2), 0, 3, k), (q * 2, 1, 3, k),
    ]


def _rho2_special(x: int, a: int) -> list:
    q = _F(1, 4)
    if a == 0:
        return [
            (q * (-2 + x + 2 * x * x), 0, 1, x), (-q * (x - 1), 1, 1, x), (-q, 2, 1, x),
            (q * x * x, -2, 3, x), (q * x * (x - 3), -1, 3, x), (-q * (3 * x - 2), 0, 3, x), (q * 2, 1, 3, x),
        ]
    return [
        (q * (x * x - 1), 0, 1, x), (-q * x * (x - 3), -1, 1, x), (-q * 2, 1, 1, x),
        (q * x * x, -2, 3, x), (q * x * (x - 3), -1, 3, x), (-q * (3 * x - 2), 0, 3, x), (q * 2, 1, 3, x),
    ]


def _tau3(k: int, x: int) -> list:
    return [
        (-_F(1, 6) * k**3, -3, 3, k), (_F(1, 18) * k**3, -3, 4, k),
        (-_F(k * k, 6) + _F(11 * k, 12) - _F(1, 3), 0, 4, k),
        (_F(3 * k * k, 4) + _F(k * (-9 * x - 17), 12) + _F(x, 2), 0, 3, k),
        (_F(k**3, 12) - _F(k * k, 3), -2, 4, k),
        (_F(k**3, 36) - _F(k * k, 2) + _F(11 * k, 18), -1, 4, k),
        (_F(k * k * (x + 2), 4) - _F(k**3, 3), -2, 3, k),
        (-_F(k**3, 6) + _F(k * k * (x + 5), 4) + _F(k * (-9 * x - 4), 12), -1, 3, k),
        (_F(11 * k, 36) - _F(1, 2), 1, 4, k),
        (_F(1, 2), 2, 3, k), (-_F(1, 6), 2, 4, k),
        (_F(x + 1, 2) - _F(13 * k, 12), 1, 3, k),
        (_F(1, 9) * k**3, -3, 1, k),
        (-_F(7 * k * k, 12) + _F(k * (3 * x + 2), 4) + _F(2 - 3 * x, 6), 0, 1, k),
        (_F(k**3, 4) + _F(k * k * (-3 * x - 2), 12), -2, 1, k),
        (_F(5 * k**3, 36) + _F(k * k * (-x - 3), 4) + _F(k * (27 * x - 10), 36), -1, 1, k),
        (-_F(1, 3), 2, 1, k),
        (_F(7 * k, 9) - _F(x, 2), 1, 1, k),
    ]


def _rho3(x: int) -> list:
    return [
        (-_F(1, 6) * x**3, -3, 3, x), (_F(1, 18) * x**3, -3, 4, x),
        (-_F((x - 18) * x * x, 36), -2, 3, x), (_F((x - 4) * x * x, 12), -2, 4, x),
        (_F((x * x + 2 * x - 2) * x, 6), -1, 3, x), (_F((x * x - 18 * x + 22) * x, 36), -1, 4, x),
        (_F((x * x - 9 * x - 29) * x, 36), 0, 3, x), (_F(-2 * x * x + 11 * x - 4, 12), 0, 4, x),
        (-_F((x - 1) * (x + 6), 12), 1, 3, x), (_F(11 * x - 18, 36), 1, 4, x),
        (_F(x + 9, 18), 2, 3, x), (-_F(1, 6), 2, 4, x),
        (_F(1, 9) * x**3, -3, 1, x), (-_F((x + 3) * x * x, 18), -2, 1, x),
        (-_F((7 * x * x - 6 * x + 10) * x, 36), -1, 1, x),
        (_F(5 * x**3 - 3 * x * x + 8 * x + 12, 36), 0, 1, x),
        (_F((3 * x + 4) * x, 36), 1, 1, x), (_F(-x - 6, 18), 2, 1, x),
    ]


def tau_rho_closed(s: int, x: int, k: int, alpha, form: str = "general") -> tuple[DivisorValue, DivisorValue]:
    """The stated polynomial-weighted divisor-sum forms of ``tau`` and ``rho``.

    ``form="general"`` gives the forms valid for any alpha (``s`` = 2 or 3);
    ``form="special"`` gives the ``s = 2`` forms written out for alpha 0 and 1,
    which needs an exact alpha of 0 or 1.
    """
    alpha = as_alpha(alpha)
    if form == "special":
        if s != 2:
            raise ValueError("the special forms exist only for s = 2")
        if not (isinstance(alpha, IntegerExp) and alpha.value in (0, 1)):
            raise ModeError("the special forms are written for alpha = 0 or 1")
        return (
            weighted_sigma(alpha, _tau2_special(k, alpha.value)),
            weighted_sigma(alpha, _rho2_special(x, alpha.value)),
        )
    if form != "general":
        raise ValueError(f"unknown form {form!r}")
    if s == 2:
        return weighted_sigma(alpha, _tau2_general(k)), weighted_sigma(alpha, _rho2_general(x))
    if s == 3:
        return weighted_sigma(alpha, _tau3(k, x)), weighted_sigma(alpha, _rho3(x))
    raise ValueError("closed forms are available for s = 2 and s = 3 only")


def tau_rho_aggregate(s: int, x: int, alpha, form: str = "general") -> DivisorValue:
    """``sum_{k=1}^{x-1} tau(k) + rho(x)`` from the closed forms."""
    alpha = as_alpha(alpha)
    total = tau_rho_closed(s, x, 1, alpha, form)[1]
    for k in range(1, x):
        total = total + tau_rho_closed(s, x, k, alpha, form)[0]
    return total


def binomial_sigma(s: int, x: int, alpha) -> DivisorValue:
    """``C(x, s) * sigma_alpha(x)``."""
    alpha = as_alpha(alpha)
    return weighted_sigma(alpha, [(binomial_general(x, s), 0, 1, x)])


@dataclass(frozen=True)
class ExactFormulaRecord:
    lhs: DivisorValue
    rhs: DivisorValue
    agree: bool


def sigma_via_exact_formula(s: int, x: int, alpha, v: FormulaVariant = DEFINITION_VARIANT,
                            method: Method | str | None = None) -> ExactFormulaRecord:
    """Compare ``C(x,s) sigma_alpha(x)`` with the finite ``S01``/``S48`` combination."""
    alpha = as_alpha(alpha)
    if s < 2:
        raise ValueError("the exact formula needs s >= 2")
    _check_x(x)
    lhs = binomial_sigma(s, x, alpha)
    rhs = (
        s01_coeff(s, x, alpha)
        + s48(s, x, alpha, method, v)
        - s48(s, x - 1, alpha, method, v)
        + s48(s - 1, x - 1, alpha, method, v) * v.s_weight(s)
    ) / factorial(s)
    return ExactFormulaRecord(lhs, rhs, values_equal(lhs, rhs))


def values_equal(a: DivisorValue, b: DivisorValue, rel: float = 1e-9) -> bool:
    if isinstance(a, float) or isinstance(b, float):
        a, b = float(a), float(b)
        return abs(a - b) <= rel * max(1.0, abs(a), abs(b))
    return a == b


@dataclass
class CoefficientBundle:
    s: int
    x: int
    alpha: AlphaValue
    L: DivisorValue
    S00: DivisorValue
    S01: DivisorValue
    S4: DivisorValue
    S8: DivisorValue
    S48: DivisorValue
    variant: FormulaVariant
    method_tags: dict = field(default_factory=dict)
    consistency: dict = field(default_factory=dict)


def coefficient_bundle(s: int, x: int, alpha, v: FormulaVariant = DEFINITION_VARIANT) -> CoefficientBundle:
    """All six coefficients at one point, cross-checked where two methods exist."""
    alpha = as_alpha(alpha)
    exact = isinstance(alpha, IntegerExp)
    tags: dict[str, list[str]] = {}
    agree: dict[str, bool] = {}
    L, S00, S01 = l_coeff(s, x, alpha), s00_coeff(s, x, alpha), s01_coeff(s, x, alpha)
    for name in ("L", "S00", "S01"):
        tags[name] = [Method.CLOSED_FORM.value]
    if exact:
        for name, value, oracle in (("L", L, l_oracle), ("S00", S00, s00_oracle), ("S01", S01, s01_oracle)):
            tags[name].append(Method.ORACLE_SERIES.value)
            agree[name] = value == oracle(s, x, alpha)
    S4 = s4_coeff(s, x, alpha, Method.BOUNDED_SUMS, v)
    S8 = s8_coeff(s, x, alpha, Method.BOUNDED_SUMS, v)
    tags["S4"] = [Method.BOUNDED_SUMS.value]
    tags["S8"] = [Method.BOUNDED_SUMS.value]
    if exact:
        for name, value, fn in (("S4", S4, s4_coeff), ("S8", S8, s8_coeff)):
            tags[name].append(Method.ORACLE_SERIES.value)
            agree[name] = value == fn(s, x, alpha, Method.ORACLE_SERIES, v)
    return CoefficientBundle(s, x, alpha, L, S00, S01, S4, S8, S4 + S8, v, tags, agree)


# --- Stirling-number expansions of q^s D^s [q^i / (1 - q^i)] ----------------

_DERIVATIVE_FORMS = ("i", "ii", "i-corrected", "ii-corrected")


def stirling_derivative_series(s: int, i: int, N: int, form: str = "i") -> TruncatedSeries:
    """Right-hand sides of the Stirling expansions of ``q^s D^s [q^i/(1-q^i)]``.

    ``"i"`` and ``"ii"`` are the stated single- and double-sum forms.
    ``"i-corrected"`` restores the ``q^i`` numerator of the single-sum form;
    ``"ii-corrected"`` puts every term of the double-sum form over
    ``(1 - q^i)^(s+1)``.
    """
    if form not in _DERIVATIVE_FORMS:
        raise ValueError(f"unknown form {form!r}")
    if s < 0 or i < 1:
        raise ValueError("need s >= 0 and i >= 1")
    total = TruncatedSeries.zero(N)
    for m in range(s + 1):
        for k in range(m + 1):
            c = cycle(s, m) * subset(m, k) * factorial(k) * i**m
            if not c:
                continue
            sign = -1 if (s - k) % 2 else 1
            if form in ("i", "i-corrected"):
                num = TruncatedSeries.monomial(i if form == "i-corrected" else 0, N, sign * c)
                total = total + series_mul(num, geometric_pow_step(i, k, N))
                continue
            den = k if form == "ii" else s
            for r in range(s - k + 1):
                e = (r + 1) * i
                if e > N:
                    break
                w = binomial_general(s - k, r) * (-1 if (s - k - r) % 2 else 1) * c
                total = total + series_mul(TruncatedSeries.monomial(e, N, w), geometric_pow_step(i, den, N))
    return total


def lambert_derivative_oracle(s: int, i: int, N: int) -> TruncatedSeries:
    """``q^s D^s [q^i / (1 - q^i)]`` by series algebra alone."""
    return q_pow_deriv(s, series_mul(TruncatedSeries.monomial(i, N), geometric_pow_step(i, 0, N)))
