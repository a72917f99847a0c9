"""Identity catalog, parameter grids and verification reports.

Each catalog entry evaluates a left- and right-hand side at one grid point
with exact arithmetic.  :func:`verify` sweeps a grid in lexicographic order,
turning arithmetic domain errors into skipped points and inequalities into
counterexamples.  Nothing is asserted; the verdict is data.
"""
from __future__ import annotations

import json
import random
import re
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterator

from .coefficient_sums import (
    FormulaVariant,
    structural_variants,
    sum4_series,
    sum8_series,
    sum_si_oracle,
)
from .divisor_functions import (
    ModeError,
    PowerSum,
    _accumulate,
    as_alpha,
    binomial_divisor_sum,
    render_powersum,
    sigma,
    sigma_bounded,
    weighted_sigma,
)
from .exact_arith import DomainError, binomial_general, exact_pow, factorial, falling_factorial
from .expansions import (
    Method,
    binomial_sigma,
    l_coeff,
    l_oracle,
    lambert_derivative_oracle,
    s00_coeff,
    s00_oracle,
    s01_coeff,
    s01_oracle,
    s4_coeff,
    s8_coeff,
    s_general_coeff,
    s_general_oracle,
    sigma_via_exact_formula,
    stirling_derivative_series,
    tau_rho_aggregate,
    values_equal,
)
from .power_series import (
    TruncatedSeries,
    coefficient,
    geometric_pow_step,
    lambert_term,
    nth_derivative,
    one_minus_q_pow,
    series_mul,
)


class GridError(ValueError):
    """Malformed grid text or a grid larger than its cap."""


# --- parameter grids ---------------------------------------------------------

_NAME = re.compile(r"^[a-zA-Z_]\w*$")
_BOUND = re.compile(r"^(?:(-?\d+)|([a-zA-Z_]\w*)([+-]\d+)?)$")


def _parse_bound(text: str):
    m = _BOUND.match(text.strip())
    if not m:
        raise GridError(f"bad range bound {text!r}")
    if m.group(1) is not None:
        return int(m.group(1))
    return (m.group(2), int(m.group(3) or 0))


def _bound_text(b) -> str:
    if isinstance(b, int):
        return str(b)
    name, off = b
    return name if not off else f"{name}{off:+d}"


def _scalar(text: str):
    text = text.strip()
    if not text:
        raise GridError("empty grid value")
    try:
        return int(text)
    except ValueError:
        return text


@dataclass(frozen=True)
class ParameterGrid:
    """Ordered dimensions; each is a union of scalar values and ``lo..hi`` ranges.

    Range bounds may name an earlier dimension (``n=p..12``).  Iteration is
    lexicographic in dimension order.
    """

    dims: tuple = ()
    cap: int = 200_000

    @classmethod
    def parse(cls, spec: str, cap: int = 200_000) -> "ParameterGrid":
        dims = []
        seen = set()
        for part in filter(None, (p.strip() for p in spec.split(","))):
            name, sep, body = part.partition("=")
            name = name.strip()
            if not sep or not _NAME.match(name):
                raise GridError(f"bad grid entry {part!r}; expected name=lo..hi")
            if name in seen:
                raise GridError(f"duplicate grid dimension {name!r}")
            seen.add(name)
            items = []
            for alt in body.split("|"):
                if ".." in alt:
                    lo, _, hi = alt.partition("..")
                    items.append(("range", _parse_bound(lo), _parse_bound(hi)))
                else:
                    items.append(("value", _scalar(alt)))
            dims.append((name, tuple(items)))
        for i, (name, items) in enumerate(dims):
            earlier = {d for d, _ in dims[:i]}
            for item in items:
                if item[0] == "range":
                    for b in item[1:]:
                        if not isinstance(b, int) and b[0] not in earlier:
                            raise GridError(f"range for {name!r} refers to unknown or later dimension {b[0]!r}")
        return cls(tuple(dims), cap)

    @property
    def names(self) -> list[str]:
        return [n for n, _ in self.dims]

    def merged(self, other: "ParameterGrid") -> "ParameterGrid":
        """Dimensions of ``other`` replace same-named ones here; new ones are appended."""
        replacement = dict(other.dims)
        dims = [(n, replacement.pop(n, items)) for n, items in self.dims]
        dims.extend((n, items) for n, items in other.dims if n in replacement)
        return ParameterGrid(tuple(dims), min(self.cap, other.cap))

    def with_dim(self, name: str, values) -> "ParameterGrid":
        return ParameterGrid(self.dims + ((name, tuple(("value", v) for v in values)),), self.cap)

    def _values(self, items, env) -> list:
        out = []
        for item in items:
            if item[0] == "value":
                out.append(item[1])
                continue
            lo, hi = (b if isinstance(b, int) else env[b[0]] + b[1] for b in item[1:])
            out.extend(range(lo, hi + 1))
        return out

    def points(self) -> Iterator[dict]:
        count = 0

        def walk(i, env):
            nonlocal count
            if i == len(self.dims):
                count += 1
                if count > self.cap:
                    raise GridError(f"grid exceeds its cap of {self.cap} points")
                yield dict(env)
                return
            name, items = self.dims[i]
            for value in self._values(items, env):
                env[name] = value
                yield from walk(i + 1, env)
            env.pop(name, None)

        yield from walk(0, {})

    def size(self) -> int:
        return sum(1 for _ in self.points())

    def to_dict(self) -> dict:
        return {
            name: "|".join(
                str(it[1]) if it[0] == "value" else f"{_bound_text(it[1])}..{_bound_text(it[2])}"
                for it in items
            )
            for name, items in self.dims
        }

    def spec(self) -> str:
        return ",".join(f"{k}={v}" for k, v in self.to_dict().items())


# --- reports -----------------------------------------------------------------


def render_value(value) -> str:
    if isinstance(value, PowerSum):
        return render_powersum(value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


@dataclass(frozen=True)
class Counterexample:
    params: dict
    lhs: str
    rhs: str
    difference: str

    def to_dict(self) -> dict:
        return {"params": dict(self.params), "lhs": self.lhs, "rhs": self.rhs, "difference": self.difference}


@dataclass
class VerificationReport:
    identity: str
    citation: str
    variant: dict
    grid: dict
    verdict: str
    points_checked: int
    skipped: int
    counterexamples: list
    elapsed_ms: float | None
    details: dict = field(default_factory=dict, compare=False)

    def to_dict(self) -> dict:
        return {
            "identity": self.identity,
            "citation": self.citation,
            "variant": self.variant,
            "grid": self.grid,
            "verdict": self.verdict,
            "points_checked": self.points_checked,
            "skipped": self.skipped,
            "counterexamples": [c.to_dict() for c in self.counterexamples],
            "elapsed_ms": self.elapsed_ms,
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    def summary(self) -> str:
        text = f"{self.identity}: {self.verdict} ({self.points_checked} points"
        if self.skipped:
            text += f", {self.skipped} skipped"
        if self.counterexamples:
            text += f", {len(self.counterexamples)} counterexamples shown"
        text += ")"
        witness = self.details.get("witness")
        if witness is not None:
            text += f" witness {witness}"
        return text


def reports_to_json(reports: list[VerificationReport], indent: int | None = 2) -> str:
    return json.dumps([r.to_dict() for r in reports], indent=indent)


def verdict_of(passed: int, failed: int, skipped: int) -> str:
    if skipped and not passed and not failed:
        return "skip"
    if not failed and not skipped:
        return "pass"
    if failed and not passed:
        return "fail"
    return "mixed"


# --- catalog -----------------------------------------------------------------


Evaluator = Callable[[dict, FormulaVariant], tuple]


@dataclass(frozen=True)
class Identity:
    id: str
    citation: str
    default_grid: str
    evaluate: Evaluator
    uses_variant: bool = False
    first_principles: bool = False
    witness: bool = False

    def grid(self) -> ParameterGrid:
        return ParameterGrid.parse(self.default_grid)


def _alpha(pt):
    return as_alpha(pt.get("alpha", "a"))


def _clear(series: TruncatedSeries, e: int, step: int = 1) -> TruncatedSeries:
    return series_mul(series, one_minus_q_pow(e, series.order, step))


# first principles


def _telescoping(pt, v):
    a, n = _alpha(pt), pt["n"]
    terms = []
    for k in range(1, n + 1):
        terms += [(1, -1, 2, k), (1, 0, 1, k), (-1, -1, 1, k), (-1, 0, 1, k - 1)]
    rhs = weighted_sigma(a, terms) + _accumulate(a, ((k, 1, -1) for k in range(1, n + 1)))
    return sigma(a, n), rhs


def _lemma31(pt, v):
    i, N = pt["i"], pt["N"]
    lhs = geometric_pow_step(i, 0, N)
    inner = TruncatedSeries.polynomial({j: i - 1 - j for j in range(i - 1)}, N)
    rhs = (geometric_pow_step(1, 0, N) + series_mul(series_mul(inner, one_minus_q_pow(1, N)), lhs)) * Fraction(1, i)
    return _clear(lhs, 1, i), _clear(rhs, 1, i)


def _lemma32(form):
    def evaluate(pt, v):
        s, i, N = pt["s"], pt["i"], pt["N"]
        e = s + 1
        return (
            _clear(lambert_derivative_oracle(s, i, N), e, i),
            _clear(stirling_derivative_series(s, i, N, form), e, i),
        )

    return evaluate


def _ff_ratio(num_n: int, p: int, den: int) -> Fraction:
    """``num_n! / ((num_n - p - 1)! * den)`` read as a falling factorial over ``den``."""
    if den == 0:
        raise DomainError("zero denominator")
    return Fraction(falling_factorial(num_n, p + 1), den)


def utility_sum_numerator(p: int, n: int, shifted: bool, N: int) -> TruncatedSeries:
    """Numerator over ``(1-q)^(p+1)`` of the finite falling-factorial power sums."""
    lead = p - 1 if shifted else p
    top = n + 2 if shifted else n + 1
    terms = {lead: Fraction(factorial(p))}
    for k in range(p + 1):
        c = binomial_general(p, k) * (-1 if (k + 1) % 2 else 1) * _ff_ratio(top, p, top - p + k)
        terms[n + k + 1] = terms.get(n + k + 1, 0) + c
    return TruncatedSeries.polynomial(terms, N)


def _lemma33(shifted):
    def evaluate(pt, v):
        p, n = pt["p"], pt["n"]
        N = n + p + 8
        lhs = TruncatedSeries.polynomial(
            {j: falling_factorial(j + 1 if shifted else j, p) for j in range(n + 1)}, N
        )
        return _clear(lhs, p + 1), utility_sum_numerator(p, n, shifted, N)

    return evaluate


def recurrence_sum_numerator(which: int, p: int, n: int, N: int) -> TruncatedSeries:
    """Numerator over ``(1-q)^(p+1)`` of the two sums compared by the recurrence.

    ``which=1``: the stated closed form ``sum_k (-1)^(p-k+1) q^(n+1+p-k)
    (n+1)!/((n-p)!(n+1-k))``; ``which=2``: the partial sum minus its limit.
    """
    if which == 1:
        terms = {}
        for k in range(p + 1):
            e = n + 1 + p - k
            terms[e] = terms.get(e, 0) + (-1 if (p - k + 1) % 2 else 1) * _ff_ratio(n + 1, p, n + 1 - k)
        return TruncatedSeries.polynomial(terms, N)
    if which == 2:
        partial = TruncatedSeries.polynomial({j: falling_factorial(j, p) for j in range(n + 1)}, N)
        return _clear(partial, p + 1) - TruncatedSeries.monomial(p, N, factorial(p))
    raise ValueError("which must be 1 or 2")


def _recurrence(pt, v):
    t, p, n = pt["sum"], pt["p"], pt["n"]
    N = n + 2 * p + 12
    f0, f1, f2 = (recurrence_sum_numerator(t, p + d, n, N) for d in range(3))
    # multiply through by (1-q)^(p+3)
    a = TruncatedSeries.polynomial({1: n * (p + 1) - p * (p + 1)}, N)
    b = TruncatedSeries.polynomial({0: p - n, 1: n - 2 - 2 * p}, N)
    c = one_minus_q_pow(1, N)
    lhs = series_mul(series_mul(a, f0), one_minus_q_pow(2, N)) + series_mul(series_mul(b, f1), c) + series_mul(c, f2)
    return lhs, TruncatedSeries.zero(N)


def _lemma34(closed, oracle):
    def evaluate(pt, v):
        return closed(pt["s"], pt["x"], _alpha(pt)), oracle(pt["s"], pt["x"], _alpha(pt))

    return evaluate


def general_instance(seed: int) -> tuple:
    """Deterministic random ``(g, m, s, x)`` for the general coefficient formula."""
    rng = random.Random(seed)
    x = rng.randint(0, 14)
    return [rng.randint(-2, 2) for _ in range(x + 1)], rng.randint(0, 3), rng.randint(0, 4), x


def _lemma34_general(pt, v):
    g, m, s, x = general_instance(pt["seed"])
    return s_general_coeff(g, m, s, x), s_general_oracle(g, m, s, x)


@lru_cache(maxsize=256)
def _lambert_series(alpha: int, m: int, k: int, N: int) -> TruncatedSeries:
    return lambert_term(lambda i: exact_pow(i, alpha), m, k, N)


def _eq13(pt, v):
    a = _alpha(pt)
    if not hasattr(a, "value") or isinstance(a.value, float):
        raise ModeError("the Lambert series oracle needs an exact integer alpha")
    n = pt["n"]
    N = max(60, n)
    return (
        binomial_divisor_sum(a, pt["k"], pt["m"], n),
        coefficient(_lambert_series(a.value, pt["m"], pt["k"], N), n),
    )


def random_series(seed: int, order: int = 20) -> TruncatedSeries:
    rng = random.Random(seed)
    return TruncatedSeries([Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(order + 1)], order)


def _deriv_product(pt, v):
    f, j = random_series(pt["seed"]), pt["j"]
    one_minus = one_minus_q_pow(1, f.order)
    lhs = nth_derivative(series_mul(one_minus, f), j)
    rhs = series_mul(one_minus, nth_derivative(f, j)) - nth_derivative(f, j - 1) * j
    return lhs, rhs


def _bounded_m1(pt, v):
    a, n = _alpha(pt), pt["n"]
    return sigma_bounded(a, 1, n), sigma(a, n)


def _bounded_m2(pt, v):
    a, n = _alpha(pt), pt["n"]
    return sigma_bounded(a, 2, n), sigma(a, n) - _accumulate(a, [(n, 1, 0)])


def _negative_order(pt, v):
    b, n = pt["beta"], pt["n"]
    return sigma(-b, n) * n**b, sigma(b, n)


def _negative_bounded(pt, v):
    b, m, n = pt["beta"], pt["m"], pt["n"]
    return sigma_bounded(-b, m, n), sigma_bounded(b, m, n) / n**b


def _eisenstein3(pt, v):
    n = pt["n"]
    conv = sum((sigma(1, k) * sigma(1, n - k) for k in range(1, n)), Fraction(0))
    return sigma(3, n), Fraction(1, 5) * (6 * n * sigma(1, n) - sigma(1, n) + 12 * conv)


def _eisenstein5(pt, v):
    n = pt["n"]
    conv = sum((sigma(1, k) * sigma(3, n - k) for k in range(1, n)), Fraction(0))
    return sigma(5, n), Fraction(1, 21) * (10 * (3 * n - 1) * sigma(3, n) + sigma(1, n) + 240 * conv)


# derived


def _sum_si(pt, v):
    s, i, N = pt["s"], pt["i"], pt["N"]
    return sum_si_oracle(s, i, N), sum4_series(s, i, N, v) + sum8_series(s, i, N, v)


def _prop24(pt, v):
    s, x, a = pt["s"], pt["x"], _alpha(pt)
    return l_coeff(s, x, a), s00_coeff(s, x, a) + s4_coeff(s, x, a, None, v) + s8_coeff(s, x, a, None, v)


def _component(fn, method):
    def evaluate(pt, v):
        s, x, a = pt["s"], pt["x"], _alpha(pt)
        return fn(s, x, a, Method.ORACLE_SERIES, v), fn(s, x, a, method, v)

    return evaluate


def _cor27(pt, v):
    rec = sigma_via_exact_formula(pt["s"], pt["x"], _alpha(pt), v)
    return rec.lhs, rec.rhs


def _aggregate(s, form, alpha=None):
    def evaluate(pt, v):
        a = as_alpha(alpha) if alpha is not None else _alpha(pt)
        return binomial_sigma(s, pt["x"], a), tau_rho_aggregate(s, pt["x"], a, form)

    return evaluate


_CATALOG: tuple[Identity, ...] = (
    Identity(
        "telescoping-sigma",
        "sigma_a(n) = sum_{k=1}^n [k^(a-1) + sigma_{a-1,2}(k) + sigma_a(k) - sigma_{a-1}(k) - sigma_a(k-1)]; "
        "the telescoping identity obtained from the first-order Lambert series split",
        "alpha=a,n=1..100", _telescoping, first_principles=True,
    ),
    Identity(
        "lemma-3.1",
        "1/(1-q^i) = (1/i)(1/(1-q) + sum_{j=0}^{i-2} (i-1-j) q^j (1-q)/(1-q^i)) for i >= 2; "
        "both sides multiplied by (1-q^i)",
        "i=2..8,N=60", _lemma31, first_principles=True,
    ),
    Identity(
        "lemma-3.2-i",
        "q^s D^s[q^i/(1-q^i)] = sum_{m,k} [s,m]{m,k} (-1)^(s-k) k! i^m / (1-q^i)^(k+1), as stated; "
        "both sides multiplied by (1-q^i)^(s+1)",
        "s=0..5,i=1..6,N=60", _lemma32("i"), first_principles=True,
    ),
    Identity(
        "lemma-3.2-ii",
        "q^s D^s[q^i/(1-q^i)] = sum_r (sum_{m,k} [s,m]{m,k} C(s-k,r) (-1)^(s-k-r) k! i^m / (1-q^i)^(k+1)) q^((r+1)i), "
        "as stated; both sides multiplied by (1-q^i)^(s+1)",
        "s=0..5,i=1..6,N=60", _lemma32("ii"), first_principles=True,
    ),
    Identity(
        "lemma-3.3-i",
        "sum_{j=0}^n j!/(j-p)! q^j = (p! q^p + sum_k C(p,k) (-1)^(k+1) (n+1)! q^(n+k+1) / ((n-p)!(n+1-p+k))) / (1-q)^(p+1); "
        "compared after multiplying by (1-q)^(p+1)",
        "p=1..6,n=p..12", _lemma33(False), first_principles=True,
    ),
    Identity(
        "lemma-3.3-ii",
        "sum_{j=0}^n (j+1)!/(j+1-p)! q^j = (p! q^(p-1) + sum_k C(p,k) (-1)^(k+1) (n+2)! q^(n+k+1) / ((n+1-p)!(n+2-p+k))) / (1-q)^(p+1); "
        "compared after multiplying by (1-q)^(p+1)",
        "p=1..6,n=p..12", _lemma33(True), first_principles=True,
    ),
    Identity(
        "lemma-3.3-recurrence",
        "(n(p+1)q - p(p+1)q) S_{p,n} + (n(q-1) + p - 2q - 2pq) S_{p+1,n} + (1-q) S_{p+2,n} = 0 "
        "for sum=1 (stated closed form) and sum=2 (partial sum minus its limit); multiplied by (1-q)^(p+3)",
        "sum=1|2,p=1..6,n=p..12", _recurrence, first_principles=True,
    ),
    Identity(
        "lemma-3.4-i",
        "[q^x] q^s D^s[F_a(q)/(1-q)] = sum_{r,k} C(s,r) C(x-k,s-r) (s-r)! k!/(k-r)! sigma_a(k)",
        "s=0..4,x=1..30,alpha=0..3", _lemma34(l_coeff, l_oracle), first_principles=True,
    ),
    Identity(
        "lemma-3.4-ii",
        "[q^x] q^s D^s[sum_i i^(a-1) q^i/(1-q)^2] = sum_{r,k>=1} C(s,r) C(x-k+1,s-r+1) (s-r+1)! k^(a-1) k!/(k-r)!",
        "s=0..4,x=1..30,alpha=0..3", _lemma34(s00_coeff, s00_oracle), first_principles=True,
    ),
    Identity(
        "lemma-3.4-iii",
        "[q^x] q^s D^s[sum_i i^(a-1) q^i/(1-q)] = sum_{r,k>=1} C(s,r) C(x-k,s-r) (s-r)! k^(a-1) k!/(k-r)!",
        "s=0..4,x=1..30,alpha=0..3", _lemma34(s01_coeff, s01_oracle), first_principles=True,
    ),
    Identity(
        "lemma-3.4-iv",
        "[q^x] q^s D^s[G(q)/(1-q)^(m+1)] = sum_{r,k} C(s,r) C(x-k+m,s-r+m) (s-r+m)!/m! k!/(k-r)! g_k "
        "on seeded random (g, m, s, x)",
        "seed=0..49", _lemma34_general, first_principles=True,
    ),
    Identity(
        "eq-1.3",
        "[q^n] sum_i i^a q^(mi)/(1-q^i)^(k+1) = B_{k,m}(a; n) = sum_{d|n, d<=n/m} C(n/d-m+k, k) d^a",
        "alpha=0..3,m=1..4,k=0..4,n=1..60", _eq13, first_principles=True,
    ),
    Identity(
        "deriv-product-1mq",
        "D^j[(1-q) f] = (1-q) f^(j) - j f^(j-1) on seeded random series of order 20",
        "seed=0..19,j=1..4", _deriv_product, first_principles=True,
    ),
    Identity(
        "sum-si-decomposition",
        "sum_{j=0}^{i-2} q^s D^s[(i-j-1) q^(i+j)/(1-q^i)] = Sigma_4(q,i) + Sigma_8(q,i)",
        "s=1..3,i=2..6,N=24", _sum_si, uses_variant=True,
    ),
    Identity(
        "prop-2.4",
        "L_{s,x} = S00_{s,x} + S4_{s,x} + S8_{s,x} (coefficients of q^s D^s[F_a(q)/(1-q)])",
        "s=1..3,x=1..20,alpha=0..2|a", _prop24, uses_variant=True,
    ),
    Identity(
        "cor-2.5-S4",
        "S4_{s,x} as a double sum of binomial divisor sums B_{s-r,p+1}",
        "s=1..3,x=1..20,alpha=0..2", _component(s4_coeff, Method.BINOMIAL_SUMS), uses_variant=True,
    ),
    Identity(
        "cor-2.5-S8",
        "S8_{s,x} as a multiple sum of binomial divisor sums B_{s-r,p+shift}",
        "s=1..3,x=1..20,alpha=0..2", _component(s8_coeff, Method.BINOMIAL_SUMS), uses_variant=True,
    ),
    Identity(
        "thm-2.6-S4",
        "S4_{s,x} as sums of bounded divisor functions sigma_{m+a-u,p+1}(k) with second-layer coefficients",
        "s=1..3,x=1..20,alpha=0..2", _component(s4_coeff, Method.BOUNDED_SUMS), uses_variant=True,
    ),
    Identity(
        "thm-2.6-S8",
        "S8_{s,x} as sums of bounded divisor functions sigma_{w+a-1-u,p+shift}(k) with second-layer coefficients",
        "s=1..3,x=1..20,alpha=0..2", _component(s8_coeff, Method.BOUNDED_SUMS), uses_variant=True,
    ),
    Identity(
        "cor-2.7",
        "C(x,s) sigma_a(x) = (S01_{s,x} + S48_{s,x} - S48_{s,x-1} + w S48_{s-1,x-1}) / s!, w per s_factor",
        "s=2..3,x=1..20,alpha=0..2|a", _cor27, uses_variant=True,
    ),
    Identity(
        "example-2.8-d",
        "C(x,2) d(x) = sum_{k<x} tau(k) + rho(x) with the alpha = 0 closed forms",
        "x=1..20", _aggregate(2, "special", 0),
    ),
    Identity(
        "example-2.8-sigma",
        "C(x,2) sigma(x) = sum_{k<x} tau(k) + rho(x) with the alpha = 1 closed forms",
        "x=1..20", _aggregate(2, "special", 1),
    ),
    Identity(
        "eq-2.8-s2",
        "C(x,2) sigma_a(x) = sum_{k<x} tau(k) + rho(x) with the general-alpha s = 2 closed forms",
        "x=1..20,alpha=0..2|a", _aggregate(2, "general"),
    ),
    Identity(
        "eq-2.9-s3",
        "C(x,3) sigma_a(x) = sum_{k<x} tau(k) + rho(x) with the general-alpha s = 3 closed forms",
        "x=1..20,alpha=0..2|a", _aggregate(3, "general"),
    ),
    Identity(
        "sigma-bounded-m1",
        "sigma_{a,1}(n) = sigma_a(n)",
        "alpha=a,n=1..500", _bounded_m1, first_principles=True,
    ),
    Identity(
        "sigma-bounded-m2",
        "sigma_{a,2}(n) = sigma_a(n) - n^a",
        "alpha=a,n=1..500", _bounded_m2, first_principles=True,
    ),
    Identity(
        "negative-order",
        "sigma_{-b}(n) n^b = sigma_b(n)",
        "beta=1..3,n=1..200", _negative_order, first_principles=True,
    ),
    Identity(
        "negative-order-bounded-witness",
        "some (n, m >= 2, b) has sigma_{-b,m}(n) != sigma_{b,m}(n)/n^b (the negative-order identity "
        "does not carry over to bounded divisors)",
        "m=2..4,beta=1..3,n=1..30", _negative_bounded, first_principles=True, witness=True,
    ),
    Identity(
        "eisenstein-sigma3",
        "sigma_3(n) = (6n sigma_1(n) - sigma_1(n) + 12 sum_{k<n} sigma_1(k) sigma_1(n-k)) / 5",
        "n=1..40", _eisenstein3, first_principles=True,
    ),
    Identity(
        "eisenstein-sigma5",
        "sigma_5(n) = (10(3n-1) sigma_3(n) + sigma_1(n) + 240 sum_{k<n} sigma_1(k) sigma_3(n-k)) / 21",
        "n=1..40", _eisenstein5, first_principles=True,
    ),
)

CATALOG: dict[str, Identity] = {ident.id: ident for ident in _CATALOG}
FIRST_PRINCIPLES = tuple(i.id for i in _CATALOG if i.first_principles and not i.witness)
DERIVED = (
    "sum-si-decomposition", "prop-2.4", "cor-2.5-S4", "cor-2.5-S8", "thm-2.6-S4", "thm-2.6-S8",
    "cor-2.7", "example-2.8-d", "example-2.8-sigma", "eq-2.8-s2", "eq-2.9-s3",
)


def list_identities() -> list[tuple[str, str, str]]:
    return [(i.id, i.citation, i.default_grid) for i in _CATALOG]


def get_identity(identity_id: str) -> Identity:
    try:
        return CATALOG[identity_id]
    except KeyError:
        raise KeyError(f"unknown identity {identity_id!r}") from None


# --- variant resolution ------------------------------------------------------

RESOLUTION_IDS = ("prop-2.4", "sum-si-decomposition", "cor-2.5-S8")
RESOLUTION_GRIDS = {
    "prop-2.4": "s=1..3,x=1..15,alpha=0..2",
    "sum-si-decomposition": "s=1..3,i=2..6,N=20",
    "cor-2.5-S8": "s=1..3,x=1..15,alpha=0..2",
}


@dataclass(frozen=True)
class Resolution:
    chosen: FormulaVariant | None
    evidence: dict

    @property
    def resolved(self) -> bool:
        return self.chosen is not None

    def to_dict(self) -> dict:
        return {
            "chosen": self.chosen.to_dict() if self.chosen else "unresolved",
            "evidence": self.evidence,
        }


def resolve_variant(grids: dict[str, str] | None = None) -> Resolution:
    """Sweep every exponent/denominator/shift combination over the resolution grids.

    The evidence lists ``[passed, points]`` per identity and variant; the choice
    is the unique combination that passes everything, else ``None``.
    """
    grids = dict(RESOLUTION_GRIDS, **(grids or {}))
    evidence = {}
    winners = []
    for variant in structural_variants():
        row = {}
        all_pass = True
        for ident in RESOLUTION_IDS:
            report = verify(ident, ParameterGrid.parse(grids[ident]), variant, max_counterexamples=0)
            passed = report.points_checked - report.skipped - report.details["failed"]
            row[ident] = [passed, report.points_checked]
            all_pass &= report.verdict == "pass"
        evidence[variant.label()] = row
        if all_pass:
            winners.append(variant)
    return Resolution(winners[0] if len(winners) == 1 else None, evidence)


@lru_cache(maxsize=1)
def auto_resolution() -> Resolution:
    """:func:`resolve_variant` on the default grids, computed once per process."""
    return resolve_variant()


# --- verification ------------------------------------------------------------


def _evaluate_point(ident: Identity, pt: dict, v: FormulaVariant):
    """``(lhs, rhs)`` or ``None`` for a skipped point."""
    try:
        return ident.evaluate(pt, v)
    except (DomainError, ModeError, ZeroDivisionError):
        return None


def _difference(lhs, rhs):
    try:
        return lhs - rhs
    except TypeError:
        return float(lhs) - float(rhs)


def _equal(lhs, rhs) -> bool:
    if isinstance(lhs, TruncatedSeries) or isinstance(rhs, TruncatedSeries):
        return lhs == rhs
    return values_equal(lhs, rhs)


def verify(
    identity_id: str,
    grid: ParameterGrid | str | None = None,
    variant: FormulaVariant | str | None = "auto",
    max_counterexamples: int = 10,
    deterministic: bool = False,
) -> VerificationReport:
    """Evaluate one identity over a grid.

    ``grid`` overrides the identity's default grid dimension by dimension.
    ``variant`` is a :class:`FormulaVariant`, a preset/field string, or
    ``"auto"``; an unresolved auto variant adds a ``variant`` grid dimension
    covering every combination.
    """
    ident = get_identity(identity_id)
    base = ident.grid()
    if grid is not None:
        base = base.merged(ParameterGrid.parse(grid) if isinstance(grid, str) else grid)
    started = time.perf_counter()

    variants: dict[str, FormulaVariant] = {}
    if not ident.uses_variant:
        chosen = FormulaVariant()
        variant_info = {"source": "not used"}
    elif isinstance(variant, FormulaVariant):
        chosen = variant
        variant_info = dict(variant.to_dict(), source="explicit")
    elif variant is None or variant == "auto":
        resolution = auto_resolution()
        if resolution.resolved:
            chosen = resolution.chosen
            variant_info = dict(chosen.to_dict(), source="auto")
        else:
            chosen = None
            variants = {v.label(): v for v in structural_variants()}
            base = base.with_dim("variant", list(variants))
            variant_info = {"source": "auto", "status": "unresolved"}
    else:
        chosen = FormulaVariant.parse(variant)
        variant_info = dict(chosen.to_dict(), source="explicit")

    passed = failed = skipped = 0
    counterexamples: list[Counterexample] = []
    details: dict = {}
    for pt in base.points():
        v = variants[pt["variant"]] if variants else chosen
        values = _evaluate_point(ident, pt, v)
        if values is None:
            skipped += 1
            continue
        lhs, rhs = values
        if _equal(lhs, rhs):
            passed += 1
            continue
        failed += 1
        if ident.witness:
            details["witness"] = dict(pt)
            break
        if len(counterexamples) < max_counterexamples:
            counterexamples.append(
                Counterexample(dict(pt), render_value(lhs), render_value(rhs), render_value(_difference(lhs, rhs)))
            )

    if ident.witness:
        found = "witness" in details
        verdict = "pass" if found else ("skip" if skipped and not passed else "fail")
    else:
        verdict = verdict_of(passed, failed, skipped)
    details.update(passed=passed, failed=failed)
    elapsed = None if deterministic else round((time.perf_counter() - started) * 1000, 3)
    return VerificationReport(
        identity=ident.id,
        citation=ident.citation,
        variant=variant_info,
        grid=base.to_dict(),
        verdict=verdict,
        points_checked=passed + failed + skipped,
        skipped=skipped,
        counterexamples=counterexamples,
        elapsed_ms=elapsed,
        details=details,
    )


def verify_all(variant="auto", deterministic: bool = False, ids=None) -> list[VerificationReport]:
    return [verify(i, None, variant, deterministic=deterministic) for i in (ids or CATALOG)]


def reverify(report: VerificationReport, ce: Counterexample) -> bool:
    """True when re-evaluating a stored counterexample reproduces it exactly."""
    ident = get_identity(report.identity)
    pt = dict(ce.params)
    if "variant" in pt:
        v = FormulaVariant.parse(pt["variant"])
    elif report.variant.get("status") == "unresolved":
        return False
    elif report.variant.get("source") == "not used":
        v = FormulaVariant()
    else:
        v = FormulaVariant.parse(
            ",".join(f"{k}={report.variant[k]}" for k in ("exponent", "denominator", "shift", "s_factor"))
        )
    values = _evaluate_point(ident, pt, v)
    if values is None:
        return False
    lhs, rhs = values
    return (
        not _equal(lhs, rhs)
        and render_value(lhs) == ce.lhs
        and render_value(rhs) == ce.rhs
        and render_value(_difference(lhs, rhs)) == ce.difference
    )
