"""Choosing between competing conventions of the component series.

Each structural variant is checked against an independent series oracle; the
unique survivor is then used for the divisor-sum expansions.

    python demos/variant_adjudication.py
"""
from __future__ import annotations

from lambert_divisors.expansions import sigma_via_exact_formula
from lambert_divisors.verifier import auto_resolution, verify

res = auto_resolution()
for label, row in res.evidence.items():
    marks = "  ".join(f"{k} {p:>3}/{n}" for k, (p, n) in row.items())
    print(f"{label:55s} {marks}")
print("chosen:", res.chosen.label() if res.chosen else "unresolved")
print()

# the exact divisor-sum formula, stated with +s on the S48_{s-1,x-1} term
print(verify("cor-2.7").summary())
v = res.chosen
for weight in ("s", "1", "-s"):
    rec = [sigma_via_exact_formula(2, x, 1, v.replace(s_factor=weight)).agree for x in range(1, 9)]
    print(f"s_factor={weight:>2}: agrees at x=1..8 -> {rec}")
