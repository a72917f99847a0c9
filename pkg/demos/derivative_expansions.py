"""Stirling-number expansions of q^s D^s [q^i / (1 - q^i)].

Compares the stated single- and double-sum forms with the corrected ones
against a pure series computation.

    python demos/derivative_expansions.py
"""
from __future__ import annotations

from lambert_divisors.expansions import lambert_derivative_oracle, stirling_derivative_series

N = 24
print("s i   i  ii  i-corrected  ii-corrected")
for s in range(4):
    for i in (1, 2, 3):
        oracle = lambert_derivative_oracle(s, i, N)
        marks = [
            "ok" if stirling_derivative_series(s, i, N, form) == oracle else "--"
            for form in ("i", "ii", "i-corrected", "ii-corrected")
        ]
        print(f"{s} {i}  {marks[0]:>2}  {marks[1]:>2}  {marks[2]:>11}  {marks[3]:>12}")

s, i = 2, 2
print()
print("q^2 D^2 [q^2/(1-q^2)]      :", lambert_derivative_oracle(s, i, 10))
print("double-sum form as stated  :", stirling_derivative_series(s, i, 10, "ii"))
