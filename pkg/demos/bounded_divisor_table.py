"""Bounded divisor sums: the symbolic table and what it specialises to.

    python demos/bounded_divisor_table.py
"""
from __future__ import annotations

from lambert_divisors.cli import bounded_sigma_table, render_rows
from lambert_divisors.divisor_functions import powersum_eval, sigma, sigma_bounded

header, rows = bounded_sigma_table(12, 4)
print(render_rows(header, rows, "markdown"))

# m = 1 is the ordinary divisor sum; evaluate the symbolic entries at alpha = 0, 1
for n in (6, 12):
    sym = sigma_bounded("a", 1, n)
    print(f"n={n}: {sym}  ->  d(n)={powersum_eval(sym, 0)}, sigma(n)={powersum_eval(sym, 1)}")
    assert powersum_eval(sym, 1) == sigma(1, n)

# restricting to d <= n/m is not the same as reflecting the exponent
n, m = 12, 2
print(f"sigma_(-1,{m})({n}) = {sigma_bounded(-1, m, n)}  vs  sigma_(1,{m})({n}) / {n} = {sigma_bounded(1, m, n) / n}")
