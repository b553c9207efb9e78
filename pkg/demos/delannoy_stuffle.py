"""Delannoy layers from the harmonic product of two runs of ones.

In the multiplicative flavor every merged entry is 1 * 1 = 1, so the
product (1,...,1) * (1,...,1) collapses onto all-ones tuples and the
coefficient of the length-m tuple is D^m(c, d).

    python3 demos/delannoy_stuffle.py
"""

from fractions import Fraction

from mzinterp import MULTIPLICATIVE, ADDITIVE, DelannoyTable, binomial_exact
from mzinterp import delannoy_via_stuffle, elements, harmonic_product, render

a = elements([Fraction(1, 2), 3], ADDITIVE)
b = elements([2], ADDITIVE)
print("(1/2, 3) * (2) =", render(harmonic_product(a, b)))

ones = harmonic_product(elements([1, 1], MULTIPLICATIVE), elements([1, 1], MULTIPLICATIVE))
print("(1, 1) * (1, 1) =", render(ones))

table = DelannoyTable.build(6, 6)
print("\n c  d  layers (recurrence)            layers (stuffle)")
for c, d in [(1, 1), (2, 3), (3, 3), (4, 2)]:
    print(f" {c}  {d}  {table.row(c, d)!s:30} {delannoy_via_stuffle(c, d)}")

print("\ncentral Delannoy numbers:", [table.total(n, n) for n in range(7)])

# binom(w, c) binom(w, d) = sum_m D^m(c, d) binom(w, m)
w, c, d = Fraction(-7, 3), 3, 2
lhs = binomial_exact(w, c) * binomial_exact(w, d)
rhs = sum(table(m, c, d) * binomial_exact(w, m) for m in range(c + d + 1))
print(f"\nbinom(w,{c}) binom(w,{d}) at w={w}: {lhs} = {rhs}")
