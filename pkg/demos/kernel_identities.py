"""The kernel G(q; w) and a few of its closed forms.

    python3 demos/kernel_identities.py
"""

from math import comb

from mzinterp import g_additivity_rhs, g_eval, g_explicit, g_newton, g_recursive
from mzinterp import g_multiplicativity_rhs

q, w = (0.5, 1.7), 1.5
print(f"G({q}; {w})")
print(f"  explicit  {g_explicit(q, w):.14f}")
print(f"  recursion {g_recursive(q, w):.14f}")
print(f"  Newton    {g_newton(q, w).value:.14f}")

print("\nall-ones entries give binomial coefficients")
for d in range(1, 5):
    print(f"  d={d}  G(1,...,1; 7) = {g_eval([1.0] * d, 7).value.real:.10f}  binom(7, {d}) = {comb(7, d)}")

print("\nG^d(q; 1) vanishes for d >= 2")
print(f"  {abs(g_eval((0.3, 1.7, 0.9), 1.0).value):.1e}")

u, v = 0.4 + 0.2j, 1.3
q = (0.7, 1.2)
print("\nw -> u + v and w -> u v rules")
print(f"  addition       {abs(g_eval(q, u + v).value - g_additivity_rhs(q, u, v)):.1e}")
print(f"  multiplication {abs(g_eval(q, u * v).value - g_multiplicativity_rhs(q, u, v)):.1e}")

# at a non-negative integer the kernel is a finite sum over N > k_1 > k_2 >= 0
N = 4
brute = sum(0.6**k1 * 1.1**k2 for k1 in range(N) for k2 in range(k1))
print(f"\nG((0.6, 1.1); {N}) = {g_eval((0.6, 1.1), N).value.real:.12f}, direct sum {brute:.12f}")
