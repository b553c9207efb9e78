"""Psi(s; w) between the integers.

At w = N the function is the truncated sum zeta_N(s); away from the
integers it is evaluated by the nested series, by the integral over the
kernel G, or by stepping w through the difference equation.

    python3 demos/psi_interpolation.py
"""

from mzinterp import psi_auto, psi_mellin, psi_series, zeta_truncated

s = (2.0, 1.5)

print("integer points: Psi(s; N) against zeta_N(s)")
for N in range(5):
    print(f"  N={N}  {psi_series(s, N).value.real:.15f}  {zeta_truncated(s, N).real:.15f}")

print("\nhalf-integers, two routes")
for w in (0.5, 1.5, 2.5):
    a = psi_series(s, w)
    b = psi_mellin(s, w)
    print(f"  w={w}  series {a.value.real:.12f}  integral {b.value.real:.12f}  |diff| {abs(a.value - b.value):.1e}")

# exponents inside the critical strip: only the integral applies directly
s_low = (0.5 + 0.3j,)
w = 0.7 + 0.2j
lhs = psi_auto(s_low, w + 1).value - psi_auto(s_low, w).value
rhs = (w + 1) ** -s_low[0]
print(f"\nPsi(s; w+1) - Psi(s; w) = (w+1)^-s at s={s_low[0]}: residual {abs(lhs - rhs):.1e}")

# a point left of -1/2, reached by shifting up first
r = psi_auto((0.8, 2.0), -1.6 + 0.5j)
print(f"\nPsi((0.8, 2); -1.6+0.5i) = {r.value:.10f}  via {r.method.value}")
