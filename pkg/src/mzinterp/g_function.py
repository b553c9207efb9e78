"""The kernel ``G^d(q; w)`` on ``U_d x C``.

``G^0 = 1``, ``G^1(q; w) = (1 - q^w)/(1 - q)`` and for ``d >= 2``

    G^d(q; w) = [G^{d-1}(q_[d-1]; w) - G^{d-1}(q_[d-2], q_{d-1} q_d; w)] / (1 - q_d).

Several evaluation schemes are provided; :func:`g_eval` picks one.  All
products of entries are formed as ``exp`` of sums of principal logarithms,
so that ``1 - q_i...q_j`` is ``-expm1(log q_i + ... + log q_j)`` and keeps
full relative accuracy near the divisor set.

Equivalently, with prefix products ``P_0 = 1, P_m = q_1...q_m``,
``G^d(q; w) = P_0 P_1 ... P_{d-1} f[P_0, ..., P_d]`` is a scaled divided
difference of ``f(t) = t^w``; :func:`g_batch` evaluates that form on arrays.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Sequence

import numpy as np

from .combinatorics import binomial_complex, binomial_exact
from .kernel import (
    ConditioningError,
    ConvergenceError,
    DomainError,
    EvalResult,
    Method,
    as_complex,
    block_arg_sums,
    ctuple,
    in_domain_Ud,
    principal_power,
)

__all__ = [
    "GEvalStrategy",
    "DivisorProximity",
    "divisor_proximity",
    "g_eval",
    "g_explicit",
    "g_recursive",
    "g_series_lt1",
    "g_newton",
    "g_newton_exact",
    "g_integer_w",
    "g_ones_prefix",
    "g_last_one",
    "g_additivity_rhs",
    "g_multiplicativity_rhs",
    "g_batch",
]

_EPS = 2.220446049250313e-16


@dataclass(frozen=True)
class GEvalStrategy:
    """Knobs for :func:`g_eval`.

    ``accept_tol`` is the relative error (absolute below magnitude one)
    above which no evaluation path is considered good enough.
    """

    singular_threshold: float = 1e-3
    series_tol: float = 1e-12
    max_newton_terms: int = 500
    newton_radius: float = 0.8
    accept_tol: float = 1e-9

    def __post_init__(self):
        if not 0 < self.singular_threshold < 1:
            raise ValueError("singular_threshold must lie in (0, 1)")
        if not self.series_tol > 0 or not self.accept_tol > 0:
            raise ValueError("tolerances must be positive")
        if self.max_newton_terms < 1:
            raise ValueError("max_newton_terms must be positive")
        if not 0 < self.newton_radius < 1:
            raise ValueError("newton_radius must lie in (0, 1)")


DEFAULT_STRATEGY = GEvalStrategy()


@dataclass(frozen=True)
class DivisorProximity:
    """Smallest ``|1 - q_i...q_j|`` over blocks, with its 1-based block."""

    min_gap: float
    witness: tuple[int, int] | None

    @property
    def on_divisor(self) -> bool:
        return self.min_gap == 0.0


# -- shared helpers ---------------------------------------------------------


def _checked(q: Sequence) -> tuple[tuple[complex, ...], list[complex]]:
    q = ctuple(q)
    if not in_domain_Ud(q):
        raise DomainError(f"q = {q} is not in U_{len(q)}")
    return q, [cmath.log(z) for z in q]


def _block(L: Sequence[complex], a: int, b: int) -> complex:
    """``log(q_{a+1} ... q_b)`` (0-based half-open ``[a, b)``)."""
    return sum(L[a:b], 0j)


def _gap(L: Sequence[complex], a: int, b: int) -> complex:
    """``1 - q_{a+1} ... q_b`` without cancellation."""
    return -_expm1(_block(L, a, b))


def _expm1(z: complex) -> complex:
    """Complex ``exp(z) - 1`` accurate for small ``|z|``."""
    if abs(z) < 1e-5:
        return z * (1.0 + z / 2.0 * (1.0 + z / 3.0 * (1.0 + z / 4.0)))
    x, y = z.real, z.imag
    # exp(x+iy)-1 = expm1(x) cos y - 2 sin^2(y/2) + i e^x sin y
    em = math.expm1(x)
    s2 = math.sin(y / 2.0)
    return complex(em * math.cos(y) - 2.0 * s2 * s2, math.exp(x) * math.sin(y))


def _g1(L: complex, w: complex) -> complex:
    if L == 0:
        return w
    return _expm1(w * L) / _expm1(L)


def divisor_proximity(q: Sequence) -> DivisorProximity:
    """``min_{i<=j} |1 - q_i...q_j|`` and where it is attained."""
    q, L = _checked(q)
    best, where = math.inf, None
    d = len(q)
    for a in range(d):
        for b in range(a + 1, d + 1):
            g = abs(_gap(L, a, b))
            if g < best:
                best, where = g, (a + 1, b)
    if where is None:
        return DivisorProximity(math.inf, None)
    return DivisorProximity(best, where)


# -- explicit formula ---------------------------------------------------------


def _explicit(L: Sequence[complex], w: complex) -> tuple[complex, float]:
    d = len(L)
    total, mag = 0j, 0.0
    for l in range(d + 1):
        log_num = w * _block(L, 0, l) - _block(L, l, d)
        den = 1.0 + 0j
        for a in range(l):
            den *= _gap(L, a, l)
        for b in range(l + 1, d + 1):
            log_num += _block(L, l, b)
            den *= _gap(L, l, b)
        if den == 0:
            raise DomainError("q lies on the divisor set: some block product equals 1")
        term = cmath.exp(log_num) / den
        total += -term if l % 2 else term
        mag += abs(term)
    return total, mag


def _explicit_ld(q: Sequence[complex], w: complex) -> complex:
    """The same sum carried in ``numpy.longdouble``.

    Rounding in the explicit formula is about ``eps * sum |terms|``, and the
    terms grow like ``1/prod |1 - q_i...q_j|``; the wider mantissa (64 bits
    on x86) recovers three digits of that loss.
    """
    ld = np.longdouble
    Lr = [np.log(np.hypot(ld(z.real), ld(z.imag))) for z in q]
    Li = [np.arctan2(ld(z.imag), ld(z.real)) for z in q]
    wr, wi = ld(w.real), ld(w.imag)
    d = len(q)

    def blk(a, b):
        return sum(Lr[a:b], ld(0)), sum(Li[a:b], ld(0))

    def cexp(x, y):
        e = np.exp(x)
        return np.clongdouble(complex(0)) + e * np.cos(y) + 1j * (e * np.sin(y))

    def gap(a, b):
        x, y = blk(a, b)
        s2 = np.sin(y / 2)
        re = -(np.expm1(x) * np.cos(y) - 2 * s2 * s2)
        im = -(np.exp(x) * np.sin(y))
        return np.clongdouble(re) + np.clongdouble(1j) * im

    total = np.clongdouble(0)
    for l in range(d + 1):
        x0, y0 = blk(0, l)
        x1, y1 = blk(l, d)
        nx = wr * x0 - wi * y0 - x1
        ny = wr * y0 + wi * x0 - y1
        den = np.clongdouble(1)
        for a in range(l):
            den *= gap(a, l)
        for b in range(l + 1, d + 1):
            bx, by = blk(l, b)
            nx, ny = nx + bx, ny + by
            den *= gap(l, b)
        if den == 0:
            raise DomainError("q lies on the divisor set: some block product equals 1")
        term = cexp(nx, ny) / den
        total += -term if l % 2 else term
    return complex(total)


def g_explicit(q: Sequence, w) -> complex:
    """Closed-form sum over ``l = 0..d``; defined off the divisor set.

    Evaluated in extended precision where the platform provides it.
    """
    q, _ = _checked(q)
    return _explicit_ld(q, as_complex(w))


# -- recursion ---------------------------------------------------------------


def _cauchy_dd(f, x0: complex, x1: complex, L_prefix: Sequence[complex], tol: float):
    """``(f(x0) - f(x1))/(x0 - x1)`` as a contour integral around both points.

    ``f`` must be holomorphic on the circle and inside it; the circle is
    kept clear of the region where ``(q_prefix, z)`` leaves ``U``.
    """
    c = 0.5 * (x0 + x1)
    # admissible interval for arg z
    A = block_arg_sums([cmath.exp(z) for z in L_prefix]) if L_prefix else []
    n = len(L_prefix)
    tails = [A[i][n - 1] for i in range(n)] if n else []
    lo = -math.pi - min([0.0] + tails)
    hi = math.pi - max([0.0] + tails)
    ac = cmath.phase(c)
    margin = min(ac - lo, hi - ac)
    if margin <= 0:
        raise ConditioningError("merged argument too close to the edge of U")
    r = abs(c) * min(0.25, math.sin(0.5 * margin))
    spread = max(abs(x0 - c), abs(x1 - c))
    if r <= 4.0 * spread:
        raise ConditioningError("no admissible contour around the near-coincident points")
    prev = None
    N = 16
    while True:
        acc, err_acc = 0j, 0.0
        for k in range(N):
            z = c + r * cmath.exp(2j * math.pi * (k + 0.5) / N)
            fz, ez = f(z)
            kern = (z - c) / ((z - x0) * (z - x1)) / N
            acc += fz * kern
            err_acc += ez * abs(kern)
        if prev is not None:
            diff = abs(acc - prev)
            if diff <= tol * max(1.0, abs(acc)) or N >= 256:
                return acc, diff + err_acc, N
        prev = acc
        N *= 2


def _rec(q: tuple[complex, ...], L: list[complex], w: complex, strat: GEvalStrategy):
    """(value, abs_error, work) by the depth recursion."""
    d = len(q)
    if d == 0:
        return 1.0 + 0j, 0.0, 1
    if d == 1:
        v = _g1(L[0], w)
        return v, 8 * _EPS * (abs(v) + abs(w)), 1
    if q[-1] == 1:
        v = g_last_one(q[:-1], w, strat)
        return v, 64 * d * _EPS * max(1.0, abs(v)), d * d
    a_q, a_L = q[:-1], L[:-1]
    m_L = L[:-2] + [L[-2] + L[-1]]
    m_q = q[:-2] + (cmath.exp(m_L[-1]),)
    den = _gap(L, d - 1, d)
    if abs(den) >= strat.singular_threshold:
        va, ea, wa = _rec(a_q, a_L, w, strat)
        vb, eb, wb = _rec(m_q, m_L, w, strat)
        v = (va - vb) / den
        return v, (ea + eb + 4 * _EPS * (abs(va) + abs(vb))) / abs(den), wa + wb

    def f(z):
        Lz = L[:-2] + [cmath.log(z)]
        v, e, _ = _rec(q[:-2] + (z,), Lz, w, strat)
        return v, e

    x0 = q[-2]
    x1 = m_q[-1]
    # G^d = x0 (f(x0) - f(x1)) / (x0 - x1), since x0 - x1 = x0 (1 - q_d)
    dd, e, n = _cauchy_dd(f, x0, x1, L[:-2], strat.series_tol)
    return x0 * dd, abs(x0) * e, n * 4 ** (d - 2)


def g_recursive(q: Sequence, w, strat: GEvalStrategy = DEFAULT_STRATEGY) -> complex:
    """Depth recursion; near ``q_d = 1`` the difference quotient becomes a
    contour integral, and ``q_d = 1`` itself uses :func:`g_last_one`."""
    q, L = _checked(q)
    return _rec(q, L, as_complex(w), strat)[0]


# -- power series (|q_i| < 1) ----------------------------------------------


def g_series_lt1(q: Sequence, w, tol: float = 1e-12) -> EvalResult:
    """Power series for ``|q_i| < 1``.

    Term ``l`` is ``(-1)^l (q_1...q_l)^w`` times a weakly increasing chain
    sum over ``q_1..q_l`` and a strictly decreasing chain sum over
    ``q_{l+1}..q_d``.  Each chain is the product of geometric factors, so it
    is truncated per axis with an exact geometric remainder bound.
    """
    q, L = _checked(q)
    w = as_complex(w)
    if any(abs(z) >= 1 for z in q):
        raise DomainError("the power series needs every |q_i| < 1")
    d = len(q)
    if d == 0:
        return EvalResult(1.0, 0.0, Method.EXACT, 0)
    rho = max(abs(z) for z in q)
    # K terms per axis: d * rho^K / (1 - rho)^d * (rough chain weight) <= tol
    K = max(8, math.ceil((math.log(tol) - math.log(4.0 * d) + d * math.log(1 - rho)) / math.log(rho)))
    idx = np.arange(K)
    total, err, mag = 0j, 0.0, 0.0
    for l in range(d + 1):
        # weakly increasing j_1 <= ... <= j_l: cumulative from the left
        inc_sum = 1.0 + 0j
        if l:
            inc = np.exp(idx * L[0])
            for m in range(1, l):
                inc = np.exp(idx * L[m]) * np.cumsum(inc)
            inc_sum = complex(inc.sum())
        # strictly decreasing j_{l+1} > ... > j_d >= 0: build from the right
        dec_sum = 1.0 + 0j
        if l < d:
            dec = np.exp(idx * L[d - 1])
            for m in range(d - 2, l - 1, -1):
                cs = np.concatenate(([0j], np.cumsum(dec)[:-1]))
                dec = np.exp(idx * L[m]) * cs
            dec_sum = complex(dec.sum())
        pref = cmath.exp(w * _block(L, 0, l))
        term = pref * inc_sum * dec_sum
        total += -term if l % 2 else term
        mag += abs(term)
        # remainder: any index reaching K contributes at most rho^K times the
        # full majorant prod 1/(1-|q_m|)
        maj = abs(pref) * math.prod(1.0 / (1.0 - abs(z)) for z in q)
        err += d * rho**K * maj
    err += 8 * (d + 1) * _EPS * mag
    return EvalResult(total, err, Method.SERIES, (d + 1) * d * K)


# -- Newton series -----------------------------------------------------------


def g_newton(q: Sequence, w, tol: float = 1e-12, cap: int = 500) -> EvalResult:
    """``prod q_l^{d-l} sum_j binom(w, d+j) (-1)^j h_j(a_1..a_d)``,
    ``a_l = 1 - q_1...q_l`` and ``h_j`` the complete homogeneous polynomial."""
    q, L = _checked(q)
    w = as_complex(w)
    d = len(q)
    if d == 0:
        return EvalResult(1.0, 0.0, Method.EXACT, 0)
    a = [_gap(L, 0, l) for l in range(1, d + 1)]
    amax = max(abs(x) for x in a)
    if amax >= 1:
        raise DomainError("Newton series needs |1 - q_1...q_l| < 1 for every l")
    pref = cmath.exp(sum((d - 1 - i) * L[i] for i in range(d)))
    h = [1.0 + 0j] * d
    hb = [1.0] * d
    b = binomial_complex(w, d)
    total = b * h[-1]
    mag = abs(total)
    j = 0
    while True:
        if amax == 0:
            break
        j += 1
        if j > cap:
            raise ConvergenceError(
                f"Newton series not converged after {cap} terms",
                EvalResult(pref * total, abs(pref) * mag, Method.NEWTON, cap),
            )
        h[0] *= a[0]
        hb[0] *= abs(a[0])
        for i in range(1, d):
            h[i] = h[i - 1] + a[i] * h[i]
            hb[i] = hb[i - 1] + abs(a[i]) * hb[i]
        n = d + j - 1
        b *= (w - n) / (n + 1)
        term = b * h[-1]
        total += -term if j % 2 else term
        mag += abs(term)
        bound = abs(b) * hb[-1]
        # coefficient ratio of later terms tends to amax (times a polynomial factor)
        growth = abs((w - n - 1) / (n + 2)) * (n + 1) / (j + 1)
        tail = bound * amax * max(1.0, growth) / max(1e-300, 1.0 - amax * max(1.0, growth))
        if amax * max(1.0, growth) < 1 and tail <= tol * max(1.0, abs(total)):
            break
    err = abs(pref) * (8 * d * _EPS * mag + (0.0 if amax == 0 else tail))
    return EvalResult(pref * total, err, Method.NEWTON, j + 1)


def g_newton_exact(q: Sequence, w) -> Fraction:
    """Exact rational Newton sum; the series must terminate.

    Termination happens when ``w`` is a non-negative integer or every prefix
    product equals one.
    """
    q = tuple(Fraction(x) for x in q)
    w = Fraction(w)
    d = len(q)
    P = [Fraction(1)]
    for x in q:
        P.append(P[-1] * x)
    a = [1 - P[l] for l in range(1, d + 1)]
    pref = Fraction(1)
    for i in range(d):
        pref *= q[i] ** (d - 1 - i)
    if all(x == 0 for x in a):
        jmax = 0
    elif w.denominator == 1 and w >= 0:
        jmax = max(0, int(w) - d)
    else:
        raise ValueError("the Newton series does not terminate for these arguments")
    total = Fraction(0)
    for j in range(jmax + 1):
        hj = Fraction(0)
        for combo in combinations_with_replacement(range(d), j):
            t = Fraction(1)
            for i in combo:
                t *= a[i]
            hj += t
        total += (-1) ** j * binomial_exact(w, d + j) * hj
    return pref * total


def g_integer_w(q: Sequence, N: int):
    """``G^d(q; N) = sum_{N > k_1 > ... > k_d >= 0} prod q_m^{k_m}`` for
    integer ``N >= 0``; exact when the entries are exact rationals."""
    q = tuple(q)
    d = len(q)
    if N < 0:
        raise ValueError("N must be non-negative")
    if d == 0:
        return 1
    one = q[0] ** 0
    # chain[k] = sum over admissible (k_m..k_d) with k_m = k
    chain = [q[-1] ** k for k in range(N)]
    for x in reversed(q[:-1]):
        below = 0 * one
        nxt = [0 * one] * N
        for k in range(N):
            nxt[k] = x**k * below
            below = below + chain[k]
        chain = nxt
    return sum(chain, 0 * one)


# -- structured closed forms ---------------------------------------------


def g_ones_prefix(d: int, q, w, tol: float = 1e-15) -> complex:
    """``G^d(1, ..., 1, q; w)`` (``d-1`` leading ones).

    Closed form ``(q^w - sum_{l<d} binom(w,l)(q-1)^l)/(q-1)^d``; for
    ``|q - 1| <= 1/2`` the binomial remainder series is summed instead.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    q = as_complex(q)
    w = as_complex(w)
    if q.imag == 0 and q.real <= 0:
        raise DomainError(f"q = {q} lies on the cut")
    x = q - 1.0
    if abs(x) <= 0.5:
        total = 0j
        b = binomial_complex(w, d)
        xp = 1.0 + 0j
        l = d
        while True:
            term = b * xp
            total += term
            if abs(x) == 0:
                break
            # |binom(w,l+1)/binom(w,l)| -> 1, so the tail is about |term| |x|/(1-|x|)
            if abs(term) * 2 * abs(x) <= tol * max(1.0, abs(total)) and l > d + 2:
                break
            b *= (w - l) / (l + 1)
            xp *= x
            l += 1
            if l > d + 4000:
                break
        return total
    head = sum(binomial_complex(w, l) * x**l for l in range(d))
    return (principal_power(q, w) - head) / x**d


def g_last_one(qprefix: Sequence, w, strat: GEvalStrategy = DEFAULT_STRATEGY) -> complex:
    """``G^d(q_1, ..., q_{d-1}, 1; w)`` in closed form.

    ``(-1)^{d-1} w prod q_m^w / prod_m (1 - S_m)
      + sum_{l=1}^{d-1} (-1)^{d-1-l} S_l G^l(q_1..q_{l-1}, S_l; w) / prod_{m>=l}(1 - S_m)``
    with suffix products ``S_m = q_m ... q_{d-1}``.
    """
    qp, L = _checked(qprefix)
    w = as_complex(w)
    n = len(qp)
    gaps = [_gap(L, m, n) for m in range(n)]  # 1 - S_{m+1}
    for m, g in enumerate(gaps, 1):
        if g == 0:
            raise DomainError(f"suffix product q_{m}...q_{n} equals 1")

    def den(l):  # prod_{m=l}^{n} (1 - S_m), 1-based l
        out = 1.0 + 0j
        for g in gaps[l - 1 :]:
            out *= g
        return out

    total = (-1) ** n * w * cmath.exp(w * _block(L, 0, n)) / den(1)
    for l in range(1, n + 1):
        LS = _block(L, l - 1, n)
        S = cmath.exp(LS)
        inner = qp[: l - 1] + (S,)
        gl = g_eval(inner, w, strat).value
        total += (-1) ** (n - l) * S * gl / den(l)
    return total


def g_additivity_rhs(q: Sequence, u, v, strat: GEvalStrategy = DEFAULT_STRATEGY) -> complex:
    """Right-hand side of the addition rule, equal to ``G^d(q; u+v)``:

    ``G(q;u) + q_1^u G(q;v)
      + q_1^u sum_{l=1}^{d-1} G^{d-l}(q_2...q_{l+1}, q_{l+2}, ..., q_d; u)
                              G^l(q_1 q_2, q_3, ..., q_{l+1}; v)``.
    """
    q, L = _checked(q)
    u, v = as_complex(u), as_complex(v)
    d = len(q)
    if d == 0:
        return 1.0 + 0j
    q1u = cmath.exp(u * L[0])
    total = g_eval(q, u, strat).value + q1u * g_eval(q, v, strat).value
    for l in range(1, d):
        left = (cmath.exp(_block(L, 1, l + 1)),) + q[l + 1 :]
        right = (cmath.exp(_block(L, 0, 2)),) + q[2 : l + 1]
        total += q1u * g_eval(left, u, strat).value * g_eval(right, v, strat).value
    return total


def _chains(d: int, l: int):
    """Weakly decreasing ``(j_0, ..., j_l)`` with ``j_0 = d`` and ``j_l = l``."""
    if l == 0:
        if d == 0:
            yield (0,)
        return

    def rec(prefix):
        if len(prefix) == l:
            yield tuple(prefix) + (l,)
            return
        for j in range(prefix[-1], l - 1, -1):
            yield from rec(prefix + [j])

    yield from rec([d])


def g_multiplicativity_rhs(q: Sequence, u, v, strat: GEvalStrategy = DEFAULT_STRATEGY) -> complex:
    """Chain expansion of ``G^d(q; uv)``.

    Sum over ``l`` and chains ``d = j_0 >= ... >= j_l = l`` of
    ``prod_n G^{j_{n-1}-j_n+1}(q_n...q_{j_n}, q_{j_n+1}, ..., q_{j_{n-1}}; u)``
    times ``G^l(q_1^u, ..., q_l^u; v)``.
    """
    q, L = _checked(q)
    u, v = as_complex(u), as_complex(v)
    d = len(q)
    if d == 0:
        return 1.0 + 0j
    qu = tuple(cmath.exp(u * x) for x in L)
    if not in_domain_Ud(qu):
        raise DomainError("(q_1^u, ..., q_d^u) is not in U_d")
    cache: dict = {}

    def G(entries, w):
        key = (entries, w)
        if key not in cache:
            cache[key] = g_eval(entries, w, strat).value
        return cache[key]

    total = 0j
    for l in range(1, d + 1):
        outer = G(qu[:l], v)
        for chain in _chains(d, l):
            prod = 1.0 + 0j
            for n in range(1, l + 1):
                hi, lo = chain[n - 1], chain[n]
                head = cmath.exp(_block(L, n - 1, lo))  # q_n ... q_{j_n}
                prod *= G((head,) + q[lo:hi], u)
            total += prod * outer
    return total


# -- dispatch ----------------------------------------------------------------


def _ok(res: EvalResult, tol: float) -> bool:
    return res.abs_error <= tol * max(1.0, abs(res.value))


def g_eval(q: Sequence, w, strat: GEvalStrategy = DEFAULT_STRATEGY) -> EvalResult:
    """Evaluate ``G^d(q; w)`` choosing among the available schemes.

    Order: exact special cases, explicit formula away from the divisor set,
    Newton series near the all-ones point, then the recursion.
    """
    q, L = _checked(q)
    w = as_complex(w)
    d = len(q)
    if d == 0:
        return EvalResult(1.0, 0.0, Method.EXACT, 0)
    if all(z == 1 for z in q):
        b = binomial_complex(w, d)
        return EvalResult(b, 4 * d * _EPS * abs(b), Method.EXACT, d)
    if d == 1:
        v = _g1(L[0], w)
        return EvalResult(v, 8 * _EPS * (abs(v) + abs(w)), Method.EXPLICIT, 1)
    if all(z == 1 for z in q[:-1]):
        v = g_ones_prefix(d, q[-1], w)
        return EvalResult(v, 64 * d * _EPS * max(1.0, abs(v)), Method.EXPLICIT, d)
    candidates: list[EvalResult] = []
    prox = divisor_proximity(q)
    if q[-1] == 1 and all(_gap(L, m, d - 1) != 0 for m in range(d - 1)):
        v = g_last_one(q[:-1], w, strat)
        sub = min(abs(_gap(L, m, d - 1)) for m in range(d - 1))
        res = EvalResult(v, 64 * d * _EPS * max(1.0, abs(v)) / sub, Method.EXPLICIT, d * d)
        if _ok(res, strat.series_tol):
            return res
        candidates.append(res)
    elif prox.min_gap >= strat.singular_threshold:
        v, mag = _explicit(L, w)
        res = EvalResult(v, 8 * (d + 1) * d * _EPS * mag, Method.EXPLICIT, (d + 1) * d)
        if _ok(res, strat.series_tol):
            return res
        candidates.append(res)
    if all(abs(_gap(L, 0, l)) <= strat.newton_radius for l in range(1, d + 1)):
        try:
            res = g_newton(q, w, strat.series_tol, strat.max_newton_terms)
        except ConvergenceError as exc:
            if exc.best is not None:
                candidates.append(exc.best)
        else:
            if _ok(res, strat.series_tol):
                return res
            candidates.append(res)
    try:
        v, e, work = _rec(q, L, w, strat)
        candidates.append(EvalResult(v, e, Method.RECURSION, work))
    except ConditioningError as exc:
        if not candidates:
            raise
    best = min(candidates, key=lambda r: r.abs_error / max(1.0, abs(r.value)))
    if not _ok(best, strat.accept_tol):
        raise ConditioningError(
            f"no evaluation path reached {strat.accept_tol:g} (best {best.abs_error:g})", best
        )
    return best


# -- vectorized divided-difference evaluator --------------------------------


def g_batch(logq, w, log_scale=None, taylor_ratio: float = 0.3, taylor_terms: int = 64) -> np.ndarray:
    """Evaluate ``G^d`` on many points at once from principal logs of the entries.

    ``logq`` has shape ``(..., d)``.  Blocks of nearly coincident prefix
    products are handled by a Taylor expansion of ``t^w`` about their centre,
    the rest by the plain divided-difference recursion.  Intended for dense
    sampling, where per-point dispatch would be too slow.

    With ``log_scale`` the result is ``G * exp(log_scale)``; the factor is
    applied inside, so it can offset growth that would overflow on its own.
    """
    X_in = np.asarray(logq, dtype=complex)
    w = as_complex(w)
    single = X_in.ndim == 1
    if single:
        X_in = X_in[None]
    d = X_in.shape[-1]
    shape = X_in.shape[:-1]
    if d == 0:
        return np.ones(shape, dtype=complex)
    X = np.concatenate([np.zeros(shape + (1,), dtype=complex), np.cumsum(X_in, axis=-1)], axis=-1)
    t = np.exp(X)
    lam = X[..., :d].sum(axis=-1)  # log of the prefactor P_0 ... P_{d-1}
    if log_scale is not None:
        lam = lam + np.asarray(log_scale).reshape(shape)
    level = [np.exp(w * X[..., i] + lam) for i in range(d + 1)]
    fragile = np.zeros(shape, dtype=bool)
    with np.errstate(all="ignore"):
        for k in range(1, d + 1):
            new = []
            for i in range(d + 1 - k):
                j = i + k
                # offsets of nodes i..j from node i, via block log sums
                off = np.stack(
                    [t[..., i] * np.expm1(X_in[..., i:m].sum(-1)) for m in range(i, j + 1)],
                    axis=-1,
                )
                diff = off[..., -1]
                rec = (level[i + 1] - level[i]) / diff
                centre = off.mean(axis=-1)
                c = t[..., i] + centre
                rad = np.abs(off - centre[..., None]).max(axis=-1)
                use = rad <= taylor_ratio * np.abs(c)
                # coincident end nodes with a wide block in between
                fragile |= ~use & (np.abs(diff) < 1e-4 * (np.abs(off).max(axis=-1) + 1e-300))
                if np.any(use):
                    vals = _taylor_dd(w, lam[use], t[..., i][use], X[..., i][use], centre[use],
                                      (off - centre[..., None])[use], taylor_terms)
                    rec = rec.copy()
                    rec[use] = vals
                new.append(rec)
            level = new
    out = level[0]
    for idx in zip(*np.nonzero(fragile | ~np.isfinite(out))):
        try:
            scale = 1.0 if log_scale is None else np.exp(np.asarray(log_scale).reshape(shape)[idx])
            out[idx] = g_eval(tuple(np.exp(X_in[idx])), w).value * scale
        except (ConvergenceError, DomainError, OverflowError):
            out[idx] = complex("nan")
    return out[0] if single else out


def _taylor_dd(w, lam, ti, Xi, centre, z_abs, terms):
    """``f[x_0..x_k]`` for ``f = t^w`` from its Taylor series about ``c``."""
    c = ti + centre
    logc = Xi + np.log1p(centre / ti)
    z = z_abs / c[:, None]
    k = z.shape[-1] - 1
    H = np.zeros((terms + 1,) + c.shape, dtype=complex)
    H[0] = 1.0
    for v in range(k + 1):
        zv = z[:, v]
        for p in range(1, terms + 1):
            H[p] = H[p] + zv * H[p - 1]
    total = np.zeros(c.shape, dtype=complex)
    b = binomial_complex(w, k)
    for p in range(terms + 1):
        total += b * H[p]
        n = k + p
        b *= (w - n) / (n + 1)
    return np.exp((w - k) * logc + lam) * total
