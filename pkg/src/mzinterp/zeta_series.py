"""Series evaluation of truncated, full and Hurwitz-type multiple zeta functions
and of the interpolant Psi(s; w) inside the region where the series converge.

Every infinite nested sum is split at a cutoff ``M``: indices ``<= M`` are
summed exactly, and the block of leading indices ``> M`` is replaced by its
asymptotic expansion in ``y = w + M``.  That expansion is built one depth at
a time from the Euler-Maclaurin series of the Hurwitz tail

    sum_{j >= 1} (y + j)^{-b}  ~  sum_t a_t(b) y^{-(b - 1 + t)},

so a depth-k tail is ``y^{-(s_1+...+s_k-k)}`` times a power series in ``1/y``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.special import bernoulli

from .kernel import (
    ConvergenceError,
    DomainError,
    EvalResult,
    Method,
    RegionError,
    as_complex,
    ctuple,
    principal_power,
)

__all__ = [
    "SeriesConfig",
    "zeta_truncated",
    "zeta",
    "hurwitz_multiple_zeta",
    "zeta_star_hurwitz",
    "psi_series",
    "psi_defining_partial",
    "psi_shift_w",
]

_EPS = np.finfo(float).eps
_ORDER = 30  # terms kept in each asymptotic tail expansion
_BERN = bernoulli(_ORDER + 2)


@dataclass(frozen=True)
class SeriesConfig:
    tol: float = 1e-13
    max_terms: int = 1_000_000

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")


def _check_w(w: complex) -> complex:
    w = as_complex(w)
    if w.imag == 0.0 and w.real <= -1.0:
        raise DomainError(f"w = {w} lies on the cut (-inf, -1]")
    return w


def _check_entrywise(s: tuple[complex, ...]):
    for m, sm in enumerate(s, 1):
        if not sm.real > 1.0:
            raise RegionError(f"Re(s_{m}) = {sm.real} must exceed 1")


def _check_partial_sums(s: tuple[complex, ...]):
    acc = 0.0
    for m, sm in enumerate(s, 1):
        acc += sm.real
        if not acc > m:
            raise RegionError(f"Re(s_1+...+s_{m}) = {acc} must exceed {m}")


def zeta_truncated(s: Sequence, N: int) -> complex:
    """``zeta_N(s) = sum_{N >= j_1 > ... > j_d > 0} prod j_m^{-s_m}`` (finite)."""
    s = ctuple(s)
    if N < 0:
        raise ValueError("N must be non-negative")
    d = len(s)
    if d == 0:
        return 1.0 + 0j
    if N < d:
        return 0j
    # chain[j] = sum over admissible (j_m, ..., j_d) with j_m = j
    chain = [0j] + [j ** -s[-1] for j in range(1, N + 1)]
    for sm in reversed(s[:-1]):
        below = 0j
        nxt = [0j] * (N + 1)
        for j in range(1, N + 1):
            nxt[j] = j ** -sm * below
            below += chain[j]
        chain = nxt
    return complex(math.fsum(c.real for c in chain), math.fsum(c.imag for c in chain))


def _em_coefficients(b: complex, order: int) -> np.ndarray:
    """Coefficients a_t of ``sum_{j>=1}(y+j)^{-b} ~ sum_t a_t y^{-(b-1+t)}``."""
    a = np.zeros(order + 1, dtype=complex)
    a[0] = 1.0 / (b - 1.0)
    if order >= 1:
        a[1] = -0.5
    rising = b  # (b)_{2k-1}
    fact = 2.0  # (2k)!
    for k in range(1, order // 2 + 1):
        a[2 * k] = _BERN[2 * k] / fact * rising
        rising *= (b + 2 * k - 1) * (b + 2 * k)
        fact *= (2 * k + 1) * (2 * k + 2)
    return a


def _shift_down(c: np.ndarray, e: complex) -> np.ndarray:
    """Re-expand ``sum_r c_r (y-1)^{-(e+r)}`` as ``sum_m c'_m y^{-(e+m)}``."""
    n = len(c)
    out = np.zeros(n, dtype=complex)
    for r in range(n):
        if c[r] == 0:
            continue
        alpha = e + r
        coef = 1.0 + 0j  # (alpha)_i / i!
        for i in range(n - r):
            out[r + i] += c[r] * coef
            coef *= (alpha + i) / (i + 1)
    return out


def _tail_expansions(s: tuple[complex, ...], strict: bool, order: int):
    """Coefficient arrays and leading exponents of the depth-k tails, k=1..d."""
    c = np.zeros(order + 1, dtype=complex)
    c[0] = 1.0
    e = 0j
    out = []
    for k, sk in enumerate(s, 1):
        if not strict and k > 1:
            c = _shift_down(c, e)
        new = np.zeros(order + 1, dtype=complex)
        for r in range(order + 1):
            if c[r] == 0:
                continue
            a = _em_coefficients(e + r + sk, order - r)
            new[r:] += c[r] * a
        c = new
        e = e + sk - 1.0
        out.append((c.copy(), e))
    return out


def _head_sums(s: tuple[complex, ...], w: complex, M: int, strict: bool) -> list[complex]:
    """``F[m]`` = finite nested sum over ``M >= j_m (>|>=) ... > 0`` for the
    suffix ``s_m..s_d`` (0-based ``m``); ``F[d] = 1``."""
    d = len(s)
    j = np.arange(1, M + 1, dtype=float)
    logs = np.log(w + j + 0j)
    F = [0j] * d + [1.0 + 0j]
    A = None
    for m in range(d - 1, -1, -1):
        p = np.exp(-s[m] * logs)
        if A is None:
            A = p
        else:
            cs = np.cumsum(A)
            if strict:
                cs = np.concatenate(([0j], cs[:-1]))
            A = p * cs
        F[m] = complex(A.sum())
    return F


def _nested(s: tuple[complex, ...], w: complex, strict: bool, cfg: SeriesConfig) -> EvalResult:
    d = len(s)
    if d == 0:
        return EvalResult(1.0, 0.0, Method.EXACT, 0)
    smax = max(abs(z) for z in s)
    M = max(1, math.ceil(25.0 + 2.0 * smax + abs(w.imag) - w.real))
    best = None
    while True:
        y = w + M
        F = _head_sums(s, w, M, strict)
        tails = _tail_expansions(s, strict, _ORDER)
        ly = cmath.log(y)
        total = F[0]
        err = 0.0
        mag = abs(F[0])
        inv = np.power(1.0 / y, np.arange(_ORDER + 1))
        for k, (c, e) in enumerate(tails, 1):
            scale = cmath.exp(-e * ly)
            terms = c * inv
            Tk = scale * complex(terms.sum())
            trunc = abs(scale) * (abs(terms[-1]) + abs(terms[-2]))
            total += Tk * F[k]
            err += trunc * abs(F[k])
            mag += abs(Tk * F[k]) + abs(scale) * float(np.abs(terms).sum()) * abs(F[k])
        rounding = 16 * (d + 1) * _EPS * mag
        res = EvalResult(total, err + rounding, Method.SERIES, work=d * (M + _ORDER))
        if best is None or res.abs_error < best.abs_error:
            best = res
        # rounding does not shrink with M, so only truncation drives the loop
        if err <= max(cfg.tol * max(1.0, abs(total)), rounding):
            return res
        if 2 * M > cfg.max_terms:
            raise ConvergenceError(
                f"tolerance {cfg.tol:g} not reached (estimate {best.abs_error:g})", best
            )
        M *= 2


def zeta(s: Sequence, cfg: SeriesConfig = SeriesConfig()) -> EvalResult:
    """Multiple zeta ``sum_{j_1>...>j_d>0} prod j_m^{-s_m}``.

    Requires ``Re(s_1+...+s_m) > m`` for every m.
    """
    s = ctuple(s)
    _check_partial_sums(s)
    return _nested(s, 0j, True, cfg)


def hurwitz_multiple_zeta(s: Sequence, w, cfg: SeriesConfig = SeriesConfig()) -> EvalResult:
    """Strict shifted sum ``Z_w(s) = sum_{j_1>...>j_d>0} prod (w+j_m)^{-s_m}``."""
    s = ctuple(s)
    w = _check_w(w)
    _check_partial_sums(s)
    return _nested(s, w, True, cfg)


def zeta_star_hurwitz(s: Sequence, w, cfg: SeriesConfig = SeriesConfig()) -> EvalResult:
    """Non-strict shifted sum ``sum_{j_1>=...>=j_d>0} prod (w+j_m)^{-s_m}``."""
    s = ctuple(s)
    w = _check_w(w)
    _check_entrywise(s)
    return _nested(s, w, False, cfg)


def _product_error(a: EvalResult, b: EvalResult) -> float:
    return abs(a.value) * b.abs_error + abs(b.value) * a.abs_error + a.abs_error * b.abs_error


def psi_series(s: Sequence, w, cfg: SeriesConfig = SeriesConfig()) -> EvalResult:
    """``Psi(s; w) = sum_i (-1)^i zeta*(s_i,...,s_1; w) zeta(s_{i+1},...,s_d)``."""
    s = ctuple(s)
    w = _check_w(w)
    _check_entrywise(s)
    d = len(s)
    total = 0j
    err = 0.0
    work = 0
    mag = 0.0
    for i in range(d + 1):
        a = zeta_star_hurwitz(s[:i][::-1], w, cfg)
        b = zeta(s[i:], cfg)
        term = a.value * b.value
        total += term if i % 2 == 0 else -term
        err += _product_error(a, b)
        mag += abs(term)
        work += a.work + b.work
    err += 4 * (d + 1) * _EPS * mag
    return EvalResult(total, err, Method.SERIES, work)


def psi_defining_partial(s: Sequence, w, J: int, cfg: SeriesConfig = SeriesConfig()) -> complex:
    """Partial sum of the defining series of Psi over ``j = 1..J``.

    ``sum_j Psi(s^[1]; j-1) j^{-s_1} - Psi(s^[1]; w+j-1) (w+j)^{-s_1}``, with
    the inner interpolants from :func:`psi_series`.
    """
    s = ctuple(s)
    w = _check_w(w)
    _check_entrywise(s)
    if not s:
        raise ValueError("the defining series needs depth >= 1")
    if J <= 0:
        return 0j
    rest = s[1:]
    acc = []
    for j in range(1, J + 1):
        inner_n = psi_series(rest, j - 1, cfg).value if rest else 1.0
        inner_w = psi_series(rest, w + j - 1, cfg).value if rest else 1.0
        acc.append(inner_n * j ** -s[0] - inner_w * principal_power(w + j, -s[0]))
    return complex(math.fsum(z.real for z in acc), math.fsum(z.imag for z in acc))


Evaluator = Callable[[tuple, complex], EvalResult]


def psi_shift_w(s: Sequence, w, evaluator: Evaluator, pole_gap: float = 1e-8) -> EvalResult:
    """Evaluate ``Psi(s; w)`` by unwinding the difference equation

        Psi(s; w+1) - Psi(s; w) = Psi(s^[1]; w) (w+1)^{-s_1}

    from the first shifted point ``w+k`` with ``Re(w+k) > -1/2``.  The
    evaluator handles every depth at points with ``Re(w) > -1/2``.
    """
    s = ctuple(s)
    w = as_complex(w)
    if not s:
        return EvalResult(1.0, 0.0, Method.EXACT, 0)
    k = 0 if w.real > -0.5 else math.floor(-0.5 - w.real) + 1
    if k == 0:
        return evaluator(s, w)
    for j in range(1, k + 1):
        z = w + j
        dist = abs(z.imag) if z.real <= 0 else abs(z)
        if dist < pole_gap:
            raise DomainError(f"w + {j} = {z} is within {pole_gap:g} of the cut")
    top = evaluator(s, w + k)
    value = top.value
    err = top.abs_error
    work = top.work
    for i in range(k):
        inner = psi_shift_w(s[1:], w + i, evaluator, pole_gap)
        factor = principal_power(w + i + 1, -s[0])
        value -= inner.value * factor
        err += inner.abs_error * abs(factor)
        work += inner.work
    return EvalResult(value, err, Method.DIFFERENCE_SHIFT, work)
