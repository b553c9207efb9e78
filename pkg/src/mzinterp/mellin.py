"""Integral representation of Psi(s; w) and the evaluation dispatcher.

For ``Re s_m > 0`` and ``Re w > -1``

    Psi(s; w) = 1/prod Gamma(s_m) * int_{(0,inf)^d} G(e^{-x}; w) prod x_m^{s_m-1} e^{-x_m} dx.

Each axis is truncated to ``(0, X)`` and integrated with a tanh-sinh rule.
Parameters with ``Re s < 1`` are first smoothed by ``x = t^{1/rho}``,
``rho = Re s``, so the weight becomes ``t^{s/rho - 1} / rho``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import expit, gamma, gammaincc

from .g_function import g_batch
from .kernel import (
    ConvergenceError,
    DomainError,
    EvalResult,
    Method,
    RegionError,
    as_complex,
    ctuple,
)
from .zeta_series import SeriesConfig, psi_series, psi_shift_w

__all__ = ["QuadratureSpec", "psi_mellin", "psi_auto", "MAX_DEPTH"]

MAX_DEPTH = 4
_T_MAX = 4.0  # tanh-sinh parameter range [-T, T]
_CHUNK = 1 << 17
_MAX_LEVEL = {1: 12, 2: 10, 3: 8, 4: 6}
_X_CAP = 700.0


@dataclass(frozen=True)
class QuadratureSpec:
    """Quadrature settings; ``None`` fields are chosen from ``d`` and ``w``."""

    level: int = 7
    X: float | None = None
    target_tol: float | None = None

    def __post_init__(self):
        if self.level < 3:
            raise ValueError("level must be >= 3")
        if self.X is not None and not self.X > 0:
            raise ValueError("X must be positive")
        if self.target_tol is not None and not self.target_tol > 0:
            raise ValueError("target_tol must be positive")

    def resolved_tol(self, d: int) -> float:
        if self.target_tol is not None:
            return self.target_tol
        return 1e-8 if d <= 2 else 1e-6

    def resolved_X(self, d: int, w: complex, s: Sequence[complex] = ()) -> float:
        """Cut-off with ``(1-sigma) X - a log X >= -log(tol) + 5d``, where
        ``a = max(Re s_m - 1, 0)`` accounts for the power in the weight."""
        if self.X is not None:
            return self.X
        sigma = _sigma(w)
        target = -math.log(self.resolved_tol(d)) + 5.0 * d
        a = max([0.0] + [z.real - 1.0 for z in s])
        X = target / (1.0 - sigma)
        for _ in range(50):
            X = (target + a * math.log(X)) / (1.0 - sigma)
        # keep prefix products e^{-(x_1+...+x_m)} inside double range
        return min(X, _X_CAP / d)


def _sigma(w: complex) -> float:
    return max(0.0, -w.real) + 0.05


def _tail(s: complex, X: float, sigma: float) -> float:
    """``int_X^inf x^{Re s-1} e^{-(1-sigma) x} dx / |Gamma(s)|``."""
    a = s.real
    k = 1.0 - sigma
    return float(gammaincc(a, k * X) * gamma(a) / k**a / abs(gamma(s)))


def _axis_rule(s: complex, X: float, level: int):
    """Nodes ``x`` and weights for ``int_0^X f(x) x^{s-1} dx / Gamma(s)``.

    The ``e^{-x}`` factor is left to the caller, which folds it into the kernel.
    """
    h = 2.0 ** -(level - 3)
    n = int(round(_T_MAX / h))
    t = h * np.arange(-n, n + 1)
    rho = min(1.0, s.real)
    T = X**rho
    u = math.pi * np.sinh(t)
    r = T * expit(u)
    dr = T * math.pi * np.cosh(t) * expit(u) * expit(-u) * h
    keep = (r > 0) & (dr > 0)
    r, dr = r[keep], dr[keep]
    x = r ** (1.0 / rho)
    with np.errstate(over="ignore", under="ignore"):
        wt = np.exp((s / rho - 1.0) * np.log(r)) * dr / (rho * gamma(s))
    return x, wt


def _tensor_sum(xs, wts, w: complex, sigma: float) -> tuple[complex, float, float]:
    """``sum G(e^{-x}) prod w_m`` over the tensor grid (and the sum of moduli)."""
    d = len(xs)
    grids = np.meshgrid(*xs, indexing="ij")
    logq = -np.stack([g.ravel() for g in grids], axis=-1).astype(complex)
    W = wts[0]
    for v in wts[1:]:
        W = np.multiply.outer(W, v)
    W = W.ravel()
    sx = -logq.real.sum(axis=-1)
    vals = np.empty(len(W), dtype=complex)  # G(e^{-x}) e^{-sum x}
    for a in range(0, len(W), _CHUNK):
        vals[a : a + _CHUNK] = g_batch(logq[a : a + _CHUNK], w, log_scale=-sx[a : a + _CHUNK])
    if not np.all(np.isfinite(vals)):
        raise ConvergenceError("kernel evaluation failed at some quadrature nodes")
    terms = vals * W
    # kernel size relative to its growth envelope exp(sigma * sum x)
    with np.errstate(divide="ignore"):
        envelope = float(np.max(np.exp(np.log(np.abs(vals)) + (1.0 - sigma) * sx)))
    # numpy reduces with a fixed pairwise tree, so the result is order independent
    return complex(terms.sum()), float(np.abs(terms).sum()), envelope


def psi_mellin(s: Sequence, w, spec: QuadratureSpec = QuadratureSpec()) -> EvalResult:
    """``Psi(s; w)`` from the integral representation (``Re s_m > 0``, ``Re w > -1``).

    ``abs_error`` is the level-to-level difference plus a rounding term; it
    is a heuristic estimate, not a bound.
    """
    s = ctuple(s)
    w = as_complex(w)
    d = len(s)
    for m, sm in enumerate(s, 1):
        if not sm.real > 0:
            raise RegionError(f"Re(s_{m}) = {sm.real} must be positive")
    if not w.real > -1:
        raise RegionError(f"Re(w) = {w.real} must exceed -1")
    if d > MAX_DEPTH:
        raise RegionError(f"quadrature is limited to depth {MAX_DEPTH}")
    if d == 0:
        return EvalResult(1.0, 0.0, Method.EXACT, 0)
    tol = spec.resolved_tol(d)
    X = spec.resolved_X(d, w, s)
    sigma = _sigma(w)
    level = spec.level
    best = None

    def grid_sum(lv):
        rules = [_axis_rule(sm, X, lv) for sm in s]
        return rules, _tensor_sum([r[0] for r in rules], [r[1] for r in rules], w, sigma)

    coarse = grid_sum(level - 1)[1][0]
    while True:
        rules, (fine, mag, env) = grid_sum(level)
        n_nodes = math.prod(len(r[0]) for r in rules)
        # missing mass: one axis beyond X, the others over their full range
        full = [_tail(sm, 0.0, sigma) for sm in s]
        trunc = env * sum(_tail(sm, X, sigma) * math.prod(full) / full[m] for m, sm in enumerate(s))
        err = abs(fine - coarse) + trunc + 64 * d * 2.2e-16 * mag
        res = EvalResult(fine, err, Method.MELLIN, n_nodes)
        if best is None or res.abs_error < best.abs_error:
            best = res
        if err <= tol:
            return res
        if level >= _MAX_LEVEL[d]:
            raise ConvergenceError(f"quadrature did not reach {tol:g} (estimate {best.abs_error:g})", best)
        coarse = fine
        level += 1


def psi_auto(s: Sequence, w, tol: float | None = None) -> EvalResult:
    """Pick a route for ``Psi(s; w)``.

    Series when every ``Re s_m > 1`` and ``Re w > -1``; the integral when
    some ``Re s_m`` lies in ``(0, 1]`` and ``Re w > -1/2``; otherwise ``w`` is
    shifted up through the difference equation first.  The integrand decays
    only like ``e^{-(1+Re w) x}``, so the integral is avoided close to ``-1``.
    """
    s = ctuple(s)
    w = as_complex(w)
    for m, sm in enumerate(s, 1):
        if not sm.real > 0:
            raise RegionError(f"Re(s_{m}) = {sm.real} must be positive")
    if w.imag == 0 and w.real <= -1 and w.real == math.floor(w.real):
        raise DomainError(f"w = {w.real:g} is a negative integer")
    if w.imag == 0 and w.real <= -1:
        raise DomainError(f"w = {w.real:g} lies on the cut (-inf, -1]")
    cfg = SeriesConfig() if tol is None else SeriesConfig(tol=min(tol, 1e-13))
    quad = QuadratureSpec() if tol is None else QuadratureSpec(target_tol=tol)

    def direct(s_, w_):
        if not s_:
            return EvalResult(1.0, 0.0, Method.EXACT, 0)
        if all(z.real > 1 for z in s_) and w_.real > -1:
            return psi_series(s_, w_, cfg)
        return psi_mellin(s_, w_, quad)

    if w.real > -1 and (all(z.real > 1 for z in s) or w.real > -0.5):
        return direct(s, w)
    return psi_shift_w(s, w, direct)
