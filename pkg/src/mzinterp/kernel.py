"""Complex arithmetic on the cut plane, tuple helpers and the shared result type.

All powers in the package use the principal branch of the logarithm,
``-pi < Im log z < pi``, defined on ``C \\ (-inf, 0]``.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from numbers import Number
from typing import Iterable, Sequence

__all__ = [
    "MZError",
    "DomainError",
    "RegionError",
    "ConvergenceError",
    "ConditioningError",
    "Method",
    "EvalResult",
    "as_complex",
    "ctuple",
    "prefix",
    "suffix",
    "on_cut",
    "principal_log",
    "principal_power",
    "block_arg_sums",
    "in_domain_Ud",
    "close",
]


class MZError(Exception):
    """Base class for errors raised by this package."""


class DomainError(MZError, ValueError):
    """An argument lies outside the domain of the function (cut, U_d, ...)."""


class RegionError(DomainError):
    """An argument lies outside the convergence region of a series or integral."""


class ConvergenceError(MZError, ArithmeticError):
    """A series or quadrature did not reach the requested tolerance.

    ``best`` holds the best available :class:`EvalResult`, if any.
    """

    def __init__(self, message: str, best: "EvalResult | None" = None):
        super().__init__(message)
        self.best = best


class ConditioningError(ConvergenceError):
    """Cancellation prevented every available path from reaching the target."""


class Method(str, enum.Enum):
    SERIES = "series"
    EXPLICIT = "explicit"
    RECURSION = "recursion"
    NEWTON = "newton"
    MELLIN = "mellin"
    DIFFERENCE_SHIFT = "difference-shift"
    EXACT = "exact"


@dataclass(frozen=True)
class EvalResult:
    """A complex value with an absolute error estimate and bookkeeping."""

    value: complex
    abs_error: float
    method: Method
    work: int = 0

    def __post_init__(self):
        object.__setattr__(self, "abs_error", float(self.abs_error))
        if not (math.isfinite(self.abs_error) and self.abs_error >= 0):
            raise ValueError(f"abs_error must be finite and >= 0, got {self.abs_error!r}")
        object.__setattr__(self, "method", Method(self.method))
        object.__setattr__(self, "value", complex(self.value))

    def __complex__(self) -> complex:
        return self.value


def as_complex(z) -> complex:
    """Convert ``z`` to a finite Python complex, rejecting NaN and infinities."""
    if not isinstance(z, Number):
        raise TypeError(f"expected a number, got {type(z).__name__}")
    c = complex(z)
    if not (math.isfinite(c.real) and math.isfinite(c.imag)):
        raise DomainError(f"non-finite input {z!r}")
    return c


def ctuple(entries: Iterable) -> tuple[complex, ...]:
    """Validate a sequence of scalars as a tuple of finite complex numbers."""
    return tuple(as_complex(z) for z in entries)


def prefix(x: Sequence, m: int) -> tuple:
    """The first ``m`` entries of ``x`` (written x_[m])."""
    if not 0 <= m <= len(x):
        raise IndexError(f"prefix length {m} out of range for depth {len(x)}")
    return tuple(x[:m])


def suffix(x: Sequence, m: int) -> tuple:
    """Entries ``m+1 .. d`` of ``x`` (written x^[m])."""
    if not 0 <= m <= len(x):
        raise IndexError(f"suffix offset {m} out of range for depth {len(x)}")
    return tuple(x[m:])


def on_cut(z: complex) -> bool:
    """True when ``z`` lies on the closed negative real axis (including 0)."""
    z = complex(z)
    return z.imag == 0.0 and z.real <= 0.0


def principal_log(z) -> complex:
    z = as_complex(z)
    if on_cut(z):
        raise DomainError(f"log undefined on the cut: {z!r}")
    # cmath.log picks Im in (-pi, pi]; the cut check above excludes the +pi edge.
    return cmath.log(z)


def principal_power(z, s) -> complex:
    """``z**s = exp(s log z)`` with the principal logarithm."""
    z = as_complex(z)
    s = as_complex(s)
    if on_cut(z):
        raise DomainError(f"power undefined on the cut: {z!r}")
    if z == 1:
        return 1.0 + 0.0j
    return cmath.exp(s * cmath.log(z))


def block_arg_sums(q: Sequence[complex]) -> list[list[float]]:
    """Matrix ``A[i][j] = arg q_i + ... + arg q_j`` for ``i <= j`` (0-based).

    Arguments are accumulated as running sums of principal arguments, never
    re-extracted from products, so block sums beyond +-pi do not wrap.
    """
    args = [cmath.phase(complex(z)) for z in q]
    d = len(args)
    out = [[0.0] * d for _ in range(d)]
    for i in range(d):
        acc = 0.0
        for j in range(i, d):
            acc += args[j]
            out[i][j] = acc
    return out


def in_domain_Ud(q: Sequence) -> bool:
    """Membership in U_d: nonzero entries whose contiguous argument sums
    stay strictly inside ``(-pi, pi)``."""
    q = ctuple(q)
    if any(z == 0 for z in q):
        return False
    # A single entry on the negative axis has arg pi, which already fails.
    A = block_arg_sums(q)
    d = len(q)
    return all(-math.pi < A[i][j] < math.pi for i in range(d) for j in range(i, d))


def close(a: complex, b: complex, tol: float = 1e-9) -> bool:
    """Package tolerance convention: absolute when ``|b| < 1``, relative otherwise."""
    scale = max(1.0, abs(b))
    return abs(complex(a) - complex(b)) <= tol * scale
