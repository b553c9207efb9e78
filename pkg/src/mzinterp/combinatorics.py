"""Generalized binomial coefficients and Delannoy layers.

``D^m(c, d)`` counts the length-m tuples in the harmonic product of a
length-c tuple with a length-d tuple; summing over m gives the Delannoy
number ``D(c, d)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterator

from .kernel import as_complex
from .quasi_shuffle import MULTIPLICATIVE, elements, harmonic_product

__all__ = [
    "binomial_complex",
    "binomial_exact",
    "DelannoyTable",
    "delannoy_layers",
    "delannoy_total",
    "delannoy_via_stuffle",
    "delannoy_generating_coefficients",
    "compositions",
    "binomial_sum_rhs",
    "binomial_product_rhs",
    "binomial_square_rhs",
    "STUFFLE_CAP",
]

STUFFLE_CAP = 12


def binomial_complex(w, d: int) -> complex:
    """``w (w-1) ... (w-d+1) / d!`` for complex ``w``."""
    if d < 0:
        return 0j
    w = as_complex(w)
    out = 1.0 + 0j
    for k in range(d):
        out *= (w - k) / (k + 1)
    return out


def binomial_exact(w, d: int) -> Fraction:
    """The same product in exact rational arithmetic."""
    if d < 0:
        return Fraction(0)
    w = Fraction(w)
    out = Fraction(1)
    for k in range(d):
        out *= (w - k) / (k + 1)
    return out


@dataclass(frozen=True)
class DelannoyTable:
    """``D^m(c, d)`` for ``0 <= c <= c_max``, ``0 <= d <= d_max``, ``0 <= m <= c+d``."""

    c_max: int
    d_max: int
    entries: dict = field(repr=False, compare=False, default_factory=dict)

    @classmethod
    def build(cls, c_max: int, d_max: int) -> "DelannoyTable":
        if c_max < 0 or d_max < 0:
            raise ValueError("table bounds must be non-negative")
        D: dict[tuple[int, int, int], int] = {}
        for c in range(c_max + 1):
            for d in range(d_max + 1):
                for m in range(c + d + 1):
                    if c == 0 or d == 0:
                        D[c, d, m] = 1 if m == c + d else 0
                    elif m == 0:
                        D[c, d, m] = 0
                    else:
                        D[c, d, m] = (
                            D.get((c - 1, d, m - 1), 0)
                            + D.get((c, d - 1, m - 1), 0)
                            + D.get((c - 1, d - 1, m - 1), 0)
                        )
        return cls(c_max, d_max, D)

    def __call__(self, m: int, c: int, d: int) -> int:
        if not (0 <= c <= self.c_max and 0 <= d <= self.d_max):
            raise IndexError(f"(c, d) = ({c}, {d}) outside the table")
        return self.entries.get((c, d, m), 0)

    def row(self, c: int, d: int) -> dict[int, int]:
        return {m: self(m, c, d) for m in range(c + d + 1)}

    def total(self, c: int, d: int) -> int:
        return sum(self.row(c, d).values())

    def rows(self) -> Iterator[tuple[int, int, int, int]]:
        """``(c, d, m, D^m(c, d))`` in lexicographic order, for CSV output."""
        for c in range(self.c_max + 1):
            for d in range(self.d_max + 1):
                for m in range(c + d + 1):
                    yield c, d, m, self(m, c, d)


def delannoy_layers(c: int, d: int) -> dict[int, int]:
    """``{m: D^m(c, d)}`` for ``m = 0..c+d`` via the three-term recurrence."""
    return DelannoyTable.build(c, d).row(c, d)


def delannoy_total(c: int, d: int) -> int:
    return sum(delannoy_layers(c, d).values())


def delannoy_via_stuffle(c: int, d: int, cap: int = STUFFLE_CAP) -> dict[int, int]:
    """Layer counts read off the harmonic product ``(1,...,1) ⊻ (1,...,1)``.

    With the multiplicative semigroup every merge of ones is again one, so
    each length-m term collapses onto the all-ones tuple of length m.
    """
    if c + d > cap:
        raise ValueError(f"c + d = {c + d} exceeds the cap {cap}")
    prod = harmonic_product(elements([1] * c, MULTIPLICATIVE), elements([1] * d, MULTIPLICATIVE))
    layers = {m: 0 for m in range(c + d + 1)}
    for key, coeff in prod.items():
        layers[len(key)] += coeff
    return layers


def delannoy_generating_coefficients(degree: int) -> dict[tuple[int, int, int], Fraction]:
    """Coefficients of ``1/(1 - xz - yz - xyz)`` up to total degree ``degree``.

    Exact truncated series division: ``S = 1 + u S`` with
    ``u = xz + yz + xyz`` iterated until stable.
    """
    u = {(1, 0, 1): Fraction(1), (0, 1, 1): Fraction(1), (1, 1, 1): Fraction(1)}
    series: dict[tuple[int, int, int], Fraction] = {(0, 0, 0): Fraction(1)}
    # Each pass fixes at least one more total degree.
    for _ in range(degree + 1):
        nxt = {(0, 0, 0): Fraction(1)}
        for (a, b, c), coef in series.items():
            for (da, db, dc), uc in u.items():
                key = (a + da, b + db, c + dc)
                if sum(key) <= degree:
                    nxt[key] = nxt.get(key, Fraction(0)) + coef * uc
        if nxt == series:
            break
        series = nxt
    return series


def compositions(n: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Ordered tuples of ``parts`` positive integers summing to ``n``."""
    if parts == 0:
        if n == 0:
            yield ()
        return
    for cuts in combinations(range(1, n), parts - 1):
        bounds = (0,) + cuts + (n,)
        yield tuple(bounds[i + 1] - bounds[i] for i in range(parts))


def binomial_sum_rhs(u, v, d: int) -> Fraction:
    """``sum_j binom(v, j) binom(u, d-j)``, which equals ``binom(u+v, d)``."""
    return sum((binomial_exact(v, j) * binomial_exact(u, d - j) for j in range(d + 1)), Fraction(0))


def binomial_product_rhs(u, v, d: int) -> Fraction:
    """``sum_l (sum over compositions of d into l parts of prod binom(u, i)) binom(v, l)``,
    which equals ``binom(uv, d)``."""
    total = Fraction(0)
    for l in range(d + 1):
        inner = Fraction(0)
        for comp in compositions(d, l):
            t = Fraction(1)
            for i in comp:
                t *= binomial_exact(u, i)
            inner += t
        total += inner * binomial_exact(v, l)
    return total


def binomial_square_rhs(w, c: int, d: int, table: DelannoyTable | None = None) -> Fraction:
    """``sum_m D^m(c, d) binom(w, m)``, which equals ``binom(w, c) binom(w, d)``."""
    if table is None or c > table.c_max or d > table.d_max:
        table = DelannoyTable.build(c, d)
    return sum((table(m, c, d) * binomial_exact(w, m) for m in range(c + d + 1)), Fraction(0))
