"""Quasi-shuffle (harmonic product) Hopf algebra over an abelian semigroup.

Elements of the algebra are integer combinations of tuples whose entries
come from one of two semigroups of exact rationals:

* ``additive``: ``(Q, +)``, the home of the s-variables of Psi;
* ``multiplicative``: ``(Q_{>0}, *)``, the home of the q-variables of G.

Numeric evaluation happens only at the :class:`EvalMap` boundary, where an
entry is converted to ``float``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product as iproduct
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .kernel import DomainError, EvalResult, MZError, Method, RegionError, as_complex

__all__ = [
    "ADDITIVE",
    "MULTIPLICATIVE",
    "FlavorError",
    "SemigroupElement",
    "FormalTupleSum",
    "elements",
    "harmonic_product",
    "coproduct",
    "star_closure",
    "antipode",
    "EvalMap",
    "counit",
    "convolve",
    "eval_H",
    "eval_Z",
    "H_map",
    "Z_map",
    "render",
]

ADDITIVE = "additive"
MULTIPLICATIVE = "multiplicative"
_FLAVORS = (ADDITIVE, MULTIPLICATIVE)


class FlavorError(MZError, TypeError):
    """Operands come from different semigroups."""


@dataclass(frozen=True, order=True)
class SemigroupElement:
    flavor: str
    value: Fraction

    def __post_init__(self):
        if self.flavor not in _FLAVORS:
            raise ValueError(f"unknown flavor {self.flavor!r}")
        v = Fraction(self.value)
        if self.flavor == MULTIPLICATIVE and v <= 0:
            raise DomainError(f"multiplicative elements must be positive, got {v}")
        object.__setattr__(self, "value", v)

    def combine(self, other: "SemigroupElement") -> "SemigroupElement":
        if other.flavor != self.flavor:
            raise FlavorError(f"cannot combine {self.flavor} with {other.flavor}")
        if self.flavor == ADDITIVE:
            return SemigroupElement(self.flavor, self.value + other.value)
        return SemigroupElement(self.flavor, self.value * other.value)

    def __float__(self) -> float:
        return float(self.value)

    def __str__(self) -> str:
        return str(self.value)


def elements(values: Iterable, flavor: str) -> tuple[SemigroupElement, ...]:
    """Build a tuple of semigroup elements from rationals (or int/str literals)."""
    return tuple(SemigroupElement(flavor, Fraction(v)) for v in values)


def _tuple_flavor(t: Sequence[SemigroupElement]) -> str | None:
    flavors = {x.flavor for x in t}
    if len(flavors) > 1:
        raise FlavorError(f"mixed flavors inside one tuple: {sorted(flavors)}")
    return flavors.pop() if flavors else None


def _sort_key(t: tuple) -> tuple:
    return (len(t), tuple(x.value for x in t))


class FormalTupleSum(Mapping):
    """An immutable integer linear combination of tuples.

    Zero coefficients are never stored. Keys keep a canonical order
    (depth, then entries) so iteration, equality and rendering are
    deterministic.
    """

    __slots__ = ("_terms", "_flavor", "_hash")

    def __init__(self, terms: Mapping[tuple, int] | Iterable[tuple[tuple, int]] = ()):
        acc: dict[tuple, int] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        flavor = None
        for key, coeff in items:
            key = tuple(key)
            f = _tuple_flavor(key)
            if f is not None:
                if flavor is None:
                    flavor = f
                elif f != flavor:
                    raise FlavorError(f"mixed flavors in one sum: {flavor} and {f}")
            if not isinstance(coeff, int):
                raise TypeError("coefficients must be integers")
            acc[key] = acc.get(key, 0) + coeff
        self._terms = {k: acc[k] for k in sorted(acc, key=_sort_key) if acc[k] != 0}
        self._flavor = flavor
        self._hash = None

    @classmethod
    def of(cls, t: Sequence[SemigroupElement], coeff: int = 1) -> "FormalTupleSum":
        return cls({tuple(t): coeff})

    @classmethod
    def unit(cls) -> "FormalTupleSum":
        return cls({(): 1})

    @property
    def flavor(self) -> str | None:
        """The flavor of the entries, or None when only the empty tuple occurs."""
        return self._flavor

    def __getitem__(self, key) -> int:
        return self._terms[tuple(key)]

    def __iter__(self) -> Iterator[tuple]:
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, FormalTupleSum):
            return self._terms == other._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def _check(self, other: "FormalTupleSum"):
        if self._flavor and other._flavor and self._flavor != other._flavor:
            raise FlavorError(f"flavor mismatch: {self._flavor} vs {other._flavor}")

    def __add__(self, other: "FormalTupleSum") -> "FormalTupleSum":
        if not isinstance(other, FormalTupleSum):
            return NotImplemented
        self._check(other)
        return FormalTupleSum(list(self._terms.items()) + list(other._terms.items()))

    def __neg__(self) -> "FormalTupleSum":
        return FormalTupleSum({k: -c for k, c in self._terms.items()})

    def __sub__(self, other: "FormalTupleSum") -> "FormalTupleSum":
        return self + (-other)

    def __rmul__(self, n: int) -> "FormalTupleSum":
        if not isinstance(n, int):
            return NotImplemented
        return FormalTupleSum({k: n * c for k, c in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return other * self
        if isinstance(other, FormalTupleSum):
            return harmonic_product(self, other)
        return NotImplemented

    def __repr__(self) -> str:
        return f"FormalTupleSum({render(self)})"

    def __str__(self) -> str:
        return render(self)


def render(a: FormalTupleSum) -> str:
    """Text form: ``+1·(1/2,3) −2·(2)``, terms sorted by (depth, entries)."""
    if not a:
        return "0"
    parts = []
    for key, c in a.items():
        sign = "+" if c > 0 else "−"
        body = ",".join(str(x.value) for x in key)
        parts.append(f"{sign}{abs(c)}·({body})")
    return " ".join(parts)


@lru_cache(maxsize=65536)
def _stuffle(t: tuple, s: tuple) -> tuple[tuple[tuple, int], ...]:
    if not t:
        return ((s, 1),)
    if not s:
        return ((t, 1),)
    acc: dict[tuple, int] = {}
    head_t, rest_t = t[0], t[1:]
    head_s, rest_s = s[0], s[1:]
    for head, pieces in (
        (head_t, _stuffle(rest_t, s)),
        (head_s, _stuffle(t, rest_s)),
        (head_t.combine(head_s), _stuffle(rest_t, rest_s)),
    ):
        for key, c in pieces:
            k = (head,) + key
            acc[k] = acc.get(k, 0) + c
    return tuple(acc.items())


def _as_sum(x) -> FormalTupleSum:
    if isinstance(x, FormalTupleSum):
        return x
    return FormalTupleSum.of(tuple(x))


def harmonic_product(a, b) -> FormalTupleSum:
    """Bilinear harmonic (stuffle) product; tuples are promoted to sums."""
    a, b = _as_sum(a), _as_sum(b)
    a._check(b)
    acc: list[tuple[tuple, int]] = []
    for ka, ca in a.items():
        for kb, cb in b.items():
            for key, c in _stuffle(ka, kb):
                acc.append((key, ca * cb * c))
    return FormalTupleSum(acc)


def coproduct(t: Sequence) -> dict[tuple[tuple, tuple], int]:
    """Deconcatenation: ``sum_l (x_1..x_l) ⊗ (x_{l+1}..x_d)``."""
    t = tuple(t)
    return {(t[:l], t[l:]): 1 for l in range(len(t) + 1)}


def star_closure(t: Sequence) -> FormalTupleSum:
    """Sum over all ways of replacing each comma by the semigroup operation."""
    t = tuple(t)
    if len(t) <= 1:
        return FormalTupleSum.of(t)
    acc: list[tuple[tuple, int]] = []
    for pattern in iproduct((False, True), repeat=len(t) - 1):
        out = [t[0]]
        for merge, x in zip(pattern, t[1:]):
            if merge:
                out[-1] = out[-1].combine(x)
            else:
                out.append(x)
        acc.append((tuple(out), 1))
    return FormalTupleSum(acc)


def antipode(t) -> FormalTupleSum:
    """``R(x) = (-1)^d (x_d, ..., x_1)^star``, extended linearly to sums."""
    if isinstance(t, FormalTupleSum):
        acc = FormalTupleSum()
        for key, c in t.items():
            acc = acc + c * antipode(key)
        return acc
    t = tuple(t)
    sign = -1 if len(t) % 2 else 1
    return sign * star_closure(t[::-1])


class EvalMap:
    """A map from tuples to complex numbers, extended linearly to sums.

    ``fn`` receives a tuple (of semigroup elements, or of whatever the caller
    chooses) and returns a complex number or an :class:`EvalResult`.
    """

    def __init__(self, fn: Callable[[tuple], complex | EvalResult], name: str = "F"):
        self._fn = fn
        self.name = name

    def value(self, t: tuple) -> complex:
        r = self._fn(tuple(t))
        return r.value if isinstance(r, EvalResult) else complex(r)

    def __call__(self, x) -> complex:
        if isinstance(x, FormalTupleSum):
            return sum((c * self.value(k) for k, c in x.items()), 0j)
        return self.value(tuple(x))

    def after_antipode(self) -> "EvalMap":
        """The composite ``F ∘ R``."""
        return EvalMap(lambda t: self(antipode(t)), name=f"{self.name}∘R")

    def __repr__(self) -> str:
        return f"EvalMap({self.name})"


counit = EvalMap(lambda t: 1.0 if len(t) == 0 else 0.0, name="ε")


def convolve(F1: EvalMap, F2: EvalMap) -> EvalMap:
    """Convolution ``F1 ⊙ F2 = m (F1 ⊗ F2) Δ``."""

    def fn(t: tuple) -> complex:
        return sum((F1.value(t[:l]) * F2.value(t[l:]) for l in range(len(t) + 1)), 0j)

    return EvalMap(fn, name=f"({F1.name}⊙{F2.name})")


def _entries_float(t: Sequence) -> list:
    return [float(x) if isinstance(x, (SemigroupElement, Fraction)) else x for x in t]


def eval_H(w, q: Sequence, tol: float = 1e-12) -> EvalResult:
    """``H_w(q) = sum_{j_1>...>j_d>=0} q_1^{j_1+w} ... q_d^{j_d+w}`` for 0<q_i<1.

    The inner sums are geometric: with prefix products ``P_m = q_1...q_m``,
    ``H_w(q) = P_d^w prod_i q_i^{d-i} / prod_m (1 - P_m)``.
    """
    w = as_complex(w)
    qs = _entries_float(q)
    for x in qs:
        if isinstance(x, complex) or not 0.0 < float(x) < 1.0:
            raise DomainError(f"H_w needs entries in (0, 1), got {x!r}")
    d = len(qs)
    logs = [math.log(float(x)) for x in qs]
    value = cmath.exp(w * math.fsum(logs))
    acc = 0.0
    for i, lq in enumerate(logs):
        acc += lq
        value *= math.exp((d - 1 - i) * lq) / -math.expm1(acc)
    err = 8 * (d + 1) * 2.2e-16 * abs(value)
    return EvalResult(value, err, Method.EXACT, work=d)


def eval_Z(w, s: Sequence, tol: float = 1e-12) -> EvalResult:
    """``Z_w(s) = sum_{j_1>...>j_d>0} prod (w+j_m)^{-s_m}`` (Re s_m > 1)."""
    from .zeta_series import SeriesConfig, hurwitz_multiple_zeta

    entries = tuple(_entries_float(s))
    for m, sm in enumerate(entries, 1):
        if not complex(sm).real > 1:
            raise RegionError(f"Z_w needs Re(s_{m}) > 1, got {sm!r}")
    return hurwitz_multiple_zeta(entries, w, SeriesConfig(tol=tol))


def H_map(w) -> EvalMap:
    return EvalMap(lambda t: eval_H(w, t), name=f"H_{w}")


def Z_map(w, tol: float = 1e-13) -> EvalMap:
    return EvalMap(lambda t: eval_Z(w, t, tol), name=f"Z_{w}")
