"""Seeded identity suites behind ``mzinterp verify``.

Each suite draws its inputs from ``random.Random(seed)`` and reports, per
identity, the number of samples, the largest deviation and the pass/fail
verdict against a fixed tolerance.
"""

from __future__ import annotations

import random
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable

from .combinatorics import (
    DelannoyTable,
    binomial_complex,
    binomial_exact,
    binomial_product_rhs,
    binomial_square_rhs,
    binomial_sum_rhs,
    delannoy_generating_coefficients,
    delannoy_via_stuffle,
)
from .g_function import g_eval, g_explicit, g_newton, g_newton_exact, g_recursive
from .mellin import psi_mellin
from .quasi_shuffle import ADDITIVE, MULTIPLICATIVE, EvalMap, elements, harmonic_product
from .zeta_series import psi_series

__all__ = ["Check", "Report", "SUITES", "run_suite"]


@dataclass
class Check:
    identity: str
    samples: int
    max_deviation: float
    tolerance: float
    passed: bool = field(init=False)

    def __post_init__(self):
        self.passed = self.max_deviation <= self.tolerance


@dataclass
class Report:
    suite: str
    seed: int
    checks: list[Check]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def as_dict(self) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "passed": self.passed,
            "checks": [asdict(c) for c in self.checks],
        }


def _dev(a: complex, b: complex) -> float:
    """Absolute deviation below magnitude one, relative above."""
    return abs(complex(a) - complex(b)) / max(1.0, abs(complex(b)))


def _cw(rng: random.Random, radius: float) -> complex:
    return complex(rng.uniform(-radius, radius), rng.uniform(-radius, radius))


def _rational(rng: random.Random, lo: int, hi: int, den: int = 20) -> Fraction:
    return Fraction(rng.randint(lo, hi), den)


def _split_depths(rng: random.Random, total: int) -> tuple[int, int]:
    a = rng.randint(1, total - 1)
    return a, rng.randint(1, total - a)


def suite_harmonic(rng: random.Random, samples: int) -> list[Check]:
    worst_psi = 0.0
    for _ in range(samples):
        dp, dq = _split_depths(rng, 4)
        p = elements([_rational(rng, 30, 60) for _ in range(dp)], ADDITIVE)
        q = elements([_rational(rng, 30, 60) for _ in range(dq)], ADDITIVE)
        w = _cw(rng, 2.0) + 1.0
        Psi = EvalMap(lambda t: psi_series([float(x) for x in t], w))
        worst_psi = max(worst_psi, _dev(Psi(p) * Psi(q), Psi(harmonic_product(p, q))))
    worst_g = 0.0
    for _ in range(samples):
        dp, dq = _split_depths(rng, 4)
        p = elements([_rational(rng, 1, 19) for _ in range(dp)], MULTIPLICATIVE)
        q = elements([_rational(rng, 1, 19) for _ in range(dq)], MULTIPLICATIVE)
        w = _cw(rng, 3.5)
        G = EvalMap(lambda t: g_eval([float(x) for x in t], w))
        worst_g = max(worst_g, _dev(G(p) * G(q), G(harmonic_product(p, q))))
    return [
        Check("Psi(p)Psi(q) = Psi(p * q), additive", samples, worst_psi, 1e-8),
        Check("G(p)G(q) = G(p * q), multiplicative", samples, worst_g, 1e-9),
    ]


_MELLIN_W = (0.0, 1.0, 2.0, 0.5, 1.7 + 0.3j, -0.4 + 1.1j)


def suite_mellin(rng: random.Random, samples: int) -> list[Check]:
    worst = 0.0
    for k in range(samples):
        d = rng.randint(1, 2)
        s = [complex(rng.uniform(1.2, 3.0), rng.uniform(-1.0, 1.0)) for _ in range(d)]
        w = _MELLIN_W[k % len(_MELLIN_W)]
        worst = max(worst, abs(psi_mellin(s, w).value - psi_series(s, w).value))
    return [Check("quadrature = series, d <= 2", samples, worst, 1e-6)]


def suite_newton(rng: random.Random, samples: int) -> list[Check]:
    worst_exp, worst_rec = 0.0, 0.0
    for _ in range(samples):
        d = rng.randint(1, 3)
        q = [rng.uniform(0.95, 1.05) for _ in range(d)]
        w = _cw(rng, 3.0)
        n = g_newton(q, w, 1e-14).value
        worst_rec = max(worst_rec, _dev(n, g_recursive(q, w)))
        worst_exp = max(worst_exp, _dev(n, g_explicit(q, w)))
    return [
        Check("Newton series = explicit formula, entries in [0.95, 1.05]", samples, worst_exp, 1e-8),
        Check("Newton series = recursion, entries in [0.95, 1.05]", samples, worst_rec, 1e-8),
    ]


def suite_special_values(rng: random.Random, samples: int) -> list[Check]:
    worst_bin, worst_one = 0.0, 0.0
    exact_bad = 0
    for _ in range(samples):
        d = rng.randint(1, 6)
        w = _cw(rng, 4.0)
        worst_bin = max(worst_bin, _dev(g_eval([1.0] * d, w).value, binomial_complex(w, d)))
        wr = _rational(rng, -80, 80, 7)
        if g_newton_exact([1] * d, wr) != binomial_exact(wr, d):
            exact_bad += 1
        dd = rng.randint(2, 4)
        q = [rng.uniform(0.1, 1.9) for _ in range(dd)]
        worst_one = max(worst_one, abs(g_eval(q, 1.0).value))
    return [
        Check("G(1,...,1; w) = binom(w, d)", samples, worst_bin, 1e-10),
        Check("G(1,...,1; w) = binom(w, d), rational path", samples, float(exact_bad), 0.0),
        Check("G^d(q; 1) = 0 for d >= 2", samples, worst_one, 1e-10),
    ]


def suite_delannoy(rng: random.Random, samples: int) -> list[Check]:
    table = DelannoyTable.build(10, 10)
    bad = 0
    for c in range(7):
        for d in range(7):
            if delannoy_via_stuffle(c, d) != table.row(c, d):
                bad += 1
    gf = delannoy_generating_coefficients(10)
    gf_bad = sum(
        1
        for c in range(11)
        for d in range(11)
        for m in range(c + d + 1)
        if c + d + m <= 10 and gf.get((c, d, m), 0) != table(m, c, d)
    )
    id_bad = 0
    for _ in range(samples):
        u, v = _rational(rng, -60, 60, 7), _rational(rng, -60, 60, 11)
        n = rng.randint(0, 6)
        c, d = rng.randint(0, 5), rng.randint(0, 5)
        id_bad += binomial_sum_rhs(u, v, n) != binomial_exact(u + v, n)
        id_bad += binomial_product_rhs(u, v, n) != binomial_exact(u * v, n)
        id_bad += binomial_square_rhs(u, c, d, table) != binomial_exact(u, c) * binomial_exact(u, d)
    return [
        Check("recurrence layers = stuffle layers, c, d <= 6", 49, float(bad), 0.0),
        Check("generating series coefficients, degree <= 10", len(gf), float(gf_bad), 0.0),
        Check("binomial identities (sum, product, square)", 3 * samples, float(id_bad), 0.0),
    ]


SUITES: dict[str, Callable[[random.Random, int], list[Check]]] = {
    "harmonic": suite_harmonic,
    "mellin": suite_mellin,
    "newton": suite_newton,
    "special-values": suite_special_values,
    "delannoy": suite_delannoy,
}


def run_suite(name: str, seed: int = 0, samples: int = 20) -> Report:
    if samples < 1:
        raise ValueError("samples must be positive")
    if name == "all":
        checks = []
        for key in SUITES:
            checks.extend(SUITES[key](random.Random(f"{seed}:{key}"), samples))
        return Report("all", seed, checks)
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}")
    return Report(name, seed, SUITES[name](random.Random(seed), samples))
