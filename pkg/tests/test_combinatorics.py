from fractions import Fraction
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mzinterp import (
    DelannoyTable,
    binomial_complex,
    binomial_exact,
    delannoy_layers,
    delannoy_total,
    delannoy_via_stuffle,
)
from mzinterp.combinatorics import (
    binomial_product_rhs,
    binomial_square_rhs,
    binomial_sum_rhs,
    compositions,
    delannoy_generating_coefficients,
)

# central Delannoy numbers and the first rows of the square array
DELANNOY = {(0, 0): 1, (1, 1): 3, (2, 1): 5, (2, 2): 13, (3, 3): 63, (4, 4): 321, (3, 2): 25, (5, 1): 11}


def test_binomial_examples():
    assert binomial_complex(0.3 + 2j, 0) == 1
    assert binomial_complex(5, 2) == 10
    assert binomial_complex(0.5, 2) == pytest.approx(-0.125, abs=1e-16)
    assert binomial_exact(Fraction(1, 2), 2) == Fraction(-1, 8)
    assert binomial_exact(7, 3) == 35 and binomial_exact(3, 5) == 0
    assert binomial_complex(2.0, -1) == 0 and binomial_exact(2, -1) == 0


def test_layer_examples():
    assert delannoy_layers(1, 1) == {0: 0, 1: 1, 2: 2}
    assert delannoy_layers(2, 1) == {0: 0, 1: 0, 2: 2, 3: 3}
    for c in range(5):
        assert delannoy_layers(c, 0) == {m: int(m == c) for m in range(c + 1)}
        assert delannoy_layers(0, c) == {m: int(m == c) for m in range(c + 1)}


def test_totals_are_delannoy_numbers():
    for (c, d), D in DELANNOY.items():
        assert delannoy_total(c, d) == D


def test_table_invariants():
    t = DelannoyTable.build(6, 5)
    assert t(0, 0, 0) == 1
    for c in range(7):
        for d in range(6):
            assert t(0, c, d) == int(c == 0 and d == 0)
            assert t.total(c, d) == sum(v for (cc, dd, _, v) in t.rows() if (cc, dd) == (c, d))
            # layers live between max(c, d) and c + d
            assert all(v == 0 for m, v in t.row(c, d).items() if m < max(c, d))
    with pytest.raises(IndexError):
        t(1, 7, 0)
    with pytest.raises(ValueError):
        DelannoyTable.build(-1, 2)


def test_table_is_symmetric_and_large_entries_are_exact():
    t = DelannoyTable.build(40, 40)
    assert t.row(17, 9) == t.row(9, 17)
    central = sum(comb(40, k) * comb(40 + k, k) for k in range(41))
    assert t.total(40, 40) == central and central > 2**64
    assert isinstance(t.total(40, 40), int)


def test_stuffle_layers():
    assert delannoy_via_stuffle(1, 1) == {0: 0, 1: 1, 2: 2}
    assert delannoy_via_stuffle(2, 1) == {0: 0, 1: 0, 2: 2, 3: 3}
    assert delannoy_via_stuffle(0, 3) == {0: 0, 1: 0, 2: 0, 3: 1}
    with pytest.raises(ValueError):
        delannoy_via_stuffle(7, 6)


def test_recurrence_equals_stuffle():
    for c in range(7):
        for d in range(7):
            assert delannoy_layers(c, d) == delannoy_via_stuffle(c, d)


def test_generating_series_to_degree_ten():
    table = DelannoyTable.build(10, 10)
    gf = delannoy_generating_coefficients(10)
    for (c, d, m), coef in gf.items():
        assert coef == table(m, c, d)
    assert all(isinstance(v, Fraction) for v in gf.values())
    for c in range(11):
        for d in range(11):
            for m in range(c + d + 1):
                if c + d + m <= 10:
                    assert gf.get((c, d, m), 0) == table(m, c, d)


def test_compositions_enumeration():
    assert list(compositions(0, 0)) == [()]
    assert list(compositions(3, 0)) == []
    assert sorted(compositions(4, 2)) == [(1, 3), (2, 2), (3, 1)]
    assert len(list(compositions(8, 4))) == 35


def test_square_identity_spot_example():
    t = DelannoyTable.build(2, 1)
    w = Fraction(7, 3)
    assert 3 * binomial_exact(w, 3) + 2 * binomial_exact(w, 2) == binomial_exact(w, 2) * binomial_exact(w, 1)
    assert binomial_square_rhs(w, 2, 1, t) == binomial_exact(w, 2) * binomial_exact(w, 1)


rat = st.fractions(min_value=-12, max_value=12, max_denominator=30)


@given(rat, rat, st.integers(0, 8))
def test_vandermonde(u, v, d):
    assert binomial_sum_rhs(u, v, d) == binomial_exact(u + v, d)


@given(rat, rat, st.integers(0, 6))
def test_composition_identity(u, v, d):
    assert binomial_product_rhs(u, v, d) == binomial_exact(u * v, d)


@given(rat, st.integers(0, 5), st.integers(0, 5))
def test_square_identity(w, c, d):
    assert binomial_square_rhs(w, c, d) == binomial_exact(w, c) * binomial_exact(w, d)
