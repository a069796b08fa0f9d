from fractions import Fraction

import pytest

from fibrecount.multiindex import MultiIndex, unit
from fibrecount.series import TruncatedSeries


def mi(text):
    return MultiIndex.parse(text)


def var(a, j, max_degree=6):
    return TruncatedSeries.variable(a, j, max_degree)


def test_zero_one_variable():
    z = TruncatedSeries.zero(4)
    one = TruncatedSeries.one(4)
    x = var("a", 0, 4)
    assert not z
    assert one.coefficient(MultiIndex([])) == 1
    assert x.coefficient(unit("a", 0)) == 1
    assert x.coefficient(unit("a", 1)) == 0


def test_ring_identities():
    x, y = var("a", 0), var("a", 1)
    one = TruncatedSeries.one(6)
    assert x + y == y + x
    assert (x + y) * (x - y) == x * x - y * y
    assert x * one == x
    assert x * TruncatedSeries.zero(6) == TruncatedSeries.zero(6)
    assert (x + y) ** 2 == x * x + 2 * x * y + y * y


def test_truncation_drops_high_degree():
    x = var("a", 0, 2)
    cube = x * x * x
    assert cube == TruncatedSeries.zero(2)
    sq = x * x
    assert sq.coefficient(mi("a:0=2")) == 1


def test_bound_mismatch_raises():
    with pytest.raises(ValueError):
        var("a", 0, 3) + var("a", 0, 4)
    with pytest.raises(ValueError):
        var("a", 0, 3) * var("a", 0, 4)


def test_scalar_multiplication():
    x = var("a", 0)
    half = Fraction(1, 2) * x
    assert half.coefficient(unit("a", 0)) == Fraction(1, 2)
    assert (2 * half) == x
    assert (x * 0) == TruncatedSeries.zero(6)


def test_substitute_powers():
    x, y = var("a", 0), var("b", 2)
    s = x + x * y
    t = s.substitute_powers(2)
    assert t.coefficient(mi("a:0=2")) == 1
    assert t.coefficient(mi("a:0=2,b:2=2")) == 1
    assert t.coefficient(mi("a:0=1")) == 0
    # scaling past the bound truncates
    u = (x * y).substitute_powers(4)
    assert u == TruncatedSeries.zero(6)


def test_sorted_terms_are_deterministic():
    s = var("b", 1) + var("a", 0) + var("a", -1)
    monos = [m for m, _ in s.sorted_terms()]
    assert monos == sorted(monos, key=lambda m: m.sort_key())


def test_equality_requires_same_bound():
    a3 = TruncatedSeries.one(3)
    a4 = TruncatedSeries.one(4)
    assert a3 != a4
