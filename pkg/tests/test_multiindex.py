import itertools

import pytest
from hypothesis import given, strategies as st

from fibrecount.multiindex import (MultiIndex, ParseError, apply_shift,
                                   enumerate_multiindices, enumerate_profiles,
                                   find_shift, sub_multiindices, unit)


def mi(text):
    return MultiIndex.parse(text)


# -- construction and canonical form ------------------------------------------

def test_parse_str_roundtrip():
    k = mi("a:1=1,a:0=1,a:-1=2")
    assert str(k) == "a:-1=2,a:0=1,a:1=1"
    assert MultiIndex.parse(str(k)) == k


def test_empty_prints_zero():
    assert str(MultiIndex([])) == "0"
    assert not MultiIndex([])


def test_entry_order_is_canonical():
    assert mi("b:0=1,a:2=3") == mi("a:2=3,b:0=1")
    assert mi("a:-1=1,a:3=2").items() == ((("a", -1), 1), (("a", 3), 2))


@pytest.mark.parametrize("bad", [
    "a:1=1,a:1=2",      # duplicate key
    "a:1=0",            # zero count
    "a:1=-2",           # negative count
    "a:-2=1",           # index below -1
    "1a:0=1",           # bad decoration name
    "garbage",
    "a:0",
    "",
])
def test_parse_rejects(bad):
    with pytest.raises(ParseError):
        MultiIndex.parse(bad)


def test_constructor_rejects_negative():
    with pytest.raises(ValueError):
        MultiIndex([(("a", 0), -1)])
    with pytest.raises(ValueError):
        MultiIndex([(("a", -2), 1)])


# -- grading -------------------------------------------------------------------

def test_degree_weight_sigma():
    k = mi("a:1=1,a:0=1,a:-1=2")
    assert k.degree() == 4
    assert k.weight() == -1
    assert k.symmetry_factor() == 2    # 2! * 1! * 1!
    assert mi("a:2=3,b:-1=2").symmetry_factor() == 12


def test_max_index():
    assert mi("a:1=1,b:3=1").max_index() == 3
    assert mi("a:1=1,b:3=1").max_index("a") == 1
    assert MultiIndex([]).max_index() == -2


# -- algebra -------------------------------------------------------------------

def test_add_sub_scale():
    k = mi("a:0=1") + mi("a:0=2,b:1=1")
    assert k == mi("a:0=3,b:1=1")
    assert k - mi("b:1=1") == mi("a:0=3")
    assert mi("a:0=2").scale(3) == mi("a:0=6")
    with pytest.raises(ValueError):
        mi("a:0=1") - mi("a:0=2")
    with pytest.raises(ValueError):
        mi("a:0=1") - mi("b:0=1")


def test_includes():
    assert mi("a:0=3,b:1=1").includes(mi("a:0=2"))
    assert not mi("a:0=1").includes(mi("a:0=2"))
    assert mi("a:0=1").includes(MultiIndex([]))


def test_left_shift():
    low = mi("a:0=1,a:1=2")
    assert low.is_lowering()
    assert low.left_shift() == mi("a:-1=1,a:0=2")
    with pytest.raises(ValueError):
        mi("a:-1=1").left_shift()


def test_sub_multiindices_counts():
    k = mi("a:0=2,b:1=1")
    subs = sub_multiindices(k)
    assert len(subs) == (2 + 1) * (1 + 1)
    assert all(k.includes(s) for s in subs)
    assert MultiIndex([]) in subs and k in subs


# -- shifts --------------------------------------------------------------------

def test_apply_shift_basic():
    # removing one vertex-slot at (a,0) replaces it by one at (a,-1)
    assert apply_shift(mi("a:0=2"), unit("a", 0)) == mi("a:-1=1,a:0=1")
    assert apply_shift(mi("a:1=1"), mi("a:1=1,a:0=1")) == mi("a:-1=1")
    # shift consuming more than available is invalid
    assert apply_shift(mi("a:0=1"), mi("a:0=2")) is None
    assert apply_shift(mi("a:0=1"), mi("a:1=1")) is None


def test_find_shift_known_pair():
    low = find_shift(mi("a:1=1"), mi("a:-1=1"))
    assert low == mi("a:1=1,a:0=1")
    assert apply_shift(mi("a:1=1"), low) == mi("a:-1=1")


def test_find_shift_unreachable():
    assert find_shift(mi("a:-1=1"), mi("a:0=1")) is None
    assert find_shift(mi("a:0=1"), mi("b:-1=1")) is None


def test_find_shift_identity():
    k = mi("a:0=2,b:1=1")
    assert find_shift(k, k) == MultiIndex([])


def _all_lowerings(max_index, max_count):
    """Every lowering multi-index over decoration 'a' up to the given size."""
    keys = [("a", j) for j in range(0, max_index + 1)]
    out = []
    for counts in itertools.product(range(max_count + 1), repeat=len(keys)):
        entries = [(key, c) for key, c in zip(keys, counts) if c]
        out.append(MultiIndex(entries))
    return out


def test_find_shift_matches_exhaustive_search():
    # find_shift must agree with a brute-force scan, and the solution is unique
    space = enumerate_multiindices(("a",), 3, 2)
    lowerings = _all_lowerings(2, 6)
    for k in space:
        for b in space:
            hits = [l for l in lowerings if apply_shift(k, l) == b]
            assert len(hits) <= 1
            got = find_shift(k, b)
            if hits:
                assert got == hits[0]
            else:
                assert got is None


# -- enumeration ---------------------------------------------------------------

def test_enumerate_multiindices_count():
    # two keys (a,-1), (a,0); degrees 0..2 give 1 + 2 + 3 entries
    got = enumerate_multiindices(("a",), 2, 0)
    assert len(got) == 6
    assert got == sorted(got, key=lambda k: k.sort_key())
    assert len(set(got)) == len(got)


def test_enumerate_profiles_brute():
    alph = ("a", "b")
    profiles = enumerate_profiles(alph, 4)
    brute = [k for k in enumerate_multiindices(alph, 4, 2)
             if k.weight() == -1 and k.degree() >= 1]
    assert profiles == sorted(brute, key=lambda k: k.sort_key())
    assert all(p.weight() == -1 for p in profiles)


# -- property tests ------------------------------------------------------------

entry_st = st.tuples(
    st.tuples(st.sampled_from(["a", "b"]), st.integers(min_value=-1, max_value=4)),
    st.integers(min_value=1, max_value=4))
mi_st = st.lists(entry_st, max_size=6).map(MultiIndex)


@given(mi_st, mi_st)
def test_add_commutes_and_grades(x, y):
    assert x + y == y + x
    assert (x + y).degree() == x.degree() + y.degree()
    assert (x + y).weight() == x.weight() + y.weight()


@given(mi_st, mi_st)
def test_sub_inverts_add(x, y):
    assert (x + y) - y == x


@given(mi_st)
def test_parse_roundtrip_property(x):
    assert MultiIndex.parse(str(x)) == x
    assert hash(MultiIndex.parse(str(x))) == hash(x)
