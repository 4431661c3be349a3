import pytest
from hypothesis import given, settings, strategies as st

from addcomp.core_sets import (
    check_excess_inequality,
    delta_profile,
    doubled_remark_holds,
    excess,
    int_set,
    mass,
    moment_identities,
    sigma_profile,
    sumset,
)
from addcomp.errors import EmptyU
from oracles import delta, sigma

int_sets = st.frozensets(st.integers(-60, 60), max_size=14).map(int_set)
nonempty_sets = st.frozensets(st.integers(-60, 60), min_size=1, max_size=14).map(int_set)


@pytest.mark.parametrize("U, V, expected", [
    ((1, 2), (1, 2, 3), (2, 3, 4, 5)),
    ((), (5,), ()),
    ((0,), (-3, 4, 9), (-3, 4, 9)),
])
def test_sumset(U, V, expected):
    assert sumset(U, V) == expected


@pytest.mark.parametrize("U, V", [((1, 2), (1, 2, 3)), ((0,), (0,)), ((1, 2), (10,)), ((0, 1, 2, 3),) * 2])
def test_profiles_match_enumeration(U, V):
    assert sigma_profile(U, V) == sigma(U, V)
    assert delta_profile(U, V) == delta(U, V)


def test_profile_examples():
    assert sigma_profile((1, 2), (1, 2, 3)) == {2: 1, 3: 2, 4: 2, 5: 1}
    assert sigma_profile((1, 2), (10,)) == {11: 1, 12: 1}
    assert delta_profile((1, 2), (1, 2, 3)) == {-1: 1, 0: 2, 1: 2, 2: 1}
    assert delta_profile((5,), (1, 9)) == {-4: 1, 4: 1}
    assert delta_profile((0,), (0,)) == {0: 1}


@pytest.mark.parametrize("profile, expected", [({2: 1, 3: 2, 4: 2, 5: 1}, 2), ({0: 1}, 0), ({7: 5}, 4), ({}, 0)])
def test_excess(profile, expected):
    assert excess(profile) == expected


@pytest.mark.parametrize("U, V, lhs, rhs", [
    ((1, 2), (1, 2, 3), 2, 2),
    ((0,), (0,), 0, 0),
    # 16 pairs over 7 sums / 7 differences
    ((0, 1, 2, 3), (0, 1, 2, 3), 9, 9),
])
def test_check_excess_inequality_examples(U, V, lhs, rhs):
    res = check_excess_inequality(U, V)
    assert (res.lhs, res.rhs_numerator, res.holds) == (lhs, rhs, True)


def test_empty_u_rejected():
    with pytest.raises(EmptyU):
        check_excess_inequality((), (1, 2))


@pytest.mark.parametrize("U, V, sums, squares", [
    ((1, 2), (1, 2, 3), 6, 10),
    ((), (1, 2), 0, 0),
    ((0, 1), (0, 2), 4, 4),
])
def test_moment_identity_examples(U, V, sums, squares):
    m = moment_identities(U, V)
    assert (m.sum_sigma, m.sum_delta) == (sums, sums)
    assert (m.sum_sigma_sq, m.sum_delta_sq) == (squares, squares)
    assert m.first_ok and m.second_ok


@settings(max_examples=300, deadline=None)
@given(nonempty_sets, int_sets)
def test_excess_inequality_property(U, V):
    s, d = sigma_profile(U, V), delta_profile(U, V)
    assert len(U) * excess(s) >= excess(d)
    assert check_excess_inequality(U, V).holds


@settings(max_examples=300, deadline=None)
@given(int_sets, int_sets)
def test_profile_properties(U, V):
    s, d = sigma_profile(U, V), delta_profile(U, V)
    assert mass(s) == mass(d) == len(U) * len(V)
    assert sum(c * c for c in s.values()) == sum(c * c for c in d.values())
    assert all(c <= min(len(U), len(V)) for c in s.values())
    assert all(c >= 1 for c in s.values())
    assert excess(s) == mass(s) - len(s)
    assert sumset(U, V) == tuple(sorted(s))
    assert doubled_remark_holds(s) and doubled_remark_holds(d)
