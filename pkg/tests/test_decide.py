from math import gcd

import pytest
from hypothesis import given, strategies as st

from twobridge.decide import (
    HOMOTOPY_P, HOMOTOPY_WHITEHEAD, Outcome, Primitivity, are_homotopic, has_epimorphism,
    in_free_sides, is_hyperbolic, is_null_homotopic, one_over_p_pairs, peripheral_status, primitivity,
)
from twobridge.farey import INF, Slope
from twobridge.orbit import apply, compose_trace


def S(t):
    return Slope.parse(t)


@st.composite
def half_slopes(draw, max_p=40):
    p = draw(st.integers(2, max_p))
    q = draw(st.integers(1, p // 2).filter(lambda q: gcd(q, p) == 1))
    return Slope(q, p)


@st.composite
def any_slopes(draw, max_den=60):
    d = draw(st.integers(1, max_den))
    n = draw(st.integers(-3 * max_den, 3 * max_den).filter(lambda n: gcd(n, d) == 1))
    return Slope(n, d)


@pytest.mark.parametrize("r,want", [("2/5", True), ("1/3", False), ("3/8", True), ("4/5", False)])
def test_is_hyperbolic(r, want):
    assert is_hyperbolic(r) is want


@pytest.mark.parametrize("r,s,want", [("1/3", "7/3", True), ("2/5", "1/3", False), ("2/5", "inf", True)])
def test_null_homotopic(r, s, want):
    assert is_null_homotopic(r, s).null_homotopic is want


def test_null_homotopic_requires_unit_r():
    with pytest.raises(ValueError):
        is_null_homotopic("3/2", "1/3")


@pytest.mark.parametrize("s,want", [("2/5", True), ("12/5", True), ("1/3", False)])
def test_epimorphism(s, want):
    assert has_epimorphism("2/5", s) is want


@pytest.mark.parametrize("r,s,t,clause", [
    ("3/8", "1/6", "3/10", HOMOTOPY_WHITEHEAD),
    ("3/8", "3/4", "5/12", HOMOTOPY_WHITEHEAD),
    ("1/3", "1/2", "1/1", HOMOTOPY_P),
])
def test_homotopic_exceptions(r, s, t, clause):
    v = are_homotopic(r, s, t)
    assert v.outcome is Outcome.HOMOTOPIC and v.witness == clause


def test_distinct_normal_forms_not_homotopic():
    v = are_homotopic("2/5", "1/3", "1/2")
    assert v.outcome is Outcome.NOT_HOMOTOPIC and not v.homotopic


def test_null_pair():
    assert are_homotopic("2/5", "inf", "12/5").outcome is Outcome.NULL_HOMOTOPIC


def test_large_r_needs_mirror():
    with pytest.raises(ValueError):
        are_homotopic("5/8", "1/6", "3/10")
    v = are_homotopic("5/8", "5/6", "7/10", mirror=True)
    assert v.mirrored and v.witness == HOMOTOPY_WHITEHEAD


@given(half_slopes(), any_slopes(), any_slopes())
def test_homotopy_symmetric(r, s, t):
    assert are_homotopic(r, s, t).outcome is are_homotopic(r, t, s).outcome


@given(half_slopes(), any_slopes())
def test_homotopy_reflexive(r, s):
    assert are_homotopic(r, s, s).homotopic


@given(half_slopes(), any_slopes(), any_slopes())
def test_homotopy_depends_only_on_orbits(r, s, t):
    s2 = Slope(s.num + 2 * s.den, s.den)
    t2 = Slope(-t.num, t.den)
    assert are_homotopic(r, s, t).outcome is are_homotopic(r, s2, t2).outcome


@pytest.mark.parametrize("p", range(2, 51))
def test_one_over_p_pairs_lie_in_free_sides(p):
    r = Slope(1, p)
    for s, t in one_over_p_pairs(p, 60):
        assert in_free_sides(r, s) and in_free_sides(r, t)
        assert are_homotopic(r, s, t).witness == HOMOTOPY_P


@pytest.mark.parametrize("r,s,clause,n", [
    ("2/5", "1/5", "Thm2.6(1)(i)", None),
    ("2/5", "3/5", "Thm2.6(1)(i)", None),
    ("3/7", "4/7", "Thm2.6(1)(ii)", 3),
    ("2/9", "1/9", "Thm2.6(1)(iii)", 4),
])
def test_peripheral(r, s, clause, n):
    v = peripheral_status(r, s)
    assert v.peripheral and v.clause == clause and v.n == n


def test_not_peripheral():
    assert not peripheral_status("2/5", "1/3").peripheral


def test_peripheral_needs_hyperbolic():
    with pytest.raises(ValueError):
        peripheral_status("1/3", "1/2")


@pytest.mark.parametrize("r,s,exp", [("2/5", "2/7", 3), ("2/5", "3/4", 3), ("3/7", "2/7", 2), ("2/7", "3/7", 2)])
def test_powers(r, s, exp):
    v = primitivity(r, s)
    assert v.kind is Primitivity.POWER and v.exponent == exp
    assert str(v) == f"PowerOfPrimitive({exp})"


def test_primitive():
    v = primitivity("5/17", "1/3")
    assert v.kind is Primitivity.PRIMITIVE and str(v) == "Primitive"


def test_primitivity_of_trivial_loop_rejected():
    with pytest.raises(ValueError):
        primitivity("2/5", INF)


def test_null_verdict_trace_is_exact():
    v = is_null_homotopic("5/17", "7/24")
    assert apply(compose_trace(v.trace), "7/24") == v.normal_form
