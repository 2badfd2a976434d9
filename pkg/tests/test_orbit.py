from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, strategies as st

from oracles import TargetBall, brute_orbit_targets, coprime_pairs
from twobridge.farey import INF, ONE, ZERO, Slope, fusion_intervals
from twobridge.orbit import (
    FareyEdge, GL2ZElement, apply, compose_trace, gamma_inf_normalize, gap_measure, in_target,
    limit_set_gaps, orbit_ball, orbit_equivalent, orbit_normalize, reflection_matrix,
)


def S(t):
    return Slope.parse(t)


@st.composite
def any_slopes(draw, max_den=200):
    d = draw(st.integers(1, max_den))
    n = draw(st.integers(-4 * max_den, 4 * max_den).filter(lambda n: gcd(n, d) == 1))
    return Slope(n, d)


@st.composite
def unit_slopes(draw, max_p=60):
    p = draw(st.integers(2, max_p))
    q = draw(st.integers(1, p - 1).filter(lambda q: gcd(q, p) == 1))
    return Slope(q, p)


@pytest.mark.parametrize("n", [-3, 0, 1, 4])
def test_reflection_in_vertical_edge(n):
    g = reflection_matrix(FareyEdge(INF, Slope(n, 1)))
    for x in ["1/3", "-5/2", "7"]:
        assert apply(g, x).to_fraction() == 2 * n - S(x).to_fraction()


def test_reflection_in_zero_one():
    g = reflection_matrix(FareyEdge(ZERO, ONE))
    assert (g.a, g.b, g.c, g.d) == (1, 0, 2, -1)
    assert apply(g, "0") == ZERO and apply(g, "1") == ONE


def test_edge_requires_neighbours():
    with pytest.raises(ValueError):
        FareyEdge(S("1/3"), S("1/5"))


@given(st.sampled_from([(INF, ZERO), (ZERO, ONE), (S("2/5"), S("1/3")), (S("5/17"), S("3/10"))]),
       any_slopes())
def test_reflections_are_involutions(edge, s):
    g = reflection_matrix(FareyEdge(*edge))
    assert apply(g, apply(g, s)) == s


@pytest.mark.parametrize("m,s,want", [((1, 0, 0, 1), "2/9", "2/9"), ((1, 2, 0, 1), "1/3", "7/3"),
                                      ((1, 0, 2, -1), "1/2", "1/0")])
def test_apply(m, s, want):
    assert apply(GL2ZElement(*m), s) == S(want)


@pytest.mark.parametrize("s,want", [("7/3", "1/3"), ("-1/3", "1/3"), ("5/3", "1/3")])
def test_gamma_inf_normalize(s, want):
    t, g, edges = gamma_inf_normalize(s)
    assert t == S(want) and apply(g, s) == t and apply(compose_trace(edges), s) == t


def test_gamma_inf_normalize_rejects_infinity():
    with pytest.raises(ValueError):
        gamma_inf_normalize(INF)


@pytest.mark.parametrize("r,s,want", [("2/5", "2/5", "2/5"), ("2/5", "7/3", "1/3")])
def test_orbit_normalize_examples(r, s, want):
    assert orbit_normalize(r, s)[0] == S(want)


def test_orbit_normalize_against_bfs():
    r, s = S("5/17"), S("7/24")
    t, trace = orbit_normalize(r, s)
    assert in_target(r, t)
    assert brute_orbit_targets(r, s, 8) == {(t.num, t.den)}
    assert apply(compose_trace(trace), s) == t


@pytest.mark.parametrize("s,t,want", [("1/7", "1/7", True), ("-1/3", "1/3", True), ("1/3", "1/2", False)])
def test_orbit_equivalent(s, t, want):
    assert orbit_equivalent("2/5", s, t) is want


def test_orbit_ball():
    assert orbit_ball("2/5", "1/7", 0) == {S("1/7")}
    ball = orbit_ball("2/5", "1/3", 1)
    assert {S("-1/3"), S("5/3"), S("7/3")} <= ball


@given(unit_slopes(), any_slopes())
def test_trace_reproduces_normal_form(r, s):
    t, trace = orbit_normalize(r, s)
    assert in_target(r, t)
    assert apply(compose_trace(trace), s) == t


@given(unit_slopes(), any_slopes(), st.integers(0, 3))
def test_normal_form_is_orbit_invariant(r, s, depth):
    t = orbit_normalize(r, s)[0]
    for x in orbit_ball(r, s, depth):
        assert orbit_normalize(r, x)[0] == t


def test_target_ball_matches_plain_bfs():
    for r in coprime_pairs(9):
        tb = TargetBall(r, far_depth=3)
        for s in [S("1/7"), S("3/11"), S("-4/9"), S("13/5"), r]:
            assert tb.targets(s, near_depth=2) == brute_orbit_targets(r, s, 5)


@pytest.mark.parametrize("r", list(coprime_pairs(12)), ids=str)
def test_normal_form_unique_within_ball(r):
    tb = TargetBall(r, far_depth=6)
    slopes = [Slope(a, b) for b in range(1, 21) for a in range(0, b + 1) if gcd(a, b) == 1] + [INF]
    expected = [orbit_normalize(r, s)[0] for s in slopes]
    assert tb.mismatches(slopes, expected, near_depth=3) == []


def test_limit_set_depth_zero_is_free_sides():
    gaps = limit_set_gaps("2/5", 0)
    assert [(g.lo, g.hi) for g in gaps] == [(Fraction(0), Fraction(1, 3)), (Fraction(1, 2), Fraction(1))]


def test_limit_set_depth_one_reflects_free_sides():
    r = S("2/5")
    fd = fusion_intervals(r)
    gaps = limit_set_gaps(r, 1)
    for e in (FareyEdge(r, fd.r1), FareyEdge(r, fd.r2)):
        g = reflection_matrix(e)
        for side in ((ZERO, fd.r1), (fd.r2, ONE)):
            a, b = sorted(apply(g, x).to_fraction() for x in side)
            if 0 <= a and b <= 1:
                assert any(x.lo <= a and b <= x.hi for x in gaps)


@pytest.mark.parametrize("r", ["2/5", "3/8", "5/17"])
def test_gap_measure_grows_towards_one(r):
    m = [gap_measure(limit_set_gaps(r, d)) for d in range(4)]
    assert all(a <= b for a, b in zip(m, m[1:]))
    assert m[-1] < 1
    assert all(0 <= g.lo < g.hi <= 1 for g in limit_set_gaps(r, 3))
