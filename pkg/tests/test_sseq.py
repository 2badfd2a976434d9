from math import gcd

import pytest
from hypothesis import given, strategies as st

from twobridge.farey import Slope
from twobridge.sseq import (
    CyclicSSeq, SSeq, check_prop_connection, check_prop_sequence, connection_violations, contains,
    contains_interior, cyclic_contains, cyclic_occurrences, cyclic_s_sequence, parse_sseq,
    s_sequence, slope_s_sequences,
)
from twobridge.words import CyclicWord, Word, u_word


def coprime_slopes(max_p):
    return [Slope(q, p) for p in range(2, max_p + 1) for q in range(1, p) if gcd(q, p) == 1]


@pytest.mark.parametrize("w,want", [(u_word("2/5"), (3, 2, 3, 2)), (Word("aba"), (3,)), (Word("aB"), (1, 1))])
def test_s_sequence(w, want):
    assert s_sequence(w).runs == want


def test_s_sequence_of_empty_word():
    with pytest.raises(ValueError):
        s_sequence(Word(""))


def test_cyclic_s_sequence():
    assert cyclic_s_sequence(Word("abaB")) == CyclicSSeq(SSeq((3, 1)))
    assert cyclic_s_sequence(CyclicWord(u_word("2/5"))) == CyclicSSeq(SSeq((3, 2, 3, 2)))
    # runs that meet across the seam merge
    assert cyclic_s_sequence(Word("abAba")).representative.runs == (4, 1)


def test_cyclic_equality_is_rotation_invariant():
    assert CyclicSSeq(SSeq((3, 2, 3, 2))) == CyclicSSeq(SSeq((2, 3, 2, 3)))
    assert hash(CyclicSSeq(SSeq((1, 2)))) == hash(CyclicSSeq(SSeq((2, 1))))


@pytest.mark.parametrize("r,s1,s2", [("2/5", (3,), (2,)), ("1/3", (3,), ())])
def test_blocks(r, s1, s2):
    seqs = slope_s_sequences(r)
    assert seqs.S1.runs == s1 and seqs.S2.runs == s2


def test_blocks_five_seventeenths():
    assert set(slope_s_sequences("5/17").S.runs) <= {3, 4}


def test_prop_report_two_fifths():
    rep = check_prop_sequence("2/5")
    assert rep.ok and rep.m == 2
    assert cyclic_occurrences(slope_s_sequences("2/5").CS, rep.S1) == 2


@pytest.mark.parametrize("pat,want", [((3,), True), ((2, 3, 2), True), ((3, 3), False), ((), False)])
def test_cyclic_contains(pat, want):
    assert cyclic_contains(CyclicSSeq(SSeq((3, 2, 3, 2))), pat) is want


def test_linear_containment():
    assert contains((1, 2, 3), (2, 3))
    assert not contains((1, 2, 3), (3, 1))
    assert contains_interior((1, 2, 3), (2,))
    assert not contains_interior((1, 2, 3), (1, 2))


def test_parse_sseq():
    assert parse_sseq("(3,2,3,2)").runs == (3, 2, 3, 2)
    assert parse_sseq("()").runs == ()
    assert str(SSeq((3, 2))) == "(3,2)"


@pytest.mark.parametrize("r,s", [("2/5", "1/3"), ("2/5", "2/5")])
def test_connection_examples(r, s):
    assert check_prop_connection(r, s)


def test_sequence_structure_exhaustive():
    bad = [str(r) for r in coprime_slopes(300) if not check_prop_sequence(r).ok]
    assert bad == []


def test_connection_exhaustive():
    slopes = coprime_slopes(60) + [Slope(1, 1)]
    bad = [(str(r), [str(s) for s in v]) for r in coprime_slopes(60)
           if (v := connection_violations(r, slopes))]
    assert bad == []


@given(st.integers(2, 60).flatmap(lambda p: st.tuples(st.just(p), st.integers(1, p - 1))),
       st.integers(1, 60).flatmap(lambda p: st.tuples(st.just(p), st.integers(1, p))))
def test_connection_helpers_agree(rp, sp):
    (p, q), (b, a) = rp, sp
    if gcd(p, q) != 1 or gcd(a, b) != 1:
        return
    r, s = Slope(q, p), Slope(a, b)
    assert check_prop_connection(r, s) == (not connection_violations(r, [s]))
