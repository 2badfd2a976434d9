"""Sign-run sequences of words and their structure for the 2-bridge relator."""

from __future__ import annotations

import re
from functools import lru_cache
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

from .farey import Slope, as_slope, cont_frac, fusion_intervals
from .words import CyclicWord, Word, u_text, u_word, v_decomposition


_RUN = re.compile(r"[a-z]+|[A-Z]+")


@dataclass(frozen=True)
class SSeq:
    runs: Tuple[int, ...]

    def __post_init__(self) -> None:
        if self.runs and min(self.runs) < 1:
            raise ValueError("S-sequence entries must be positive")

    def __len__(self) -> int:
        return len(self.runs)

    def __iter__(self):
        return iter(self.runs)

    def reversed(self) -> "SSeq":
        return SSeq(self.runs[::-1])

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.runs)) + ")"


@dataclass(frozen=True, eq=False)
class CyclicSSeq:
    representative: SSeq

    def rotations(self) -> List[Tuple[int, ...]]:
        r = self.representative.runs
        return [r[k:] + r[:k] for k in range(len(r))] or [()]

    def __eq__(self, other) -> bool:
        if not isinstance(other, CyclicSSeq):
            return NotImplemented
        return min(self.rotations()) == min(other.rotations())

    def __hash__(self) -> int:
        return hash(min(self.rotations()))

    def __len__(self) -> int:
        return len(self.representative)

    def reversed(self) -> "CyclicSSeq":
        return CyclicSSeq(self.representative.reversed())

    def __str__(self) -> str:
        return "(" + str(self.representative) + ")"


def runs_of(text: str) -> Tuple[int, ...]:
    """Run lengths of constant exponent sign in a raw word string."""
    return tuple(map(len, _RUN.findall(text)))


def cyclic_runs_of(text: str) -> Tuple[int, ...]:
    runs = runs_of(text)
    if len(runs) > 1 and text[0].isupper() == text[-1].isupper():
        runs = (runs[-1] + runs[0],) + runs[1:-1]
    return runs


def s_sequence(w: Word) -> SSeq:
    if not len(w):
        raise ValueError("the empty word has no S-sequence")
    return SSeq(runs_of(w.text))


def cyclic_s_sequence(c) -> CyclicSSeq:
    w = c.representative if isinstance(c, CyclicWord) else c
    if not len(w):
        raise ValueError("the empty cyclic word has no S-sequence")
    return CyclicSSeq(SSeq(cyclic_runs_of(w.text)))


@dataclass(frozen=True)
class SlopeSSeqs:
    S: SSeq
    CS: CyclicSSeq
    S1: SSeq
    S2: SSeq

    def __iter__(self):
        return iter((self.S, self.CS, self.S1, self.S2))


def slope_s_sequences(r) -> SlopeSSeqs:
    """``S(r)`` with its block decomposition ``(S1, S2, S1, S2)``.

    ``S1 = S(v1)`` and ``S2 = S(v2)`` from the natural decomposition of the
    relator; when the continued fraction of r has length one, ``v2`` is
    empty and so is ``S2``.
    """
    return _slope_s_sequences(as_slope(r))


@lru_cache(maxsize=4096)
def _slope_s_sequences(r: Slope) -> SlopeSSeqs:
    v1, v2, v3, v4 = v_decomposition(r)
    text = v1.text + v2.text + v3.text + v4.text
    s1 = SSeq(runs_of(v1.text))
    s2 = SSeq(runs_of(v2.text))
    return SlopeSSeqs(SSeq(runs_of(text)), CyclicSSeq(SSeq(cyclic_runs_of(text))), s1, s2)


def _as_runs(x) -> Tuple[int, ...]:
    if isinstance(x, SSeq):
        return x.runs
    if isinstance(x, CyclicSSeq):
        return x.representative.runs
    return tuple(x)


def _encode(runs: Sequence[int]) -> str:
    return "," + ",".join(map(str, runs)) + ","


def _find_all(hay: Tuple[int, ...], needle: Tuple[int, ...]) -> List[int]:
    n, m = len(hay), len(needle)
    return [i for i in range(n - m + 1) if hay[i : i + m] == needle]


def cyclic_occurrences(cs, t) -> int:
    """Number of rotation offsets at which t occurs as a contiguous block of cs."""
    runs, pat = _as_runs(cs), _as_runs(t)
    n, m = len(runs), len(pat)
    if not m or m > n:
        return 0
    hay = _encode(runs + runs[: m - 1])
    needle = _encode(pat)
    count, i = 0, hay.find(needle)
    while i != -1:
        count += 1
        i = hay.find(needle, i + 1)
    return count


def cyclic_contains(cs, t) -> bool:
    """Whether t is a contiguous block of cs read cyclically (empty t never is)."""
    return cyclic_occurrences(cs, t) > 0


def contains(seq, t) -> bool:
    """Linear contiguous containment; the empty pattern never counts."""
    pat = _as_runs(t)
    return bool(pat) and bool(_find_all(_as_runs(seq), pat))


def contains_interior(seq, t) -> bool:
    """Whether seq has a block ``(l1, t, l2)`` with l1, l2 >= 1."""
    runs, pat = _as_runs(seq), _as_runs(t)
    m = len(pat)
    return any(runs[i : i + m] == pat for i in range(1, len(runs) - m))


@dataclass
class PropReport:
    r: Slope
    S: SSeq
    S1: SSeq
    S2: SSeq
    m: int
    clauses: Dict[str, bool] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.clauses.values())


def check_prop_sequence(r) -> PropReport:
    """Verify the structure of ``S(r) = (S1, S2, S1, S2)``.

    Each block must be a palindrome occurring exactly twice in ``CS(r)``.
    Entries must lie in ``{m, m+1}`` with ``m = floor(p/q)``. One block
    begins and ends with ``m + 1`` while the other begins and ends with
    ``m``; with a one-term continued fraction ``S2`` is empty and ``S1``
    carries the ``m`` ends.
    """
    r = as_slope(r)
    S, CS, S1, S2 = slope_s_sequences(r)
    q, p = r.num, r.den
    m = p // q
    rep = PropReport(r, S, S1, S2, m)
    rep.clauses["decomposition"] = S.runs == S1.runs + S2.runs + S1.runs + S2.runs
    rep.clauses["symmetric"] = S1.runs == S1.runs[::-1] and S2.runs == S2.runs[::-1]
    rep.clauses["occurs_twice"] = all(
        cyclic_occurrences(CS, blk) == 2 for blk in (S1, S2) if len(blk)
    )
    rep.clauses["two_values"] = set(S.runs) <= {m, m + 1}

    def ends(blk: SSeq, v: int) -> bool:
        return blk.runs[0] == v and blk.runs[-1] == v

    if len(cont_frac(r)) == 1:
        rep.clauses["block_ends"] = ends(S1, m) and not len(S2)
    else:
        rep.clauses["block_ends"] = ends(S1, m + 1) and ends(S2, m)
    return rep


def check_prop_connection(r, s) -> bool:
    """True when (r, s) is consistent with: CS(s) holding both S1 and S2
    forces s outside I1 and I2."""
    r, s = as_slope(r), as_slope(s)
    fd = fusion_intervals(r)
    if not fd.contains(s):
        return True
    seqs = slope_s_sequences(r)
    cs = cyclic_runs_of(u_text(s.num, s.den))
    return not (cyclic_contains(cs, seqs.S1) and cyclic_contains(cs, seqs.S2))


def format_sseq(x) -> str:
    return str(x)


def parse_sseq(text: str) -> SSeq:
    body = text.strip().strip("()").strip()
    return SSeq(tuple(int(t) for t in body.split(",") if t.strip()))


@lru_cache(maxsize=None)
def _cyclic_haystack(q: int, p: int) -> str:
    runs = cyclic_runs_of(u_text(q, p))
    return _encode(runs + runs)


def connection_violations(r, slopes) -> List[Slope]:
    """Slopes s in I1 or I2 (among ``slopes``, each in [0, 1]) whose CS(s) holds both S1 and S2."""
    r = as_slope(r)
    fd = fusion_intervals(r)
    seqs = slope_s_sequences(r)
    n1, n2 = _encode(seqs.S1.runs), _encode(seqs.S2.runs)
    bad = []
    for s in slopes:
        if not fd.contains(s):
            continue
        if not seqs.S1.runs or not seqs.S2.runs:
            continue
        hay = _cyclic_haystack(s.num, s.den)
        # a block longer than the cycle cannot occur
        t = hay.count(",") // 2
        if len(seqs.S1) <= t and len(seqs.S2) <= t and n1 in hay and n2 in hay:
            bad.append(s)
    return bad
