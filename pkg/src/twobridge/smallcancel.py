"""Pieces of the symmetrized relator set and the C(4)/T(4) conditions."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, FrozenSet, Iterator, List, Optional, Tuple

import numpy as np

from .farey import Slope, as_slope
from .sseq import contains, contains_interior, runs_of, slope_s_sequences
from .words import Word, invert_text, u_word

INFINITY = float("inf")

# exhaustive verifiers refuse larger denominators
BRUTE_FORCE_MAX_P = 60


@dataclass(frozen=True)
class SymmetrizedSet:
    """All cyclic permutations of ``u_r`` and ``u_r^-1``."""

    r: Slope
    texts: Tuple[str, ...]

    @cached_property
    def elements(self) -> FrozenSet[Word]:
        return frozenset(Word(t) for t in self.texts)

    def __len__(self) -> int:
        return len(self.texts)

    def __contains__(self, w) -> bool:
        return (w.text if isinstance(w, Word) else w) in self._textset

    @cached_property
    def _textset(self) -> FrozenSet[str]:
        return frozenset(self.texts)

    @cached_property
    def prefix_counts(self) -> Counter:
        """How many distinct elements start with each nonempty prefix."""
        c: Counter = Counter()
        for t in self.texts:
            for n in range(1, len(t) + 1):
                c[t[:n]] += 1
        return c

    @cached_property
    def cyclic_sources(self) -> Tuple[str, str]:
        u = self.texts[0]
        return u, invert_text(u)


def symmetrized_set(r) -> SymmetrizedSet:
    r = as_slope(r)
    u = u_word(r).text
    ui = invert_text(u)
    seen: Dict[str, None] = {}
    for t in (u, ui):
        for k in range(len(t)):
            seen.setdefault(t[k:] + t[:k], None)
    return SymmetrizedSet(r, tuple(seen))


def _text(v) -> str:
    return v.text if isinstance(v, Word) else str(v)


def is_piece_bruteforce(R: SymmetrizedSet, v) -> bool:
    """Literal definition: two distinct elements of R both begin with v."""
    v = _text(v)
    if not v:
        raise ValueError("pieces are nonempty")
    hits = 0
    for w in R.texts:
        if w.startswith(v):
            hits += 1
            if hits == 2:
                return True
    return False


def is_subword_of_relator(R: SymmetrizedSet, v) -> bool:
    v = _text(v)
    u, ui = R.cyclic_sources
    return len(v) <= len(u) and (v in u + u or v in ui + ui)


def is_piece_sseq(r, v, R: Optional[SymmetrizedSet] = None) -> bool:
    """Piece test read off the S-sequence of v.

    v is a piece exactly when S(v) neither contains S1 nor has S2 strictly
    inside it, i.e. as a block ``(l1, S2, l2)`` with l1, l2 >= 1.
    """
    r = as_slope(r)
    v = _text(v)
    if R is None:
        R = symmetrized_set(r)
    if not v or not is_subword_of_relator(R, v):
        raise ValueError(f"{v!r} is not a subword of the cyclic relator or its inverse")
    seqs = slope_s_sequences(r)
    return piece_by_runs(runs_of(v), seqs.S1.runs, seqs.S2.runs)


def piece_by_runs(sv: Tuple[int, ...], s1: Tuple[int, ...], s2: Tuple[int, ...]) -> bool:
    return not contains(sv, s1) and not contains_interior(sv, s2)


def _min_pieces(v: str, piece) -> float:
    # best[j]: fewest pieces spelling v[:j]
    n = len(v)
    best = [0.0] + [INFINITY] * n
    for j in range(1, n + 1):
        for i in range(j):
            if best[i] + 1 < best[j] and piece(v[i:j]):
                best[j] = best[i] + 1
    return best[n]


def min_piece_count(r, v, R: Optional[SymmetrizedSet] = None) -> float:
    """Least n with v a cancellation-free product of n pieces (inf if none)."""
    v = _text(v)
    if not v:
        raise ValueError("empty word")
    if R is None:
        R = symmetrized_set(r)
    counts = R.prefix_counts
    return _min_pieces(v, lambda x: counts.get(x, 0) >= 2)


def _check_bound(r: Slope) -> None:
    if r.den > BRUTE_FORCE_MAX_P:
        raise ValueError(f"denominator {r.den} exceeds brute-force bound {BRUTE_FORCE_MAX_P}")


def max_piece_lengths(R: SymmetrizedSet) -> Dict[str, int]:
    """For each element, the length of its longest prefix that is a piece.

    Equals the longest common prefix with any other element, found among
    lexicographic neighbours.
    """
    srt = sorted(R.texts)

    def lcp(a: str, b: str) -> int:
        n = 0
        for x, y in zip(a, b):
            if x != y:
                break
            n += 1
        return n

    out = {}
    for i, t in enumerate(srt):
        best = 0
        if i:
            best = lcp(t, srt[i - 1])
        if i + 1 < len(srt):
            best = max(best, lcp(t, srt[i + 1]))
        out[t] = best
    return out


def piece_counts_of_elements(R: SymmetrizedSet) -> Dict[str, float]:
    counts = R.prefix_counts
    piece = lambda x: counts.get(x, 0) >= 2  # noqa: E731
    return {t: _min_pieces(t, piece) for t in R.texts}


def verify_C4(r) -> bool:
    """Every element of R needs at least four pieces."""
    r = as_slope(r)
    _check_bound(r)
    R = symmetrized_set(r)
    return all(n >= 4 for n in piece_counts_of_elements(R).values())


def _cancels(w1: str, w2: str) -> bool:
    return w1[-1] == w2[0].swapcase()


def t4_violations(R: SymmetrizedSet) -> List[Tuple[str, str, str]]:
    """Triples with no adjacent inverse pair where every cyclic product cancels."""
    texts = R.texts
    n = len(texts)
    index = {t: i for i, t in enumerate(texts)}
    inv = [index[invert_text(t)] for t in texts]
    last = np.array([ord(t[-1].swapcase()) for t in texts])
    first = np.array([ord(t[0]) for t in texts])
    adj = (last[:, None] == first[None, :]).astype(np.int64)
    adj[np.arange(n), inv] = 0
    closing = (adj @ adj) * adj.T
    found = []
    for i, k in zip(*np.nonzero(closing)):
        for j in np.nonzero(adj[i] & adj[:, k])[0]:
            found.append((texts[i], texts[j], texts[k]))
            if len(found) >= 10:
                return found
    return found


def verify_T4(r) -> bool:
    r = as_slope(r)
    _check_bound(r)
    return not t4_violations(symmetrized_set(r))


def relator_subwords(R: SymmetrizedSet) -> Iterator[str]:
    """Distinct subwords of the cyclic words (u_r^{+-1}), i.e. prefixes of elements of R."""
    seen = set()
    for t in R.texts:
        for n in range(1, len(t) + 1):
            v = t[:n]
            if v not in seen:
                seen.add(v)
                yield v


def _block_then_more(sv: Tuple[int, ...], block: Tuple[int, ...]) -> bool:
    # block followed by at least one further run
    n = len(block)
    return any(sv[i : i + n] == block for i in range(len(sv) - n))


def _more_then_block(sv: Tuple[int, ...], block: Tuple[int, ...]) -> bool:
    # block preceded by at least one further run
    n = len(block)
    return any(sv[i : i + n] == block for i in range(1, len(sv) - n + 1))


def not_two_pieces_by_runs(sv: Tuple[int, ...], s1: Tuple[int, ...], s2: Tuple[int, ...]) -> bool:
    return _block_then_more(sv, s1 + s2) or _more_then_block(sv, s2 + s1)


def not_two_pieces_sseq(r, v) -> bool:
    """S-sequence criterion for v not being a product of at most two pieces.

    True when S(v) holds a block ``(S1, S2, l)`` or ``(l, S2, S1)`` with
    l >= 1, i.e. ``(S1, S2)`` is a proper initial part, or ``(S2, S1)`` a
    proper terminal part, of a block of S(v).
    """
    seqs = slope_s_sequences(as_slope(r))
    return not_two_pieces_by_runs(runs_of(_text(v)), seqs.S1.runs, seqs.S2.runs)


@dataclass
class PieceRow:
    subword: str
    sseq: Tuple[int, ...]
    is_piece: bool
    min_piece_count: float


def piece_table(r) -> List[PieceRow]:
    r = as_slope(r)
    R = symmetrized_set(r)
    counts = R.prefix_counts
    piece = lambda x: counts.get(x, 0) >= 2  # noqa: E731
    return [
        PieceRow(v, runs_of(v), piece(v), _min_pieces(v, piece))
        for v in relator_subwords(R)
    ]


def _prefix_piece_counts(t: str, piece) -> List[float]:
    # best[j]: fewest pieces spelling t[:j]
    n = len(t)
    best = [0.0] + [INFINITY] * n
    for j in range(1, n + 1):
        bj = INFINITY
        for i in range(j - 1, -1, -1):
            if not piece(t[i:j]):
                break  # pieces are closed under taking subwords
            if best[i] + 1 < bj:
                bj = best[i] + 1
        best[j] = bj
    return best


def all_min_piece_counts(R: SymmetrizedSet) -> Dict[str, float]:
    """min_piece_count for every subword of the cyclic relator words, in one sweep."""
    counts = R.prefix_counts
    piece = lambda x: counts.get(x, 0) >= 2  # noqa: E731
    out: Dict[str, float] = {}
    for t in R.texts:
        best = _prefix_piece_counts(t, piece)
        for j in range(1, len(t) + 1):
            out.setdefault(t[:j], best[j])
    return out
