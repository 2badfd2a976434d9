"""Free-group words over {a, b}: the 2-bridge relator and friends.

A word is stored as a string, one character per letter: a lowercase
character is a generator, its uppercase form the inverse (``"abAB"`` is the
commutator ``a b a^-1 b^-1``).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, List, Tuple

from .farey import INF, Slope, as_slope, fusion_intervals


def _inv_letter(c: str) -> str:
    return c.swapcase()


def invert_text(t: str) -> str:
    return t[::-1].swapcase()


def _is_reduced(s: str) -> bool:
    for g in set(s.lower()):
        G = g.upper()
        if g + G in s or G + g in s:
            return False
    return True


@dataclass(frozen=True)
class Word:
    """A freely reduced word."""

    text: str

    def __post_init__(self) -> None:
        if not _is_reduced(self.text):
            raise ValueError(f"word {self.text!r} is not reduced; use free_reduce")

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[str, int]]) -> "Word":
        return free_reduce(pairs)

    @property
    def letters(self) -> List[Tuple[str, int]]:
        return [(c.lower(), -1 if c.isupper() else 1) for c in self.text]

    def __len__(self) -> int:
        return len(self.text)

    def __iter__(self):
        return iter(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return free_reduce(self.text + other.text)

    def inverse(self) -> "Word":
        return Word(invert_text(self.text))

    def __invert__(self) -> "Word":
        return self.inverse()

    def is_cyclically_reduced(self) -> bool:
        t = self.text
        return len(t) < 2 or t[0] != _inv_letter(t[-1])

    def is_alternating(self) -> bool:
        t = self.text.lower()
        return not any(g + g in t for g in set(t))

    def is_cyclically_alternating(self) -> bool:
        t = self.text.lower()
        return self.is_alternating() and (len(t) < 2 or t[0] != t[-1])

    def rotate(self, k: int) -> "Word":
        if not self.text:
            return self
        k %= len(self.text)
        return Word(self.text[k:] + self.text[:k])

    def __str__(self) -> str:
        return format_word(self)


def format_word(w: Word) -> str:
    """``"a b a' b'"`` form, apostrophe marking an inverse letter."""
    return " ".join(c.lower() + "'" if c.isupper() else c for c in w.text)


def parse_word(text: str) -> Word:
    """Accept ``"a b a' b'"``, ``"a b a^-1"`` or compact ``"abAB"``."""
    text = text.replace("^-1", "'").replace("⁻¹", "'")
    out: List[str] = []
    for ch in text:
        if ch.isspace():
            continue
        if ch == "'":
            if not out:
                raise ValueError("inverse mark with no preceding letter")
            out[-1] = _inv_letter(out[-1])
        elif ch.isalpha():
            out.append(ch)
        else:
            raise ValueError(f"unexpected character {ch!r} in word")
    return free_reduce("".join(out))


def free_reduce(letters) -> Word:
    if isinstance(letters, Word):
        return letters
    if isinstance(letters, str):
        seq = letters
    else:
        seq = [g.upper() if e < 0 else g for g, e in letters]
    stack: List[str] = []
    for c in seq:
        if stack and stack[-1] == _inv_letter(c):
            stack.pop()
        else:
            stack.append(c)
    return Word("".join(stack))


@dataclass(frozen=True)
class CyclicWord:
    """Conjugacy class of a cyclically reduced word."""

    representative: Word

    def __post_init__(self) -> None:
        if not self.representative.is_cyclically_reduced():
            raise ValueError("cyclic word representative must be cyclically reduced")

    def rotations(self) -> List[Word]:
        w = self.representative
        return [w.rotate(k) for k in range(max(len(w), 1))]

    def _canon(self) -> str:
        t = self.representative.text
        return min((t[k:] + t[:k] for k in range(len(t))), default="")

    def __eq__(self, other) -> bool:
        if not isinstance(other, CyclicWord):
            return NotImplemented
        return len(self.representative) == len(other.representative) and self._canon() == other._canon()

    def __hash__(self) -> int:
        return hash(self._canon())

    def __len__(self) -> int:
        return len(self.representative)


def cyclic_reduce(w: Word) -> Tuple[CyclicWord, Word]:
    """Split ``w`` as ``conjugator * core * conjugator^-1`` with core cyclically reduced."""
    w = free_reduce(w)
    t = w.text
    if not t:
        raise ValueError("the empty word has no cyclic reduction")
    i, j = 0, len(t) - 1
    while i < j and t[i] == _inv_letter(t[j]):
        i += 1
        j -= 1
    return CyclicWord(Word(t[i : j + 1])), Word(t[:i])


def _require_rq(r: Slope) -> Tuple[int, int]:
    if r.den == 0 or not (0 < r.num < r.den):
        raise ValueError(f"slope must lie strictly between 0 and 1, got {r}")
    return r.num, r.den


def epsilon(i: int, r) -> int:
    """Sign ``(-1)^floor(i q / p)`` of the i-th letter of the half relator."""
    q, p = _require_rq(as_slope(r))
    if not 1 <= i <= p - 1:
        raise ValueError(f"index {i} outside 1..{p - 1}")
    return -1 if (i * q // p) % 2 else 1


def _u_hat_text(q: int, p: int) -> str:
    return "".join(
        ("bB" if i % 2 else "aA")[(i * q // p) % 2] for i in range(1, p)
    )


def u_hat(r) -> Word:
    q, p = _require_rq(as_slope(r))
    return Word(_u_hat_text(q, p))


@lru_cache(maxsize=4096)
def u_text(q: int, p: int) -> str:
    """Relator as a raw string; valid for 0 <= q <= p, gcd(q, p) = 1."""
    h = _u_hat_text(q, p)
    hinv = invert_text(h)
    if p % 2:
        mid = "B" if q % 2 else "b"
    else:
        mid = "A"
    return "a" + h + mid + hinv


def u_word(s) -> Word:
    """The cyclically alternating word of length 2p carried by the loop of slope s.

    Defined for ``0 <= s <= 1``. The boundary slopes use the same formula
    with an empty half-word: ``u(0/1) = a b`` and ``u(1/1) = a b'``.
    """
    s = as_slope(s)
    if s.den == 0 or not (0 <= s.num <= s.den):
        raise ValueError(f"u_word needs 0 <= s <= 1, got {s}; normalise into [0, 1] first")
    return Word(u_text(s.num, s.den))


def v_decomposition(r) -> Tuple[Word, Word, Word, Word]:
    """Split ``u_r = v1 v2 v3 v4`` with ``|v1| = |v3| = p2 + 1`` and ``|v2| = |v4| = p1 - 1``."""
    r = as_slope(r)
    q, p = _require_rq(r)
    fd = fusion_intervals(r)
    p1, p2 = fd.r1.den, fd.r2.den
    t = u_word(r).text
    l1, l2 = p2 + 1, p1 - 1
    cuts = [0, l1, l1 + l2, 2 * l1 + l2, 2 * (l1 + l2)]
    assert cuts[-1] == 2 * p
    return tuple(Word(t[cuts[i] : cuts[i + 1]]) for i in range(4))  # type: ignore[return-value]


def torus_slope_word(s) -> Word:
    """Word in F(x, y) for the simple loop of slope s on the punctured torus.

    ``x`` is the slope-0 loop and ``y`` the slope-infinity loop; other slopes
    come from the Stern-Brocot recursion W(mediant) = W(left) W(right), with
    negative slopes obtained from the orientation-reversing symmetry y -> y'.
    """
    s = as_slope(s)
    if s == INF:
        return Word("y")
    if s.num < 0:
        w = torus_slope_word(Slope(-s.num, s.den))
        return Word(w.text.replace("y", "Y"))
    n, d = s.num, s.den
    left, right = (0, 1), (1, 0)
    wl, wr = "x", "y"
    while True:
        m = (left[0] + right[0], left[1] + right[1])
        wm = wl + wr
        if m == (n, d) or (n, d) == left or (n, d) == right:
            if (n, d) == left:
                return Word(wl)
            if (n, d) == right:
                return Word(wr)
            return Word(wm)
        if n * m[1] < m[0] * d:
            right, wr = m, wm
        else:
            left, wl = m, wm
