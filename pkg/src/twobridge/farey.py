"""Exact slope arithmetic: continued fractions, Farey adjacency, fusion intervals."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterator, List, Sequence, Tuple


@dataclass(frozen=True, order=False)
class Slope:
    """An extended rational ``num/den`` in lowest terms; ``1/0`` is infinity.

    Build instances through :func:`canonicalize` (or :meth:`parse`), which
    enforces the canonical form.
    """

    num: int
    den: int

    @classmethod
    def parse(cls, text: str) -> "Slope":
        text = text.strip()
        if text.lower() in ("inf", "infinity", "oo", "1/0"):
            return INF
        if "/" in text:
            a, b = text.split("/", 1)
            return canonicalize(int(a), int(b))
        if "." in text or "e" in text.lower():
            raise ValueError(f"decimal slopes are not accepted: {text!r}")
        return canonicalize(int(text), 1)

    @classmethod
    def from_fraction(cls, x: Fraction) -> "Slope":
        return canonicalize(x.numerator, x.denominator)

    @property
    def is_inf(self) -> bool:
        return self.den == 0

    def to_fraction(self) -> Fraction:
        if self.den == 0:
            raise ValueError("infinity has no Fraction value")
        return Fraction(self.num, self.den)

    def __float__(self) -> float:
        return float("inf") if self.den == 0 else self.num / self.den

    def _key(self) -> Tuple[int, int]:
        return self.num, self.den

    # ordering on Q, with infinity above everything
    def __lt__(self, other: "Slope") -> bool:
        if self.den == 0:
            return False
        if other.den == 0:
            return True
        return self.num * other.den < other.num * self.den

    def __le__(self, other: "Slope") -> bool:
        return self == other or self < other

    def __gt__(self, other: "Slope") -> bool:
        return other < self

    def __ge__(self, other: "Slope") -> bool:
        return other <= self

    def __str__(self) -> str:
        return f"{self.num}/{self.den}"

    def __repr__(self) -> str:
        return f"Slope({self.num}/{self.den})"


def canonicalize(num: int, den: int) -> Slope:
    if num == 0 and den == 0:
        raise ValueError("0/0 is not a slope")
    if den == 0:
        return Slope(1, 0)
    g = gcd(num, den)
    num, den = num // g, den // g
    if den < 0:
        num, den = -num, -den
    return Slope(num, den)


INF = Slope(1, 0)
ZERO = Slope(0, 1)
ONE = Slope(1, 1)


def as_slope(x) -> Slope:
    """Coerce a Slope, Fraction, int, ``(num, den)`` pair or string."""
    if isinstance(x, Slope):
        return x
    if isinstance(x, Fraction):
        return Slope.from_fraction(x)
    if isinstance(x, int):
        return Slope(x, 1)
    if isinstance(x, tuple):
        return canonicalize(*x)
    if isinstance(x, str):
        return Slope.parse(x)
    raise TypeError(f"cannot interpret {x!r} as a slope")


def _require_unit_open(r: Slope) -> None:
    if r.den == 0 or not (0 < r.num < r.den):
        raise ValueError(f"slope must lie strictly between 0 and 1, got {r}")


@dataclass(frozen=True)
class ContinuedFraction:
    """``[m1, ..., mk]`` standing for ``1/(m1 + 1/(m2 + ... + 1/mk))``."""

    terms: Tuple[int, ...]

    def __post_init__(self) -> None:
        if any(m < 1 for m in self.terms):
            raise ValueError("continued fraction terms must be positive")

    def __len__(self) -> int:
        return len(self.terms)

    def __str__(self) -> str:
        return "[" + ",".join(map(str, self.terms)) + "]"


def cont_frac(r: Slope) -> ContinuedFraction:
    """Normal-form expansion (last term at least 2) of a slope in (0, 1)."""
    r = as_slope(r)
    _require_unit_open(r)
    terms: List[int] = []
    q, p = r.num, r.den
    # 1/r = p/q
    while q:
        m, rem = divmod(p, q)
        terms.append(m)
        p, q = q, rem
    return ContinuedFraction(tuple(terms))


def cf_value(cf) -> Slope:
    """Evaluate an expansion; the empty expansion is 0."""
    terms = cf.terms if isinstance(cf, ContinuedFraction) else tuple(cf)
    num, den = 0, 1
    for m in reversed(terms):
        # x -> 1/(m + x)
        num, den = den, m * den + num
    return canonicalize(num, den)


@dataclass(frozen=True)
class SlopeInterval:
    """Closed interval ``[lo, hi]`` of finite slopes."""

    lo: Slope
    hi: Slope

    def __post_init__(self) -> None:
        if self.lo.is_inf or self.hi.is_inf:
            raise ValueError("interval endpoints must be finite")
        if self.hi < self.lo:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    def __contains__(self, s: Slope) -> bool:
        return (not s.is_inf) and self.lo <= s <= self.hi

    def interior_contains(self, s: Slope) -> bool:
        return (not s.is_inf) and self.lo < s < self.hi

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi}]"


@dataclass(frozen=True)
class FusionData:
    r1: Slope
    r2: Slope
    I1: SlopeInterval
    I2: SlopeInterval

    def __iter__(self):
        return iter((self.r1, self.r2, self.I1, self.I2))

    def contains(self, s: Slope) -> bool:
        return s in self.I1 or s in self.I2


def fusion_intervals(r) -> FusionData:
    r = as_slope(r)
    terms = cont_frac(r).terms
    k = len(terms)
    shorter = cf_value(terms[:-1])
    decremented = cf_value(terms[:-1] + (terms[-1] - 1,))
    if k % 2:
        r1, r2 = shorter, decremented
    else:
        r1, r2 = decremented, shorter
    return FusionData(r1, r2, SlopeInterval(ZERO, r1), SlopeInterval(r2, ONE))


def is_farey_neighbor(s: Slope, t: Slope) -> bool:
    s, t = as_slope(s), as_slope(t)
    return abs(s.num * t.den - t.num * s.den) == 1


def _sb_between(lo: Tuple[int, int], hi: Tuple[int, int], max_den: int) -> Iterator[Tuple[int, int]]:
    # in-order Stern-Brocot descent strictly between two Farey neighbours
    stack = [(lo, hi, False)]
    while stack:
        a, b, emit = stack.pop()
        if emit:
            yield a
            continue
        m = (a[0] + b[0], a[1] + b[1])
        if m[1] > max_den:
            continue
        stack.append((m, b, False))
        stack.append((m, None, True))
        stack.append((a, m, False))


def enumerate_interval(interval: SlopeInterval, max_den: int) -> List[Slope]:
    """All rationals of ``interval`` with denominator <= max_den, ascending.

    Walks the Stern-Brocot tree between consecutive integers, so the output
    is produced in order without sorting.
    """
    if max_den < 1:
        raise ValueError("max_den must be positive")
    lo, hi = interval.lo.to_fraction(), interval.hi.to_fraction()
    out: List[Slope] = []
    n = lo.numerator // lo.denominator
    while n <= hi:
        cells = [(n, 1)]
        cells.extend(_sb_between((n, 1), (n + 1, 1), max_den))
        for a, b in cells:
            x = Fraction(a, b)
            if lo <= x <= hi:
                out.append(Slope(a, b))
        n += 1
    return out


def sb_preorder(lo: Slope, hi: Slope, max_den: int, descend) -> Iterator[Tuple[Tuple[int, int], Tuple[Tuple[int, int], Tuple[int, int]]]]:
    """Deterministic preorder over the Stern-Brocot subtree spanned by (lo, hi).

    ``descend(node)`` is called after a node is yielded; returning False
    prunes its subtree.
    """
    if not is_farey_neighbor(lo, hi):
        raise ValueError(f"{lo} and {hi} are not Farey neighbours")
    stack = [((lo.num, lo.den), (hi.num, hi.den))]
    while stack:
        a, b = stack.pop()
        m = (a[0] + b[0], a[1] + b[1])
        if m[1] > max_den:
            continue
        yield m, (a, b)
        if descend(m):
            stack.append((m, b))
            stack.append((a, m))


def parse_cf(text: str) -> ContinuedFraction:
    body = text.strip().strip("[]").strip()
    if not body:
        return ContinuedFraction(())
    return ContinuedFraction(tuple(int(t) for t in body.split(",")))


def mediant(a: Slope, b: Slope) -> Slope:
    return canonicalize(a.num + b.num, a.den + b.den)
