"""Farey reflection groups acting on slopes, and normal forms for their orbits."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Set, Tuple

from .farey import INF, ONE, ZERO, Slope, as_slope, canonicalize, fusion_intervals, is_farey_neighbor

Point = Tuple[int, int]


@dataclass(frozen=True)
class GL2ZElement:
    """Integer matrix ``[[a, b], [c, d]]`` with determinant +-1, acting by x -> (ax+b)/(cx+d)."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self) -> None:
        if abs(self.a * self.d - self.b * self.c) != 1:
            raise ValueError(f"determinant of {self} is not +-1")

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def __matmul__(self, other: "GL2ZElement") -> "GL2ZElement":
        a, b, c, d = self.a, self.b, self.c, self.d
        e, f, g, h = other.a, other.b, other.c, other.d
        return GL2ZElement(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def inverse(self) -> "GL2ZElement":
        s = self.det
        return GL2ZElement(self.d * s, -self.b * s, -self.c * s, self.a * s)

    def projective_key(self) -> Tuple[int, int, int, int]:
        t = (self.a, self.b, self.c, self.d)
        for x in t:
            if x:
                return t if x > 0 else tuple(-y for y in t)  # type: ignore[return-value]
        return t

    def __call__(self, s: Slope) -> Slope:
        return apply(self, s)


IDENTITY = GL2ZElement(1, 0, 0, 1)


@dataclass(frozen=True)
class FareyEdge:
    end1: Slope
    end2: Slope

    def __post_init__(self) -> None:
        if not is_farey_neighbor(self.end1, self.end2):
            raise ValueError(f"{self.end1} and {self.end2} do not span a Farey edge")

    def __str__(self) -> str:
        return f"({self.end1}, {self.end2})"


def reflection_matrix(e: FareyEdge) -> GL2ZElement:
    a, b = e.end1.num, e.end1.den
    c, d = e.end2.num, e.end2.den
    t = a * d + b * c
    return GL2ZElement(t, -2 * a * c, 2 * b * d, -t)


def _act(m: Tuple[int, int, int, int], x: Point) -> Point:
    # projective action on primitive vectors; unimodular maps keep them primitive
    n = m[0] * x[0] + m[1] * x[1]
    d = m[2] * x[0] + m[3] * x[1]
    if d < 0 or (d == 0 and n < 0):
        return -n, -d
    return n, d


def apply(g: GL2ZElement, s) -> Slope:
    s = as_slope(s)
    n, d = _act((g.a, g.b, g.c, g.d), (s.num, s.den))
    return Slope(n, d) if d else INF


def _edge(x: Slope, y: Slope) -> FareyEdge:
    return FareyEdge(x, y)


def gamma_inf_normalize(s) -> Tuple[Slope, GL2ZElement, List[FareyEdge]]:
    """Move s into [0, 1] with reflections x -> 2n - x.

    Returns the representative with the composite map; the reflections
    come last, in the order they are applied.
    """
    s = as_slope(s)
    if s.is_inf:
        raise ValueError("infinity is fixed by every reflection with endpoint infinity")
    k, rem = divmod(s.num, 2 * s.den)  # s = 2k + rem/den with 0 <= rem < 2 den
    edges: List[FareyEdge] = []
    if rem > s.den:
        edges.append(_edge(INF, Slope(k + 1, 1)))
    elif k:
        edges.append(_edge(INF, Slope(k, 1)))
        edges.append(_edge(INF, ZERO))
    g = IDENTITY
    for e in edges:
        g = reflection_matrix(e) @ g
    return apply(g, s), g, edges


@dataclass(frozen=True)
class OrbitData:
    r: Slope
    r1: Slope
    r2: Slope
    gens: Tuple[Tuple[int, int, int, int], ...]

    def in_fundamental(self, x: Point) -> bool:
        n, d = x
        if d == 0:
            return True
        if n * self.r.den == self.r.num * d:
            return True
        if 0 <= n and n * self.r1.den <= self.r1.num * d:
            return True
        return self.r2.num * d <= n * self.r2.den and n <= d


def _orbit_data(r: Slope) -> OrbitData:
    fd = fusion_intervals(r)
    gens = tuple(
        (m.a, m.b, m.c, m.d)
        for m in (
            reflection_matrix(_edge(INF, ZERO)),
            reflection_matrix(_edge(INF, ONE)),
            reflection_matrix(_edge(r, fd.r1)),
            reflection_matrix(_edge(r, fd.r2)),
        )
    )
    return OrbitData(r, fd.r1, fd.r2, gens)


def in_target(r, s) -> bool:
    """Whether s lies in I1, I2 or {infinity, r}."""
    r, s = as_slope(r), as_slope(s)
    return _orbit_data(r).in_fundamental((s.num, s.den))


def orbit_normalize(r, s) -> Tuple[Slope, List[FareyEdge]]:
    """Representative of the orbit of s in I1 u I2 u {infinity, r}.

    Returns the representative together with the reflections that carry s
    to it, in order of application.
    """
    r, s = as_slope(r), as_slope(s)
    if r.den == 0 or not 0 < r.num < r.den:
        raise ValueError(f"r must lie strictly between 0 and 1, got {r}")
    fd = fusion_intervals(r)
    e1, e2 = _edge(r, fd.r1), _edge(r, fd.r2)
    m1, m2 = reflection_matrix(e1), reflection_matrix(e2)
    trace: List[FareyEdge] = []
    cap = 64 + 2 * max(s.den, 1).bit_length()
    for _ in range(cap):
        if s.is_inf or s == r:
            return s, trace
        s, _g, edges = gamma_inf_normalize(s)
        trace.extend(edges)
        if s == r or s in fd.I1 or s in fd.I2:
            return s, trace
        if s < r:
            trace.append(e1)
            s = apply(m1, s)
        else:
            trace.append(e2)
            s = apply(m2, s)
    raise RuntimeError(f"orbit_normalize({r}, ...) did not terminate within {cap} steps")


def compose_trace(trace: Iterable[FareyEdge]) -> GL2ZElement:
    g = IDENTITY
    for e in trace:
        g = reflection_matrix(e) @ g
    return g


def orbit_equivalent(r, s, t) -> bool:
    return orbit_normalize(r, s)[0] == orbit_normalize(r, t)[0]


def ball_generators(r) -> List[Tuple[int, int, int, int]]:
    """The four wall reflections plus the translations x -> x +- 2."""
    data = _orbit_data(as_slope(r))
    return list(data.gens) + [(1, 2, 0, 1), (1, -2, 0, 1)]


def ball_points(gens, start: Point, depth: int) -> Set[Point]:
    seen = {start}
    frontier = [start]
    for _ in range(depth):
        nxt = []
        for x in frontier:
            for m in gens:
                y = _act(m, x)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def orbit_ball(r, s, depth: int) -> Set[Slope]:
    """Images of s under all generator words of length at most ``depth``."""
    s = as_slope(s)
    if depth < 0:
        raise ValueError("depth must be non-negative")
    pts = ball_points(ball_generators(r), (s.num, s.den), depth)
    return {Slope(n, d) if d else INF for n, d in pts}


# ---------------------------------------------------------------- limit set


@dataclass(frozen=True)
class Gap:
    """Open interval (lo, hi) of [0, 1] missed by the limit set."""

    lo: Fraction
    hi: Fraction
    depth: int

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    def as_dict(self) -> Dict[str, object]:
        return {"lo": f"{self.lo.numerator}/{self.lo.denominator}",
                "hi": f"{self.hi.numerator}/{self.hi.denominator}",
                "depth": self.depth}


def _image_arc(m: Tuple[int, int, int, int], lo: Fraction, hi: Fraction) -> List[Tuple[Fraction, Fraction]]:
    # image of the closed arc [lo, hi] of the real line, split where it crosses infinity
    def img(x: Fraction) -> Optional[Fraction]:
        n, d = _act(m, (x.numerator, x.denominator))
        return None if d == 0 else Fraction(n, d)

    a, b, mid = img(lo), img(hi), img((lo + hi) / 2)
    if a is None or b is None or mid is None:
        # an endpoint or the midpoint goes to infinity: sample once more
        pts = [img(lo + (hi - lo) * Fraction(k, 4)) for k in range(5)]
        finite = [p for p in pts if p is not None]
        if pts[0] is None:
            return [(pts[-1], None)] if _increasing(pts[1:]) else [(None, pts[-1])]  # type: ignore[list-item]
        if pts[-1] is None:
            return [(pts[0], None)] if _increasing(pts[:-1]) else [(None, pts[0])]  # type: ignore[list-item]
        # interior point maps to infinity
        return [(max(finite[0], finite[-1]), None), (None, min(finite[0], finite[-1]))]  # type: ignore[list-item]
    lo_i, hi_i = min(a, b), max(a, b)
    if lo_i < mid < hi_i:
        return [(lo_i, hi_i)]
    return [(hi_i, None), (None, lo_i)]  # type: ignore[list-item]


def _increasing(pts) -> bool:
    return pts[0] < pts[-1]


def _clip_unit(arcs, out: List[Tuple[Fraction, Fraction]]) -> None:
    for lo, hi in arcs:
        lo = Fraction(0) if lo is None else max(lo, Fraction(0))
        hi = Fraction(1) if hi is None else min(hi, Fraction(1))
        if lo < hi:
            out.append((lo, hi))


def _merge(ivs: List[Tuple[Fraction, Fraction]]) -> List[Tuple[Fraction, Fraction]]:
    ivs.sort()
    merged: List[List[Fraction]] = []
    for lo, hi in ivs:
        if merged and lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    return [(a, b) for a, b in merged]


def _group_ball(gens, depth: int) -> List[Tuple[int, int, int, int]]:
    def mul(x, y):
        return (x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3],
                x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3])

    def key(m):
        for v in m:
            if v:
                return m if v > 0 else tuple(-t for t in m)
        return m

    ident = (1, 0, 0, 1)
    seen = {ident}
    frontier = [ident]
    out = [ident]
    for _ in range(depth):
        nxt = []
        for g in frontier:
            for s in gens:
                h = key(mul(s, g))
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        out.extend(nxt)
        frontier = nxt
    return out


def limit_set_gaps(r, depth: int) -> List[Gap]:
    """Gaps of a depth-limited approximation of the limit set inside [0, 1].

    The free sides I1 and I2 of the fundamental domain lie in the domain of
    discontinuity; their images under group words of length <= depth are
    merged into maximal open intervals.
    """
    r = as_slope(r)
    if r.den == 0 or not 0 < r.num < r.den:
        raise ValueError(f"r must lie strictly between 0 and 1, got {r}")
    data = _orbit_data(r)
    sides = [(Fraction(0), data.r1.to_fraction()), (data.r2.to_fraction(), Fraction(1))]
    sides = [(a, b) for a, b in sides if a < b]
    ivs: List[Tuple[Fraction, Fraction]] = []
    for g in _group_ball(data.gens, depth):
        for lo, hi in sides:
            _clip_unit(_image_arc(g, lo, hi), ivs)
    return [Gap(lo, hi, depth) for lo, hi in _merge(ivs)]


def gap_measure(gaps: Iterable[Gap]) -> Fraction:
    return sum((g.length for g in gaps), Fraction(0))
