"""Decision procedures for loops on the bridge sphere of a 2-bridge link.

Every verdict is reached by exact arithmetic on slopes: normalise with the
reflection group, then match the short list of exceptional cases.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from math import gcd
from typing import List, Optional, Tuple

from .farey import INF, ONE, Slope, as_slope, fusion_intervals
from .orbit import FareyEdge, orbit_normalize


class Outcome(str, Enum):
    NULL_HOMOTOPIC = "NullHomotopic"
    HOMOTOPIC = "Homotopic"
    NOT_HOMOTOPIC = "NotHomotopic"


# clause identifiers carried by verdicts
NULL_ORBIT = "Thm2.3"
SAME_NORMAL_FORM = "Prop2.2(1)"
HOMOTOPY_P = "Thm2.5(1)"
HOMOTOPY_WHITEHEAD = "Thm2.5(2)"
DISTINCT_NORMAL_FORMS = "Thm2.5"


def _require_unit(r: Slope) -> None:
    if r.den == 0 or not 0 < r.num < r.den:
        raise ValueError(f"r must satisfy 0 < r < 1, got {r}")


def _mirror(s: Slope) -> Slope:
    return s if s.is_inf else Slope(s.den - s.num, s.den)


def _reduce_r(r: Slope, mirror: bool) -> Tuple[Slope, bool]:
    """Bring r into (0, 1/2], mirroring only when asked to."""
    _require_unit(r)
    if 2 * r.num <= r.den:
        return r, False
    if not mirror:
        raise ValueError(
            f"r={r} exceeds 1/2; the classification assumes 0 < r <= 1/2 "
            "(pass mirror=True to use the reflection s -> 1 - s)"
        )
    return _mirror(r), True


def is_hyperbolic(r) -> bool:
    """K(q/p) is hyperbolic exactly when q is not +-1 mod p."""
    r = as_slope(r)
    _require_unit(r)
    q, p = r.num, r.den
    return q % p not in (1, p - 1)


@dataclass(frozen=True)
class NullVerdict:
    null_homotopic: bool
    normal_form: Slope
    trace: Tuple[FareyEdge, ...]


def is_null_homotopic(r, s) -> NullVerdict:
    r, s = as_slope(r), as_slope(s)
    _require_unit(r)
    s0, trace = orbit_normalize(r, s)
    return NullVerdict(s0.is_inf or s0 == r, s0, tuple(trace))


def has_epimorphism(r, s) -> bool:
    """Whether s or s + 1 lies in the orbit of r or infinity."""
    r, s = as_slope(r), as_slope(s)
    _require_unit(r)
    if s.is_inf:
        return True
    return any(is_null_homotopic(r, t).null_homotopic for t in (s, Slope(s.num + s.den, s.den)))


@dataclass(frozen=True)
class HomotopyVerdict:
    outcome: Outcome
    witness: str
    normal_forms: Tuple[Slope, Slope]
    traces: Tuple[Tuple[FareyEdge, ...], Tuple[FareyEdge, ...]] = field(repr=False)
    mirrored: bool = False

    @property
    def homotopic(self) -> bool:
        return self.outcome is not Outcome.NOT_HOMOTOPIC


_WHITEHEAD_PAIRS = (
    frozenset({Slope(1, 6), Slope(3, 10)}),
    frozenset({Slope(3, 4), Slope(5, 12)}),
)


def _one_over_p_pair(r: Slope, s: Slope, t: Slope) -> bool:
    if r.num != 1 or s.is_inf or t.is_inf:
        return False
    # q1 = q2 and q1 / (p1 + p2) = 1 / p
    return s.num == t.num and s.num > 0 and s.num * r.den == s.den + t.den


def are_homotopic(r, s, t, mirror: bool = False) -> HomotopyVerdict:
    r, s, t = as_slope(r), as_slope(s), as_slope(t)
    r, mirrored = _reduce_r(r, mirror)
    if mirrored:
        s, t = _mirror(s), _mirror(t)
    s0, ts = orbit_normalize(r, s)
    t0, tt = orbit_normalize(r, t)
    traces = (tuple(ts), tuple(tt))
    null = {INF, r}
    if s0 in null and t0 in null:
        return HomotopyVerdict(Outcome.NULL_HOMOTOPIC, NULL_ORBIT, (s0, t0), traces, mirrored)
    if s0 == t0:
        return HomotopyVerdict(Outcome.HOMOTOPIC, SAME_NORMAL_FORM, (s0, t0), traces, mirrored)
    if s0 in null or t0 in null:
        return HomotopyVerdict(Outcome.NOT_HOMOTOPIC, NULL_ORBIT, (s0, t0), traces, mirrored)
    if _one_over_p_pair(r, s0, t0):
        return HomotopyVerdict(Outcome.HOMOTOPIC, HOMOTOPY_P, (s0, t0), traces, mirrored)
    if r == Slope(3, 8) and frozenset({s0, t0}) in _WHITEHEAD_PAIRS:
        return HomotopyVerdict(Outcome.HOMOTOPIC, HOMOTOPY_WHITEHEAD, (s0, t0), traces, mirrored)
    return HomotopyVerdict(Outcome.NOT_HOMOTOPIC, DISTINCT_NORMAL_FORMS, (s0, t0), traces, mirrored)


def one_over_p_pairs(p: int, max_den: int) -> List[Tuple[Slope, Slope]]:
    """Pairs (q/p1, q/p2) in [0, 1] with p1 < p2 <= max_den and p1 + p2 = q p."""
    out = []
    for q in range(1, max_den + 1):
        total = q * p
        for p1 in range(q, total // 2 + 1):
            p2 = total - p1
            if p2 <= p1 or p2 > max_den:
                continue
            if gcd(q, p1) == 1 and gcd(q, p2) == 1:
                out.append((Slope(q, p1), Slope(q, p2)))
    return out


# ---------------------------------------------------------------- peripheral / primitive


@dataclass(frozen=True)
class PeripheralVerdict:
    peripheral: bool
    clause: Optional[str]
    normal_form: Slope
    n: Optional[int] = None
    mirrored: bool = False


class Primitivity(str, Enum):
    PRIMITIVE = "Primitive"
    POWER = "PowerOfPrimitive"


@dataclass(frozen=True)
class PrimitivityVerdict:
    kind: Primitivity
    exponent: int  # 1 for primitive, else 2 or 3
    clause: Optional[str]
    normal_form: Slope
    mirrored: bool = False

    def __str__(self) -> str:
        if self.kind is Primitivity.PRIMITIVE:
            return "Primitive"
        return f"PowerOfPrimitive({self.exponent})"


def _prepare(r: Slope, s: Slope, mirror: bool) -> Tuple[Slope, Slope, bool]:
    r, mirrored = _reduce_r(r, mirror)
    if mirrored:
        s = _mirror(s)
    if not is_hyperbolic(r):
        raise ValueError(f"K({r}) is not hyperbolic: {r.num} is +-1 mod {r.den}")
    s0, _ = orbit_normalize(r, s)
    return r, s0, mirrored


def _n_from(value: int, offset: int, divisor: int) -> Optional[int]:
    # solve divisor * n + offset = value for an integer n
    if (value - offset) % divisor:
        return None
    return (value - offset) // divisor


def peripheral_status(r, s, mirror: bool = False) -> PeripheralVerdict:
    r, s, mirrored = _prepare(as_slope(r), as_slope(s), mirror)
    if s.is_inf or s == r:
        # the trivial element lies in every cusp subgroup
        return PeripheralVerdict(True, "null-homotopic", s, None, mirrored)
    if r == Slope(2, 5) and s in (Slope(1, 5), Slope(3, 5)):
        return PeripheralVerdict(True, "Thm2.6(1)(i)", s, None, mirrored)
    n = _n_from(r.den, 1, 2)
    if n is not None and n >= 3:
        if r == Slope(n, 2 * n + 1) and s == Slope(n + 1, 2 * n + 1):
            return PeripheralVerdict(True, "Thm2.6(1)(ii)", s, n, mirrored)
        if r == Slope(2, 2 * n + 1) and s == Slope(1, 2 * n + 1):
            return PeripheralVerdict(True, "Thm2.6(1)(iii)", s, n, mirrored)
    return PeripheralVerdict(False, None, s, None, mirrored)


_POWERS = {
    (Slope(2, 5), Slope(2, 7)): (3, "Thm2.6(2)(i)"),
    (Slope(2, 5), Slope(3, 4)): (3, "Thm2.6(2)(i)"),
    (Slope(3, 7), Slope(2, 7)): (2, "Thm2.6(2)(ii)"),
    (Slope(2, 7), Slope(3, 7)): (2, "Thm2.6(2)(iii)"),
}


def primitivity(r, s, mirror: bool = False) -> PrimitivityVerdict:
    r, s, mirrored = _prepare(as_slope(r), as_slope(s), mirror)
    if s.is_inf or s == r:
        raise ValueError(f"the loop of slope {s} is null-homotopic; primitivity is undefined")
    hit = _POWERS.get((r, s))
    if hit:
        return PrimitivityVerdict(Primitivity.POWER, hit[0], hit[1], s, mirrored)
    return PrimitivityVerdict(Primitivity.PRIMITIVE, 1, None, s, mirrored)


def in_free_sides(r, s) -> bool:
    fd = fusion_intervals(as_slope(r))
    return fd.contains(as_slope(s))
