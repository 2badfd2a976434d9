"""Parabolic representations of 2-bridge link groups and McShane-type sums.

The meridians go to ``A = [[1, 1], [0, 1]]`` and ``B = [[1, 0], [w, 1]]``;
the relator u_r cuts out finitely many values of ``w``, one of which (up to
complex conjugation) is the holonomy of the complete hyperbolic structure.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy

from .config import DEFAULT_TOLERANCES, Tolerances
from .decide import is_hyperbolic
from .farey import ONE, ZERO, Slope, as_slope, enumerate_interval, fusion_intervals
from .orbit import _act, _group_ball, _orbit_data, gamma_inf_normalize, limit_set_gaps
from .words import torus_slope_word, u_text

Matrix = np.ndarray


class SelectionFailed(RuntimeError):
    """No root of the relator polynomial passed the discreteness filter."""

    def __init__(self, r: Slope, candidates: Sequence[complex]):
        self.r = r
        self.candidates = list(candidates)
        roots = ", ".join(f"{z:.12g}" for z in self.candidates)
        super().__init__(f"root selection failed for r={r}; candidates: [{roots}]")


# ---------------------------------------------------------------- polynomials

Poly = List[int]  # coefficients, lowest degree first


def _padd(p: Poly, q: Poly) -> Poly:
    if len(p) < len(q):
        p, q = q, p
    out = list(p)
    for i, c in enumerate(q):
        out[i] += c
    return out


def _pscale_shift(p: Poly, c: int) -> Poly:
    # c * w * p
    return [0] + [c * x for x in p]


def _trim(p: Poly) -> Poly:
    while len(p) > 1 and p[-1] == 0:
        p = p[:-1]
    return p


def relator_matrix_poly(r) -> Tuple[Poly, Poly, Poly, Poly]:
    """Entries of rho(u_r) as integer polynomials in w."""
    r = as_slope(r)
    m = ([1], [0], [0], [1])
    # right-multiply letter by letter
    for ch in u_text(r.num, r.den):
        a, b, c, d = m
        if ch in "aA":
            e = 1 if ch == "a" else -1
            m = (a, _padd(b, [e * x for x in a]), c, _padd(d, [e * x for x in c]))
        else:
            e = 1 if ch == "b" else -1
            m = (_padd(a, _pscale_shift(b, e)), b, _padd(c, _pscale_shift(d, e)), d)
    return tuple(_trim(list(x)) for x in m)  # type: ignore[return-value]


_W = sympy.Symbol("w")


def _to_sympy(p: Poly) -> sympy.Poly:
    return sympy.Poly(list(reversed(p)), _W, domain="ZZ")


def relator_polynomial(r) -> Poly:
    """Primitive integer polynomial whose roots are the w with rho(u_r) = +-I.

    It is the gcd of the off-diagonal entries, the diagonal difference, and
    the product of the two ``trace = +-2`` conditions; roots that fail the
    full matrix test are removed by :func:`relator_roots`.
    """
    r = as_slope(r)
    if r.den == 0 or not 0 < r.num < r.den:
        raise ValueError(f"r must lie strictly between 0 and 1, got {r}")
    a, b, c, d = (_to_sympy(x) for x in relator_matrix_poly(r))
    g = sympy.gcd(b, c)
    g = sympy.gcd(g, a - d)
    tr = a + d
    g = sympy.gcd(g, (tr - 2) * (tr + 2))
    g = g.primitive()[1]
    if g.LC() < 0:
        g = -g
    return list(reversed([int(x) for x in g.all_coeffs()]))


def _eval_matrix(text: str, w: complex) -> Matrix:
    A = np.array([[1, 1], [0, 1]], dtype=complex)
    Ai = np.array([[1, -1], [0, 1]], dtype=complex)
    B = np.array([[1, 0], [w, 1]], dtype=complex)
    Bi = np.array([[1, 0], [-w, 1]], dtype=complex)
    table = {"a": A, "A": Ai, "b": B, "B": Bi}
    m = np.eye(2, dtype=complex)
    for ch in text:
        m = m @ table[ch]
    return m


def _relator_residual(r: Slope, w: complex) -> float:
    m = _eval_matrix(u_text(r.num, r.den), w)
    eye = np.eye(2)
    return min(np.abs(m - eye).max(), np.abs(m + eye).max())


def _growth_scale(r: Slope, w: complex) -> float:
    # size of the product of entrywise absolute values: rounding error in
    # rho(u_r) is proportional to it
    return float(np.abs(_eval_matrix(u_text(r.num, r.den).lower(), abs(w))).max())


def relator_threshold(r: Slope, w: complex, tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """Accepted relator residual: the fixed tolerance, widened once entries grow past 1e4."""
    return tol.relator_residual * max(1.0, _growth_scale(r, w) * 1e-4)


def _polish(coeffs: Poly, z: complex, tol: float) -> complex:
    p = np.polynomial.Polynomial(np.array(coeffs, dtype=float))
    dp = p.deriv()
    for _ in range(50):
        v, dv = p(z), dp(z)
        if dv == 0:
            break
        step = v / dv
        z -= step
        if abs(step) <= tol * max(1.0, abs(z)):
            break
    return complex(z)


def relator_roots(r, tol: Tolerances = DEFAULT_TOLERANCES) -> List[complex]:
    """Roots of the relator polynomial that satisfy the full matrix condition."""
    r = as_slope(r)
    coeffs = relator_polynomial(r)
    if len(coeffs) <= 1:
        return []
    roots = np.polynomial.Polynomial(np.array(coeffs, dtype=float)).roots()
    out = []
    for z in roots:
        z = _polish(coeffs, complex(z), tol.root_residual)
        if abs(z) < tol.root_residual:
            z = 0j
        if _relator_residual(r, z) < relator_threshold(r, z, tol) and z not in out:
            out.append(z)
    return out


# ---------------------------------------------------------------- representation


@dataclass(frozen=True)
class Representation:
    r: Slope
    omega: complex
    matA: Matrix = field(compare=False, repr=False)
    matB: Matrix = field(compare=False, repr=False)
    residual: float = 0.0

    def matrix(self, text: str) -> Matrix:
        return _eval_matrix(text, self.omega)

    def trace(self, text: str) -> complex:
        return complex(np.trace(self.matrix(text)))


def make_representation(r, omega: complex, tol: Tolerances = DEFAULT_TOLERANCES,
                        check: bool = True) -> Representation:
    r = as_slope(r)
    omega = complex(omega)
    if omega == 0:
        raise ValueError("w = 0 gives a reducible (abelian) representation")
    res = _relator_residual(r, omega)
    if check and res >= relator_threshold(r, omega, tol):
        raise ValueError(f"w={omega} does not kill the relator of {r} (residual {res:.3g})")
    return Representation(
        r, omega,
        np.array([[1, 1], [0, 1]], dtype=complex),
        np.array([[1, 0], [omega, 1]], dtype=complex),
        res,
    )


def _free_side_slopes(r: Slope, lo_den: int, hi_den: int) -> List[Slope]:
    fd = fusion_intervals(r)
    out: List[Slope] = []
    for I in (fd.I1, fd.I2):
        out.extend(s for s in enumerate_interval(I, hi_den) if s.den >= lo_den)
    return out


def _passes_filter(r: Slope, z: complex, tol: Tolerances) -> bool:
    """Discreteness evidence for the representation with parameter z.

    Loops on the free sides must map to loxodromic or parabolic elements
    (trace off the open segment (-2, 2)), and their traces must already be
    growing at moderate denominators; the other Galois conjugates keep some
    traces near the unit circle.
    """
    m = tol.loxodromic_margin
    for s in _free_side_slopes(r, 0, 12):
        T = complex(np.trace(_eval_matrix(u_text(s.num, s.den), z)))
        if abs(T.imag) <= m and abs(T.real) < 2 - tol.parabolic:
            return False
    far = _free_side_slopes(r, 13, 24)
    return all(abs(np.trace(_eval_matrix(u_text(s.num, s.den), z))) > 2 - tol.parabolic for s in far)


def geometric_representation(r, tol: Tolerances = DEFAULT_TOLERANCES) -> Representation:
    """The root with Im w > 0 passing the discreteness filter; ties go to the largest Im w."""
    r = as_slope(r)
    if not is_hyperbolic(r):
        raise ValueError(f"K({r}) is not hyperbolic")
    roots = [z for z in relator_roots(r, tol) if z != 0]
    good = [z for z in roots if z.imag > 0 and _passes_filter(r, z, tol)]
    if not good:
        raise SelectionFailed(r, roots)
    best = max(good, key=lambda z: abs(z.imag))
    return make_representation(r, best, tol)


@lru_cache(maxsize=64)
def _cached_geometric(q: int, p: int) -> Representation:
    return geometric_representation(Slope(q, p))


def trace_of_slope(rep: Representation, s) -> complex:
    """tr rho(u_s) for 0 <= s <= 1 (callers normalise other slopes first)."""
    s = as_slope(s)
    return rep.trace(u_text(s.num, s.den))


def normalized_trace(rep: Representation, s) -> complex:
    """tr rho(u_s) after moving s into [0, 1] with the translations x -> 2n - x."""
    s = as_slope(s)
    if s.is_inf:
        raise ValueError("the slope infinity carries no loop in this presentation")
    s0, _g, _e = gamma_inf_normalize(s)
    return trace_of_slope(rep, s0)


# ---------------------------------------------------------------- lengths and terms


@dataclass(frozen=True)
class TranslationLength:
    value: complex
    parabolic: bool


def translation_length(T: complex, eps: float = 1e-12) -> TranslationLength:
    """Complex translation length ``l = log(mu^2)`` where ``mu + 1/mu = T`` and ``|mu| >= 1``.

    Only ``T^2`` enters, so T and -T give identical results.  On the unit
    circle (elliptic T) the root with non-negative imaginary part is used.
    """
    T = complex(T)
    S = T * T - 2  # mu^2 + mu^-2
    if abs(S - 2) <= eps:
        return TranslationLength(0j, True)
    root = cmath.sqrt(S * S - 4)
    x, y = (S + root) / 2, (S - root) / 2
    if abs(y) > abs(x) or (abs(y) == abs(x) and y.imag > x.imag):
        x = y
    l = cmath.log(x)
    im = math.remainder(l.imag, 2 * math.pi)
    if im <= -math.pi:
        im += 2 * math.pi
    return TranslationLength(complex(max(l.real, 0.0), im), False)


def h_from_beta_trace(Tb: complex) -> complex:
    """1 / (1 + e^l) for an element of trace Tb; e^l = mu^2."""
    Tb = complex(Tb)
    root = cmath.sqrt(Tb * Tb - 4)
    mu = (Tb + root) / 2
    if abs(mu) < 1:
        mu = (Tb - root) / 2
    denom = 1 + mu * mu
    if denom == 0:
        raise ZeroDivisionError("degenerate term: e^l = -1")
    return 1 / denom


def alpha_sign(s: Slope) -> int:
    """Sign relating tr rho(u_s) to the trace of the lifted alpha_s.

    With both meridians of trace +2, the lift of beta_s whose square is the
    loop alpha_s satisfies ``tr(beta)^2 = sign * tr rho(u_s) + 2``.
    """
    return -1


def h_term(rep: Representation, s, sign: Optional[int] = None) -> complex:
    """The summand 1 / (1 + e^{l(beta_s)}) for a slope in [0, 1]."""
    s = as_slope(s)
    sg = alpha_sign(s) if sign is None else sign
    T = trace_of_slope(rep, s)
    return h_from_beta_trace(cmath.sqrt(sg * T + 2))


# ---------------------------------------------------------------- trace recursion
#
# For the four-punctured sphere with all four peripheral traces equal to 2,
# the traces A_s = tr rho(u_s) of a Farey triangle (u, v, u+v) and its
# neighbour across the edge (u, v) satisfy A(u+v) + A(u-v) = 8 - A(u) A(v).
# Along the once-punctured torus the familiar t(u+v) + t(u-v) = t(u) t(v)
# holds instead.  Both are checked against matrix products in the tests.

Node = Tuple[int, int]
INF_POINT: Node = (1, 0)
TermSink = Callable[[Slope, complex, complex], None]


def sphere_step(Au: complex, Av: complex, Aw: complex) -> complex:
    return 8 - Au * Av - Aw


def torus_step(tu: complex, tv: complex, tw: complex) -> complex:
    return tu * tv - tw


def _unit_seed(rep: Representation) -> Tuple[complex, complex, complex]:
    """Traces at 0 and 1 plus the value the recursion assigns to infinity."""
    A0 = trace_of_slope(rep, ZERO)
    A1 = trace_of_slope(rep, ONE)
    Ah = trace_of_slope(rep, Slope(1, 2))
    return A0, A1, 8 - A0 * A1 - Ah


def _walk_to(target: Node, u: Node, v: Node, tu: complex, tv: complex, tw: complex, step) -> complex:
    # follow the Stern-Brocot path from the edge (u, v) down to target
    n, d = target
    while True:
        m = (u[0] + v[0], u[1] + v[1])
        tm = step(tu, tv, tw)
        if m == (n, d):
            return tm
        if n * m[1] < m[0] * d:
            v, tv, tw = m, tm, tv
        else:
            u, tu, tw = m, tm, tu
        if m[1] > d:
            raise ValueError(f"{n}/{d} is not below the edge {u}, {v}")


def recursive_trace(rep: Representation, s) -> complex:
    """tr rho(u_s) for 0 <= s <= 1 computed by the Farey recursion, not by words."""
    s = as_slope(s)
    A0, A1, Ainf = _unit_seed(rep)
    if s == ZERO:
        return A0
    if s == ONE:
        return A1
    if s.den == 0 or not 0 < s.num < s.den:
        raise ValueError(f"slope {s} is outside [0, 1]")
    return _walk_to((s.num, s.den), (0, 1), (1, 1), A0, A1, Ainf, sphere_step)


def torus_trace_recursive(x: complex, y: complex, z: complex, s) -> complex:
    """Trace of the slope-s loop on a punctured torus from the traces of slopes 0, inf, 1."""
    s = as_slope(s)
    if s.is_inf:
        return y
    if s == ZERO:
        return x
    n, d = s.num, s.den
    if n > 0:
        return _walk_to((n, d), (0, 1), (1, 0), x, y, torus_step(x, y, z), torus_step)
    return _walk_to((n, d), (-1, 0), (0, 1), y, x, z, torus_step)


def torus_trace_direct(X: Matrix, Y: Matrix, s) -> complex:
    """Trace of the slope-s torus word evaluated on the matrices X, Y."""
    table = {"x": X, "X": np.linalg.inv(X), "y": Y, "Y": np.linalg.inv(Y)}
    m = np.eye(2, dtype=complex)
    for ch in torus_slope_word(s).text:
        m = m @ table[ch]
    return complex(np.trace(m))


def _before(x: Node, y: Node) -> bool:
    # x < y for fractions with non-negative denominators (one may be +-1/0)
    return x[0] * y[1] < y[0] * x[1]


@dataclass
class _Tally:
    total: complex = 0j
    count: int = 0
    tail: float = 0.0
    pruned: int = 0


def _tree_sum(u: Node, v: Node, tu: complex, tv: complex, tw: complex, step,
              weight: Callable[[Node], int], reaches: Callable[[Node, Node], bool],
              value: Callable[[complex], complex], prune_eps: float, max_den: int,
              tally: _Tally, sink: Optional[TermSink]) -> None:
    """Weighted preorder sum of value(trace) over the Stern-Brocot tree below (u, v).

    A subtree is cut when its root term is below prune_eps or its root
    denominator exceeds max_den; the weighted size of every cut root goes to
    the tail.  ``reaches(u, v)`` says whether the open interval can hold
    weighted slopes at all.
    """
    stack = [(u, v, tu, tv, tw)]
    while stack:
        u, v, tu, tv, tw = stack.pop()
        if not reaches(u, v):
            continue
        m = (u[0] + v[0], u[1] + v[1])
        tm = step(tu, tv, tw)
        w = weight(m)
        if m[1] > max_den:
            if w:
                tally.tail += w * abs(value(tm))
            continue
        if w:
            h = value(tm)
            tally.total += w * h
            tally.count += 1
            if sink is not None:
                sink(Slope(*m), tm, h)
            if abs(h) < prune_eps:
                tally.tail += w * abs(h)
                tally.pruned += 1
                continue
        stack.append((m, v, tm, tv, tu))
        stack.append((u, m, tu, tm, tv))


def h_from_alpha_trace(A: complex) -> complex:
    return h_from_beta_trace(cmath.sqrt(alpha_sign(ZERO) * A + 2))


@dataclass(frozen=True)
class McShaneReport:
    partial_sum: complex
    term_count: int
    max_den: int
    tail_estimate: float  # heuristic: weighted size of the cut subtree roots
    target: complex
    pruned: int = 0
    branch_spread: float = 0.0  # boundary terms under the two square roots of tr(beta)^2

    @property
    def error(self) -> float:
        return abs(self.partial_sum - self.target)

    def as_dict(self) -> Dict[str, object]:
        return {
            "partial_sum": [self.partial_sum.real, self.partial_sum.imag],
            "target": [self.target.real, self.target.imag],
            "term_count": self.term_count,
            "max_den": self.max_den,
            "tail_estimate": self.tail_estimate,
            "tail_estimate_kind": "heuristic",
            "error": self.error,
            "pruned": self.pruned,
            "branch_spread": self.branch_spread,
        }


def _check_run(prune_eps: float, max_den: int) -> None:
    if not prune_eps > 0:
        raise ValueError("prune_eps must be positive")
    if max_den < 1:
        raise ValueError("max_den must be at least 1")


def _side_sums(rep: Representation, r: Slope, weights: Tuple[int, int, int, int],
               prune_eps: float, max_den: int, sink: Optional[TermSink]) -> Tuple[_Tally, float]:
    """Weighted sum over the free sides; weights are (int I1, bd I1, int I2, bd I2)."""
    _check_run(prune_eps, max_den)
    fd = fusion_intervals(r)
    sides = []
    for I, wi, wb in ((fd.I1, weights[0], weights[1]), (fd.I2, weights[2], weights[3])):
        if wi or wb:
            sides.append(((I.lo.num, I.lo.den), (I.hi.num, I.hi.den), wi, wb))

    def weight(x: Node) -> int:
        for lo, hi, wi, wb in sides:
            if x == lo or x == hi:
                return wb
            if _before(lo, x) and _before(x, hi):
                return wi
        return 0

    def reaches(u: Node, v: Node) -> bool:
        return any(_before(u, hi) and _before(lo, v) for lo, hi, _wi, _wb in sides)

    A0, A1, Ainf = _unit_seed(rep)
    tally = _Tally()
    spread = 0.0
    for node, A in (((0, 1), A0), ((1, 1), A1)):
        w = weight(node)
        if w:
            h = h_from_alpha_trace(A)
            tally.total += w * h
            tally.count += 1
            if sink is not None:
                sink(Slope(*node), A, h)
    for lo, hi, _wi, wb in sides:
        for node in {lo, hi}:
            Tb = cmath.sqrt(alpha_sign(ZERO) * trace_of_slope(rep, Slope(*node)) + 2)
            spread = max(spread, abs(h_from_beta_trace(Tb) - h_from_beta_trace(-Tb)))
    _tree_sum((0, 1), (1, 1), A0, A1, Ainf, sphere_step, weight, reaches,
              h_from_alpha_trace, prune_eps, max_den, tally, sink)
    return tally, spread


def mcshane_sum(rep: Representation, r=None, prune_eps: float = DEFAULT_TOLERANCES.prune_eps,
                max_den: int = 200, sink: Optional[TermSink] = None) -> McShaneReport:
    """Partial sum of the 2-bridge identity: interior slopes twice, endpoints once; target -1."""
    r = rep.r if r is None else as_slope(r)
    tally, spread = _side_sums(rep, r, (2, 1, 2, 1), prune_eps, max_den, sink)
    return McShaneReport(tally.total, tally.count, max_den, tally.tail, -1 + 0j, tally.pruned, spread)


@dataclass(frozen=True)
class ConvergenceRun:
    reports: Tuple[McShaneReport, ...]

    @property
    def differences(self) -> List[float]:
        s = [rep.partial_sum for rep in self.reports]
        return [abs(a - b) for a, b in zip(s, s[1:])]

    @property
    def converging(self) -> bool:
        d = self.differences
        return all(b < a for a, b in zip(d, d[1:]))

    def settled(self, floor: float = 1e-12) -> bool:
        """Strictly shrinking differences, except that differences at rounding level are let through."""
        d = self.differences
        return all(b < a or max(a, b) <= floor for a, b in zip(d, d[1:]))

    @property
    def settling(self) -> bool:
        return self.settled()

    @property
    def final(self) -> McShaneReport:
        return self.reports[-1]


def doubling_run(summer: Callable[[int], McShaneReport], max_den: int, doublings: int = 3) -> ConvergenceRun:
    """Evaluate ``summer`` at max_den, 2 max_den, ... (doublings + 1 runs)."""
    return ConvergenceRun(tuple(summer(max_den << k) for k in range(doublings + 1)))


def mcshane_convergence(rep: Representation, r=None, prune_eps: float = DEFAULT_TOLERANCES.prune_eps,
                        max_den: int = 200, doublings: int = 3) -> ConvergenceRun:
    return doubling_run(lambda n: mcshane_sum(rep, r, prune_eps, n), max_den, doublings)


def cusp_modulus(rep: Representation, r=None, prune_eps: float = DEFAULT_TOLERANCES.prune_eps,
                 max_den: int = 200, sink: Optional[TermSink] = None) -> complex:
    """Cusp shape from the terms on I1 alone, weighted 8/4 for knots and 4/2 for links.

    The real part depends on the choice of longitude and is meaningful only
    modulo 2.
    """
    r = rep.r if r is None else as_slope(r)
    wi, wb = (8, 4) if r.den % 2 else (4, 2)
    tally, _ = _side_sums(rep, r, (wi, wb, 0, 0), prune_eps, max_den, sink)
    return complex(tally.total)


def markov_defect(x: complex, y: complex, z: complex) -> complex:
    return x * x + y * y + z * z - x * y * z


def classical_mcshane_check(x: complex, y: complex, z: complex,
                            prune_eps: float = DEFAULT_TOLERANCES.prune_eps, max_den: int = 200,
                            tol: Tolerances = DEFAULT_TOLERANCES,
                            sink: Optional[TermSink] = None) -> McShaneReport:
    """Sum of 1/(1 + e^l) over all simple loops of a cusped torus; target 1/2.

    (x, y, z) are the traces of the slopes 0, infinity and 1 and must satisfy
    the Markov equation, which makes the commutator parabolic.
    """
    _check_run(prune_eps, max_den)
    x, y, z = complex(x), complex(y), complex(z)
    defect = markov_defect(x, y, z)
    if abs(defect) > tol.markov * max(1.0, abs(x * y * z)):
        raise ValueError(f"Markov condition fails: x^2 + y^2 + z^2 - xyz = {defect:.3g}")
    tally = _Tally()
    for node, t in (((0, 1), x), ((1, 0), y)):
        h = h_from_beta_trace(t)
        tally.total += h
        tally.count += 1
        if sink is not None:
            sink(Slope(*node), t, h)

    def everywhere(_u: Node, _v: Node) -> bool:
        return True

    def one(_m: Node) -> int:
        return 1

    # positive slopes below the edge (0, inf), negative slopes below (-inf, 0)
    _tree_sum((0, 1), (1, 0), x, y, torus_step(x, y, z), torus_step, one, everywhere,
              h_from_beta_trace, prune_eps, max_den, tally, sink)
    _tree_sum((-1, 0), (0, 1), y, x, z, torus_step, one, everywhere,
              h_from_beta_trace, prune_eps, max_den, tally, sink)
    return McShaneReport(tally.total, tally.count, max_den, tally.tail, 0.5 + 0j, tally.pruned)


# ---------------------------------------------------------------- end invariants


@dataclass(frozen=True)
class EvidenceSample:
    point: Fraction
    in_limit_set: bool  # True for orbit images of r, False for points inside a gap
    slopes: Tuple[Slope, ...]
    max_abs_trace: float
    min_abs_trace: float
    last_distance: float

    def as_dict(self) -> Dict[str, object]:
        return {
            "point": f"{self.point.numerator}/{self.point.denominator}",
            "kind": "limit" if self.in_limit_set else "gap",
            "slopes": [str(s) for s in self.slopes],
            "max_abs_trace": self.max_abs_trace,
            "min_abs_trace": self.min_abs_trace,
            "last_distance": self.last_distance,
        }


@dataclass(frozen=True)
class EvidenceReport:
    r: Slope
    depth: int
    samples: Tuple[EvidenceSample, ...]
    escape_level: float

    @property
    def bounded_on_limit_set(self) -> bool:
        return all(s.max_abs_trace <= 2 + DEFAULT_TOLERANCES.parabolic
                   for s in self.samples if s.in_limit_set)

    @property
    def escapes_in_gaps(self) -> bool:
        return all(s.max_abs_trace > self.escape_level for s in self.samples if not s.in_limit_set)

    def as_dict(self) -> Dict[str, object]:
        return {
            "r": str(self.r),
            "depth": self.depth,
            "bounded_on_limit_set": self.bounded_on_limit_set,
            "escapes_in_gaps": self.escapes_in_gaps,
            "escape_level": self.escape_level,
            "samples": [s.as_dict() for s in self.samples],
        }


def _left_parent(x: Fraction) -> Node:
    # the left end of the Stern-Brocot interval in which x first appears
    lo, hi = (0, 1), (1, 0)
    n, d = x.numerator, x.denominator
    while True:
        m = (lo[0] + hi[0], lo[1] + hi[1])
        if m == (n, d):
            return lo
        if n * m[1] < m[0] * d:
            hi = m
        else:
            lo = m


def approach_chain(x: Fraction, length: int) -> List[Slope]:
    """Slopes (k x + L) tending to x from the left, L being its left Stern-Brocot parent."""
    L = _left_parent(x)
    return [Slope(k * x.numerator + L[0], k * x.denominator + L[1]) for k in range(1, length + 1)]


def simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """The rational of smallest denominator strictly between lo and hi (0 <= lo < hi)."""
    a, b = (0, 1), (1, 0)
    while True:
        m = Fraction(a[0] + b[0], a[1] + b[1])
        if m <= lo:
            a = (m.numerator, m.denominator)
        elif m >= hi:
            b = (m.numerator, m.denominator)
        else:
            return m


def _finite_abs(z: complex) -> float:
    # overflow in the recursion shows up as inf or nan; both mean |tr| beyond range
    v = abs(z)
    return v if math.isfinite(v) else math.inf


def _sample(rep: Representation, x: Fraction, limit: bool, slopes: Sequence[Slope]) -> EvidenceSample:
    traces = [_finite_abs(recursive_trace(rep, s)) for s in slopes]
    return EvidenceSample(x, limit, tuple(slopes), max(traces), min(traces),
                          float(abs(slopes[-1].to_fraction() - x)))


def _compose(x: Tuple[int, int, int, int], y: Tuple[int, int, int, int]) -> Tuple[int, int, int, int]:
    return (x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3],
            x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3])


def _unit_trace(rep: Representation, s: Slope) -> complex:
    if not 0 <= s.num <= s.den:
        s = gamma_inf_normalize(s)[0]
    return recursive_trace(rep, s)


def end_invariant_evidence(rep: Representation, r=None, depth: int = 0, length: int = 12,
                           max_points: int = 8, escape_level: float = 100.0) -> EvidenceReport:
    """Trace growth along slopes approaching limit points and gap points.

    Limit points are r and its images g(r) under group words of length
    <= depth; the slopes g P^n(inf) tend to g(r), where P is the parabolic
    element fixing r, and are all null-homotopic.  Each depth-limited gap is
    sampled at the simplest rational of its middle third, approached by a
    mediant chain.
    """
    r = rep.r if r is None else as_slope(r)
    if depth < 0 or length < 1 or max_points < 1:
        raise ValueError("depth must be >= 0; length and max_points must be positive")
    data = _orbit_data(r)
    P = _compose(data.gens[2], data.gens[3])
    path = [INF_POINT]
    for _ in range(length):
        path.append(_act(P, path[-1]))
    images: Dict[Fraction, Tuple[int, int, int, int]] = {}
    for g in _group_ball(data.gens, depth):
        n, d = _act(g, (r.num, r.den))
        if 0 < n < d:
            images.setdefault(Fraction(n, d), g)
    chosen = sorted(images, key=lambda x: (x.denominator, x))[:max_points]
    samples: List[EvidenceSample] = []
    for x in sorted(chosen):
        g = images[x]
        slopes = []
        for pt in path[1:]:
            n, d = _act(g, pt)
            slopes.append(Slope(n, d) if d else INF)
        finite = [s for s in slopes if not s.is_inf]
        traces = [abs(_unit_trace(rep, s)) for s in finite]
        samples.append(EvidenceSample(x, True, tuple(finite), max(traces), min(traces),
                                      float(abs(finite[-1].to_fraction() - x))))
    for gap in limit_set_gaps(r, depth):
        third = (gap.hi - gap.lo) / 3
        mid = simplest_between(gap.lo + third, gap.hi - third)
        samples.append(_sample(rep, mid, False, approach_chain(mid, length)))
    return EvidenceReport(r, depth, tuple(samples), escape_level)
