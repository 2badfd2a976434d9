"""Independent brute-force oracles shared by the test modules."""

from __future__ import annotations

from fractions import Fraction
from math import gcd, inf
from typing import Dict, List, Set, Tuple

import numpy as np

from twobridge.farey import Slope, fusion_intervals
from twobridge.orbit import _act, ball_generators, ball_points


def _mul(x, y):
    return (x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3],
            x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3])


def _pkey(m):
    for v in m:
        if v:
            return m if v > 0 else (-m[0], -m[1], -m[2], -m[3])
    return m


def _inv(m):
    det = m[0] * m[3] - m[1] * m[2]
    return (m[3] * det, -m[1] * det, -m[2] * det, m[0] * det)


def element_ball(gens, depth):
    ident = (1, 0, 0, 1)
    seen = {ident}
    frontier = [ident]
    for _ in range(depth):
        nxt = []
        for g in frontier:
            for s in gens:
                h = _pkey(_mul(s, g))
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
    return seen


def _fval(x):
    return inf if x[1] == 0 else x[0] / x[1]


def _obj(vals):
    out = np.empty(len(vals), dtype=object)
    out[:] = vals
    return out


class TargetBall:
    """Members of I1 u I2 u {inf, r} within BFS distance ``far + near`` of slopes.

    The far half of the search is precomputed once per r: the images of the
    free sides I1, I2 and of the points inf, r under every generator word of
    length <= far. A slope s reaches a target within far + near steps exactly
    when some point of its depth-near ball lies in one of those images; the
    target is then recovered exactly by applying the inverse word.
    """

    def __init__(self, r: Slope, far_depth: int = 8, n_long: int = 16):
        self.r = r
        fd = fusion_intervals(r)
        self.r1, self.r2 = fd.r1, fd.r2
        self.gens = ball_generators(r)
        mats = element_ball(self.gens, far_depth)
        A, B, C, D = (_obj([m[i] for m in mats]) for i in range(4))
        det = A * D - B * C
        inv = (D * det, -B * det, -C * det, A * det)
        self.inverse_arrays = inv
        self.inverse_bound = np.array(
            [float(max(abs(x), abs(y), abs(z), abs(w))) for x, y, z, w in zip(*inv)])
        fits = self.inverse_bound < 2.0 ** 40
        self.inverse_small = tuple(np.where(fits, x, 0).astype(np.int64) for x in inv)

        def image(x):
            return A * x[0] + B * x[1], C * x[0] + D * x[1]

        # preimage of infinity, as a primitive vector (p0, p1) with p1 >= 0
        p0, p1 = inv[0], inv[2]
        flip = (p1 < 0).astype(bool)
        p0 = np.where(flip, -p0, p0)
        p1 = np.where(flip, -p1, p1)
        idx = np.arange(len(mats))
        los, his, owners = [], [], []
        sides = [((0, 1), (fd.r1.num, fd.r1.den)), ((fd.r2.num, fd.r2.den), (1, 1))]
        for a, b in [(a, b) for a, b in sides if a != b]:
            na, da = image(a)
            nb, db = image(b)
            nm, dm = image((a[0] * b[1] + b[0] * a[1], 2 * a[1] * b[1]))
            fa, fb, fm = (_fvals(n, d) for n, d in ((na, da), (nb, db), (nm, dm)))
            lo, hi = np.minimum(fa, fb), np.maximum(fa, fb)
            wraps = ((p1 != 0) & (a[0] * p1 <= p0 * a[1]) & (p0 * b[1] <= b[0] * p1)).astype(bool)
            plain = ~wraps
            los.append(lo[plain] - _pad(lo[plain]))
            his.append(hi[plain] + _pad(hi[plain]))
            owners.append(idx[plain])
            # wrapping images: a ray to +inf from the larger finite end and
            # a ray to -inf from the smaller one; one may be missing when an
            # endpoint is itself infinite
            w = wraps & np.isfinite(hi)
            los.append(hi[w] - _pad(hi[w]))
            his.append(np.full(int(w.sum()), inf))
            owners.append(idx[w])
            los.append(np.full(int(w.sum()), -inf))
            his.append(lo[w] + _pad(lo[w]))
            owners.append(idx[w])
            w = wraps & ~np.isfinite(hi)
            up = w & (fm > lo)
            los.append(lo[up] - _pad(lo[up]))
            his.append(np.full(int(up.sum()), inf))
            owners.append(idx[up])
            down = w & ~(fm > lo)
            los.append(np.full(int(down.sum()), -inf))
            his.append(lo[down] + _pad(lo[down]))
            owners.append(idx[down])
        # images of inf, r and any one-point side, as degenerate arcs
        # (one element per distinct image: stabilizers repeat them many times)
        for x in [(1, 0), (r.num, r.den)] + [a for a, b in sides if a == b]:
            n, d = image(x)
            first: Dict[Tuple[int, int], int] = {}
            for k, (nn, dd) in enumerate(zip(n, d)):
                first.setdefault((-nn, -dd) if dd < 0 or (dd == 0 and nn < 0) else (nn, dd), k)
            keep = np.fromiter(first.values(), dtype=np.int64, count=len(first))
            f = _fvals(n[keep], d[keep])
            fin = np.isfinite(f)
            pad = np.where(fin, _pad(np.where(fin, f, 0)), 0)
            los.append(f - pad)
            his.append(f + pad)
            owners.append(keep)
        lo, hi, own = np.concatenate(los), np.concatenate(his), np.concatenate(owners)
        # rays and a few long arcs would defeat the prefix-max scan; keep them apart
        finite = np.isfinite(lo) & np.isfinite(hi)
        width = np.where(finite, hi - np.where(finite, lo, 0), inf)
        order = np.argsort(width, kind="stable")
        n_long = min(len(order), n_long + int((~np.isfinite(width)).sum()))
        longs, short = order[len(order) - n_long:], order[: len(order) - n_long]
        self.long_lo, self.long_hi, self.long_own = lo[longs], hi[longs], own[longs]
        short = short[np.argsort(lo[short], kind="stable")]
        self.lo, self.hi, self.own = lo[short], hi[short], own[short]
        self.prefmax = np.maximum.accumulate(self.hi) if len(self.hi) else self.hi

    def in_target(self, x: Tuple[int, int]) -> bool:
        n, d = x
        r, r1, r2 = self.r, self.r1, self.r2
        if d == 0 or n * r.den == r.num * d:
            return True
        if 0 <= n and n * r1.den <= r1.num * d:
            return True
        return r2.num * d <= n * r2.den and n <= d

    def _near(self, slopes, depth):
        """Rows (source index, n, d) of non-backtracking words of length <= depth."""
        gens = self.gens
        bound = 2.0 * max(abs(v) for g in gens for v in g)
        inverse_of = [gens.index(_pkey(_inv(g))) for g in gens]
        src = np.arange(len(slopes))
        n = np.array([s.num for s in slopes], dtype=np.int64)
        d = np.array([s.den for s in slopes], dtype=np.int64)
        last = np.full(len(slopes), -1)
        rows = [(src, n, d)]
        for _ in range(depth):
            nxt = []
            for k, (a, b, c, e) in enumerate(gens):
                keep = last != inverse_of[k]
                if len(n) and bound * float(max(np.abs(n).max(), np.abs(d).max())) >= 2.0 ** 62:
                    raise OverflowError("near ball would overflow int64")
                nn = a * n[keep] + b * d[keep]
                dd = c * n[keep] + e * d[keep]
                neg = (dd < 0) | ((dd == 0) & (nn < 0))
                nn = np.where(neg, -nn, nn)
                dd = np.where(neg, -dd, dd)
                nxt.append((src[keep], nn, dd, np.full(int(keep.sum()), k)))
            src = np.concatenate([t[0] for t in nxt])
            n = np.concatenate([t[1] for t in nxt])
            d = np.concatenate([t[2] for t in nxt])
            last = np.concatenate([t[3] for t in nxt])
            rows.append((src, n, d))
        return (np.concatenate([t[0] for t in rows]),
                np.concatenate([t[1] for t in rows]),
                np.concatenate([t[2] for t in rows]))

    def _hits(self, slopes, near_depth):
        """Candidate (source, y, element) triples with y possibly in element(T)."""
        src, n, d = self._near(slopes, near_depth)
        with np.errstate(divide="ignore", invalid="ignore"):
            v = np.where(d == 0, inf, n / np.where(d == 0, 1, d))
        rows, owners = [], []
        m = (v[:, None] >= self.long_lo[None, :]) & (v[:, None] <= self.long_hi[None, :])
        i, j = np.nonzero(m)
        rows.append(i)
        owners.append(self.long_own[j])
        j0 = np.searchsorted(self.lo, v, side="right") - 1
        jj = np.maximum(j0, 0)
        # the common case: only the nearest arc can contain v
        alive = (j0 >= 0) & (self.prefmax[jj] >= v)
        ri = np.nonzero(alive & (self.hi[jj] >= v))[0]
        rows.append(ri)
        owners.append(self.own[jj[ri]])
        # walk further left while the prefix maximum still reaches v
        cur = np.nonzero(alive)[0]
        step = 1
        while len(cur):
            jj = j0[cur] - step
            ok = jj >= 0
            cur, jj = cur[ok], jj[ok]
            ok = self.prefmax[jj] >= v[cur]
            cur, jj = cur[ok], jj[ok]
            hit = self.hi[jj] >= v[cur]
            rows.append(cur[hit])
            owners.append(self.own[jj[hit]])
            step += 1
        rows = np.concatenate(rows)
        owners = np.concatenate(owners).astype(np.int64)
        return src[rows], n[rows], d[rows], owners

    def _resolve(self, n, d, owners):
        """Exact preimages t = element^-1(y) and whether they lie in the target.

        Rows whose entries provably stay below 2**40 are done in int64, the
        rest with Python integers.
        """
        small = (self.inverse_bound[owners] * (np.abs(n) + np.abs(d)).astype(float)) < 2.0 ** 40
        groups = []
        for mask, inv in ((small, self.inverse_small), (~small, self.inverse_arrays)):
            idx = np.nonzero(mask)[0]
            a, b, c, e = (x[owners[idx]] for x in inv)
            nn, dd = n[idx], d[idx]
            if inv is self.inverse_arrays:
                nn, dd = nn.astype(object), dd.astype(object)
            tn, td = a * nn + b * dd, c * nn + e * dd
            neg = (td < 0) | ((td == 0) & (tn < 0))
            tn = np.where(neg, -tn, tn)
            td = np.where(neg, -td, td)
            r, r1, r2 = self.r, self.r1, self.r2
            ok = ((td == 0) | (tn * r.den == r.num * td)
                  | ((tn >= 0) & (tn * r1.den <= r1.num * td))
                  | ((r2.num * td <= tn * r2.den) & (tn <= td)))
            groups.append((idx, tn, td, ok.astype(bool)))
        return groups

    def targets_many(self, slopes, near_depth: int = 4) -> List[Set[Tuple[int, int]]]:
        slopes = list(slopes)
        src, n, d, owners = self._hits(slopes, near_depth)
        found: List[Set[Tuple[int, int]]] = [set() for _ in slopes]
        for idx, tn, td, ok in self._resolve(n, d, owners):
            for si, a, b in zip(src[idx][ok], tn[ok], td[ok]):
                found[si].add((int(a), int(b)))
        return found

    def mismatches(self, slopes, expected, near_depth: int = 4):
        """Slopes whose target set is not exactly {expected}, with that set."""
        slopes = list(slopes)
        src, n, d, owners = self._hits(slopes, near_depth)
        big = max(max(abs(e.num), e.den) for e in expected) >= 2 ** 20
        dtype = object if big else np.int64
        en_all = np.array([e.num for e in expected], dtype=dtype)
        ed_all = np.array([e.den for e in expected], dtype=dtype)
        reached = np.zeros(len(slopes), dtype=bool)
        bad = set()
        for idx, tn, td, ok in self._resolve(n, d, owners):
            s_idx = src[idx]
            en, ed = en_all[s_idx], ed_all[s_idx]
            if big:
                tn, td = tn.astype(object), td.astype(object)
            same = (tn * ed == en * td).astype(bool)
            bad |= set(s_idx[ok & ~same].tolist())
            reached[s_idx[ok & same]] = True
        bad |= set(np.nonzero(~reached)[0].tolist())
        return [(slopes[i], self.targets(slopes[i], near_depth)) for i in sorted(bad)]

    def targets(self, s: Slope, near_depth: int = 4) -> Set[Tuple[int, int]]:
        return self.targets_many([s], near_depth)[0]


def _pad(x):
    # int / int is correctly rounded and int64 -> float adds at most another
    # half ulp, so a few ulps cover every rounding on either side
    return 4 * np.spacing(np.abs(x))


def _fvals(n, d):
    zero = d == 0
    neg = (d < 0).astype(bool)
    n = np.where(neg, -n, n)
    d = np.where(zero, 1, np.where(neg, -d, d))
    out = (n / d).astype(float)
    out[zero.astype(bool)] = inf
    return out


def brute_orbit_targets(r: Slope, s: Slope, depth: int) -> Set[Tuple[int, int]]:
    """Plain BFS version, for small depths."""
    tb_in = TargetBall(r, 0).in_target
    return {x for x in ball_points(ball_generators(r), (s.num, s.den), depth) if tb_in(x)}


def coprime_pairs(max_p: int, lo_p: int = 2):
    for p in range(lo_p, max_p + 1):
        for q in range(1, p):
            if gcd(p, q) == 1:
                yield Slope(q, p)


def longitude_cusp_shape(rep) -> complex:
    """Cusp shape of a 2-bridge knot from the longitude, without any series.

    For odd p the relator reads ``a h m h^-1`` with m = b or b^-1, so the
    reversed word times h commutes with rho(b). It is lower unipotent up to
    sign; its corner entry divided by that of the meridian conjugate to a
    gives the shape (real part fixed only up to the integer choice of
    longitude).
    """
    from twobridge.riley import _eval_matrix
    from twobridge.words import u_text

    q, p = rep.r.num, rep.r.den
    if p % 2 == 0:
        raise ValueError("two-component links have no single longitude here")
    t = u_text(q, p)
    h, mid = t[1:p], t[p]
    M = _eval_matrix(h[::-1] + h, rep.omega)
    # the meridian conjugate to a is b^-1 when the middle letter is b
    meridian = -rep.omega if mid == "b" else rep.omega
    # M = -[[1, 0], [c, 1]] for the geometric root; the leading minus orients
    # the longitude against h
    return complex(-M[1, 0] / (M[0, 0] * meridian))
