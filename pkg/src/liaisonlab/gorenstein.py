"""Construction and recognition of arithmetically Gorenstein ideals:
complete intersections, sums of geometrically linked ideals, the
almost-complete-intersection link, point configurations with
Cayley-Bacharach / uniform position checks, and Weak Lefschetz tests.
"""

from itertools import combinations

import numpy as np

from .errors import (
    DuplicatePoint,
    NotACI,
    NotArtinian,
    NotGeometricallyLinked,
    NotRegularSequence,
    WrongCodim,
)
from .groebner import normal_form
from .ideals import Ideal
from .resolution import _Span, classify

_I64 = np.int64


def complete_intersection(forms):
    """Validate a regular sequence (codim = length) and return the ideal."""
    if not forms:
        raise NotRegularSequence("empty form list")
    ring = forms[0].ring
    I = Ideal(ring, forms)
    if I.is_unit or I.codimension() != len(forms):
        raise NotRegularSequence(
            f"codimension {None if I.is_unit else I.codimension()} != {len(forms)} forms"
        )
    I.ci_degrees = tuple(sorted(f.degree for f in forms))
    return I


def sum_of_linked(I1, I2, X):
    """Sum of geometrically linked CM ideals: Gorenstein of codimension c+1."""
    if I1.intersect(I2) != X:
        raise NotGeometricallyLinked("I1 and I2 do not intersect exactly in X")
    cX = classify(X)
    if not cX["gorenstein"]:
        raise NotGeometricallyLinked("the linking ideal is not Gorenstein")
    c = X.codimension()
    for I in (I1, I2):
        if I.codimension() != c:
            raise WrongCodim("summand has wrong codimension")
        if not classify(I)["cm"]:
            raise NotGeometricallyLinked("summand is not Cohen-Macaulay")
    total = I1 + I2
    if total.codimension() != c + 1:
        raise WrongCodim("sum has unexpected codimension")
    cls = classify(total)
    if not cls["gorenstein"]:
        raise NotGeometricallyLinked("sum failed the Gorenstein classification")
    return total


def aci_gorenstein(c, I):
    """J = c : I for an almost complete intersection I = c + (f):
    a CI link away from an ACI always lands on a Gorenstein ideal."""
    from .liaison import direct_link

    cc = classify(c)
    cgens = sum(r for (i, j), r in cc["betti"].entries.items() if i == 0)
    if not cc["gorenstein"] or cgens != c.codimension():
        raise NotACI("the link ideal is not a complete intersection")
    cod = c.codimension()
    clsI = classify(I)
    if not clsI["cm"]:
        raise NotACI("I is not Cohen-Macaulay")
    ngens = sum(r for (i, j), r in clsI["betti"].entries.items() if i == 0)
    if ngens != cod + 1:
        raise NotACI(f"I needs exactly codim+1 = {cod + 1} minimal generators, has {ngens}")
    if I.codimension() != cod:
        raise NotACI("codimension mismatch")
    if not any((c + Ideal(I.ring, [f])) == I for f in I.gens_or_gb()):
        raise NotACI("I is not c plus one extra generator")
    rec = direct_link(c, I)
    J = rec.J
    if not classify(J)["gorenstein"]:
        raise NotACI("the residual failed the Gorenstein classification")
    return J


class PointSet:
    """Reduced points in P^n over GF(p), pairwise distinct up to scalar."""

    __slots__ = ("ring", "coords", "_ideal")

    def __init__(self, ring, coords):
        self.ring = ring
        self.coords = []
        seen = set()
        for pt in coords:
            pt = tuple(int(a) % ring.p for a in pt)
            if len(pt) != ring.nvars or all(a == 0 for a in pt):
                raise DuplicatePoint(f"invalid point {pt}")
            key = _normalize_point(pt, ring.p)
            if key in seen:
                raise DuplicatePoint(f"repeated point {pt}")
            seen.add(key)
            self.coords.append(key)
        self._ideal = None

    def __len__(self):
        return len(self.coords)

    @classmethod
    def general(cls, ring, count, rng):
        """Seeded uniform points (distinct); generic for large p."""
        pts = []
        seen = set()
        while len(pts) < count:
            pt = tuple(int(rng.integers(0, ring.p)) for _ in range(ring.nvars))
            if all(a == 0 for a in pt):
                continue
            key = _normalize_point(pt, ring.p)
            if key in seen:
                continue
            seen.add(key)
            pts.append(key)
        return cls(ring, pts)

    def ideal(self):
        if self._ideal is None:
            parts = [_point_ideal(self.ring, pt) for pt in self.coords]
            acc = parts[0]
            for q in parts[1:]:
                acc = acc.intersect(q)
            self._ideal = acc
        return self._ideal

    # -- Hilbert functions by evaluation rank --------------------------
    def _eval_matrix(self, t, subset=None):
        from .resolution import _degree_monomials

        idx = subset if subset is not None else range(len(self.coords))
        monos = _degree_monomials(self.ring.nvars, t)
        p = self.ring.p
        rows = []
        for i in idx:
            pt = self.coords[i]
            row = [_eval_mono(pt, m, p) for m in monos]
            rows.append(row)
        return np.array(rows, dtype=_I64) % p

    def hf(self, t, subset=None):
        """Hilbert function of the subset's coordinate ring at degree t."""
        if t < 0:
            return 0
        m = self._eval_matrix(t, subset)
        span = _Span(m.shape[1], self.ring.p)
        for row in m:
            span.add(row)
        return span.rank

    def h_vector(self):
        out = []
        t = 0
        prev = 0
        while True:
            cur = self.hf(t)
            out.append(cur - prev)
            if cur == len(self.coords):
                break
            prev = cur
            t += 1
        return tuple(out)

    def socle_degree(self):
        return len(self.h_vector()) - 1


def _normalize_point(pt, p):
    for a in pt:
        if a:
            inv = pow(a, p - 2, p)
            return tuple((x * inv) % p for x in pt)
    raise DuplicatePoint("zero point")


def _eval_mono(pt, exps, p):
    v = 1
    for a, e in zip(pt, exps):
        if e:
            v = (v * pow(a, e, p)) % p
    return v


def _point_ideal(ring, pt):
    k = next(i for i, a in enumerate(pt) if a)
    gens = []
    for i in range(ring.nvars):
        if i == k:
            continue
        gens.append(ring.var(i) * pt[k] - ring.var(k) * pt[i])
    return Ideal(ring, gens)


def points_ideal(points):
    return points.ideal()


def cayley_bacharach_check(points, rng=None, samples=200, exhaustive_limit=5000):
    """CB by exhaustive size-(|Z|-1) checks; UPP sampled (or exhaustive when
    the subset count is small).  Returns a dict report."""
    Z = points
    N = len(Z)
    s = Z.socle_degree()
    hs1 = Z.hf(s - 1)
    cb = all(Z.hf(s - 1, [i for i in range(N) if i != drop]) == hs1 for drop in range(N))
    hf_full = {t: Z.hf(t) for t in range(s + 2)}
    upp = True
    upp_exhaustive = True
    rng = rng or np.random.default_rng(0)
    for m in range(1, N):
        combos_count = _ncr(N, m)
        if combos_count <= exhaustive_limit:
            pool = combinations(range(N), m)
        else:
            upp_exhaustive = False
            pool = (
                tuple(sorted(rng.choice(N, size=m, replace=False))) for _ in range(samples)
            )
        for sub in pool:
            for t in range(s + 2):
                if Z.hf(t, list(sub)) != min(hf_full[t], m):
                    upp = False
                    break
            if not upp:
                break
        if not upp:
            break
    return {"cb": cb, "upp": upp, "upp_exhaustive": upp_exhaustive, "socle_degree": s}


def _ncr(n, r):
    import math

    return math.comb(n, r)


def dgo_verify(points, cb_report=None):
    """Arithmetically Gorenstein test for reduced points: symmetric h-vector
    plus the Cayley-Bacharach property."""
    hv = points.h_vector()
    rep = cb_report or cayley_bacharach_check(points)
    return tuple(hv) == tuple(reversed(hv)) and rep["cb"]


def wlp_check(I, rng=None, tries=3):
    """Weak Lefschetz property of an Artinian quotient, for seeded random
    linear forms; True when some seed gives maximal rank in every degree."""
    ring = I.ring
    if I.ring.nvars - I.codimension() != 0:
        raise NotArtinian("WLP needs an Artinian quotient")
    data = I.hilbert()
    hv = [data.hf(j) for j in range(0, len(data.h_vector) + 1)]
    from .resolution import _degree_monomials

    lt = I.lt_exps()
    std = {}
    for t in range(len(hv) + 1):
        std[t] = [
            m
            for m in _degree_monomials(ring.nvars, t)
            if not any(all(g[i] <= m[i] for i in range(ring.nvars)) for g in lt)
        ]
    rng = rng or np.random.default_rng(0)
    for _ in range(tries):
        L = ring.poly(
            {
                tuple(1 if i == k else 0 for i in range(ring.nvars)): int(
                    rng.integers(1, ring.p)
                )
                for k in range(ring.nvars)
            }
        )
        ok = True
        for t in range(len(hv) - 1):
            h0, h1 = hv[t], hv[t + 1] if t + 1 < len(hv) else 0
            if h0 == 0 or h1 == 0:
                continue
            index = {m: i for i, m in enumerate(std[t + 1])}
            span = _Span(len(std[t + 1]), ring.p)
            rank = 0
            for m in std[t]:
                prod = normal_form(L.mono_mul(m), I.gb)
                vec = np.zeros(len(std[t + 1]), dtype=_I64)
                for _, e, cf in prod.terms():
                    vec[index[e]] = cf
                if span.add(vec):
                    rank += 1
            if rank != min(h0, h1):
                ok = False
                break
        if ok:
            return True
    return False
