"""Buchberger engine for ideals and submodules of graded free modules.

Normal strategy (minimal lcm degree first), Buchberger's product criterion
(ring case) and the chain criterion.  Output is the canonical reduced basis,
deterministic for a fixed input ideal regardless of generator order.

Syzygies come in two flavours:
  * syzygy_module(G)      Schreyer syzygies of a Groebner basis,
  * syzygies_of(gens)     syzygies of an arbitrary generating set, via a
                          Groebner basis of {(g_i, e_i)} in F + R^m with the
                          F-part dominant.
"""

import heapq
from collections import defaultdict

import numpy as np

from . import _kernels as K
from .errors import RingMismatch
from .ring import FreeModule

_I64 = np.int64


class GroebnerBasis:
    """Container: elements share one module; optionally reduced/canonical."""

    __slots__ = ("module", "elements", "reduced", "_cat")

    def __init__(self, module, elements, reduced):
        self.module = module
        self.elements = tuple(elements)
        self.reduced = reduced
        self._cat = None

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, i):
        return self.elements[i]

    def __eq__(self, other):
        return (
            isinstance(other, GroebnerBasis)
            and self.module == other.module
            and len(self.elements) == len(other.elements)
            and all(a == b for a, b in zip(self.elements, other.elements))
        )

    def concat(self):
        if self._cat is None:
            self._cat = _concat(self.module, self.elements)
        return self._cat

    def __repr__(self):
        return f"GB<{len(self.elements)} elements>"


def _concat(module, elements):
    nv = module.ring.nvars
    if not elements:
        return (
            np.empty((0, module.keylen), dtype=_I64),
            np.empty((0, 1 + nv), dtype=_I64),
            np.empty((0,), dtype=_I64),
            np.zeros(1, dtype=_I64),
        )
    ks = np.concatenate([g.keys for g in elements])
    es = np.concatenate([g.exps for g in elements])
    cs = np.concatenate([g.coeffs for g in elements])
    off = np.zeros(len(elements) + 1, dtype=_I64)
    np.cumsum([len(g) for g in elements], out=off[1:])
    return ks, es, cs, off


def normal_form(f, G):
    """Full normal form of f against a GroebnerBasis (or element list)."""
    if isinstance(G, GroebnerBasis):
        if f.module != G.module:
            raise RingMismatch("normal form in a different module")
        bk, be, bc, boff = G.concat()
    else:
        G = [g for g in G if not g.is_zero]
        if not G:
            return f
        for g in G:
            if f.module is not g.module and f.module != g.module:
                raise RingMismatch("normal form in a different module")
        bk, be, bc, boff = _concat(f.module, G)
    return f._wrap(
        K.normal_form_arrays(f.keys, f.exps, f.coeffs, bk, be, bc, boff, f.ring.p)
    )


def _lcm_exps(ea, eb):
    return np.maximum(ea, eb)


def _pair_key(module, pos, lcm):
    row = np.empty((1, 1 + module.ring.nvars), dtype=_I64)
    row[0, 0] = pos
    row[0, 1:] = lcm
    key = module.key_rows(row)[0]
    return (int(lcm.sum()), tuple(int(x) for x in key))


def buchberger(gens, reduced=True):
    """Reduced Groebner basis of the submodule generated by gens."""
    gens = list(gens)
    if not gens:
        raise ValueError("no generators")
    module = gens[0].module
    for g in gens:
        if g.module != module:
            raise RingMismatch("generators from different modules")
    basis = []
    for g in sorted(
        (g.monic() for g in gens if not g.is_zero),
        key=lambda h: tuple(int(x) for x in h.keys[0]),
    ):
        if not any(h == g for h in basis):
            basis.append(g)
    if not basis:
        return GroebnerBasis(module, [], True)

    is_ring = module.kind == "ring"
    pending = set()
    heap = []

    def push_pair(i, j):
        gi, gj = basis[i], basis[j]
        pi, ei = gi.exps[0, 0], gi.exps[0, 1:]
        pj, ej = gj.exps[0, 0], gj.exps[0, 1:]
        if pi != pj:
            return
        lcm = _lcm_exps(ei, ej)
        if is_ring and (np.minimum(ei, ej) == 0).all():
            return  # product criterion
        deg, key = _pair_key(module, int(pi), lcm)
        heapq.heappush(heap, (deg, key, i, j))
        pending.add((i, j))

    for j in range(len(basis)):
        for i in range(j):
            push_pair(i, j)

    while heap:
        _, _, i, j = heapq.heappop(heap)
        if (i, j) not in pending:
            continue
        pending.discard((i, j))
        gi, gj = basis[i], basis[j]
        lcm = _lcm_exps(gi.exps[0, 1:], gj.exps[0, 1:])
        # chain criterion
        skip = False
        for k, gk in enumerate(basis):
            if k in (i, j):
                continue
            if gk.exps[0, 0] != gi.exps[0, 0]:
                continue
            if (gk.exps[0, 1:] <= lcm).all():
                pik = (min(i, k), max(i, k))
                pjk = (min(j, k), max(j, k))
                if pik not in pending and pjk not in pending:
                    skip = True
                    break
        if skip:
            continue
        s = gi.mono_mul(lcm - gi.exps[0, 1:]) - gj.mono_mul(lcm - gj.exps[0, 1:])
        h = normal_form(s, basis)
        if not h.is_zero:
            basis.append(h.monic())
            for t in range(len(basis) - 1):
                push_pair(t, len(basis) - 1)

    if reduced:
        basis = interreduce(basis)
    return GroebnerBasis(module, basis, reduced)


def interreduce(elems):
    """Canonical reduced basis: minimal monic generators, tails reduced."""
    elems = [g.monic() for g in elems if not g.is_zero]
    # keep only elements with minimal leading terms
    keep = []
    for i, g in enumerate(elems):
        lt = g.exps[0]
        redundant = False
        for j, h in enumerate(elems):
            if i == j:
                continue
            hlt = h.exps[0]
            if hlt[0] == lt[0] and (hlt[1:] <= lt[1:]).all():
                if (hlt[1:] == lt[1:]).all() and j > i:
                    continue  # equal lt: keep the first
                redundant = True
                break
        if not redundant:
            keep.append(g)
    changed = True
    while changed:
        changed = False
        for i in range(len(keep)):
            others = keep[:i] + keep[i + 1 :]
            r = normal_form(keep[i], others) if others else keep[i]
            if not r == keep[i]:
                changed = True
                if r.is_zero:
                    keep.pop(i)
                else:
                    keep[i] = r.monic()
                break
    keep.sort(key=lambda g: tuple(int(x) for x in g.keys[0]), reverse=True)
    return keep


def reduce_tracked(f, basis):
    """Divide f by basis with quotient tracking.

    Returns (remainder, quotients) with f = sum quotients[i]*basis[i] + r.
    """
    ring = f.ring
    quots = defaultdict(dict)
    rem = {}
    cur = f
    lts = [(int(b.exps[0, 0]), b.exps[0, 1:], int(b.coeffs[0])) for b in basis]
    while not cur.is_zero:
        pos, e, c = int(cur.exps[0, 0]), cur.exps[0, 1:], int(cur.coeffs[0])
        hit = -1
        for j, (bp, be, _) in enumerate(lts):
            if bp == pos and (be <= e).all():
                hit = j
                break
        if hit < 0:
            rem[(pos, tuple(int(x) for x in e))] = c
            cur = cur._wrap((cur.keys[1:], cur.exps[1:], cur.coeffs[1:]))
            continue
        u = tuple(int(x) for x in (e - lts[hit][1]))
        q = (c * ring.field.inv(lts[hit][2])) % ring.p
        quots[hit][u] = (quots[hit].get(u, 0) + q) % ring.p
        cur = cur - basis[hit].mono_mul(u, q)
    qpolys = {i: ring.poly(d) for i, d in quots.items()}
    return f.module.element(rem), qpolys


def syzygy_module(G):
    """Schreyer syzygies of a Groebner basis.

    Returns a list of elements of the Schreyer free module on G; they
    generate the kernel of (a_1..a_t) -> sum a_i G_i and form a Groebner
    basis for the Schreyer order.
    """
    if isinstance(G, GroebnerBasis):
        elems = list(G.elements)
        module = G.module
    else:
        elems = list(G)
        module = elems[0].module
    elems = [g.monic() for g in elems]
    syzmod = module.schreyer_above([g.lm() for g in elems])
    out = []
    for j in range(len(elems)):
        for i in range(j):
            gi, gj = elems[i], elems[j]
            if gi.exps[0, 0] != gj.exps[0, 0]:
                continue
            lcm = _lcm_exps(gi.exps[0, 1:], gj.exps[0, 1:])
            ui = lcm - gi.exps[0, 1:]
            uj = lcm - gj.exps[0, 1:]
            s = gi.mono_mul(ui) - gj.mono_mul(uj)
            r, quots = reduce_tracked(s, elems)
            if not r.is_zero:
                raise ValueError("input is not a Groebner basis")
            rows = {(i, tuple(int(x) for x in ui)): 1, (j, tuple(int(x) for x in uj)): -1}
            for k, q in quots.items():
                for _, e, c in q.terms():
                    key = (k, e)
                    rows[key] = (rows.get(key, 0) - c) % module.ring.p
            v = syzmod.element(rows)
            if not v.is_zero:
                out.append(v)
    return out


def syzygies_of(gens):
    """Generators of the syzygy module of an arbitrary generating tuple."""
    gens = list(gens)
    module = gens[0].module
    ring = module.ring
    r = module.rank
    m = len(gens)
    big = FreeModule(ring, module.twists + tuple(g.degree for g in gens), kind="pot")
    wits = []
    for i, g in enumerate(gens):
        rows = {(int(pos), e): c for pos, e, c in g.terms()}
        rows[(r + i, (0,) * ring.nvars)] = 1
        wits.append(big.element(rows))
    gb = buchberger(wits)
    target = FreeModule(ring, tuple(g.degree for g in gens), kind="pot")
    out = []
    for v in gb:
        if int(v.exps[0, 0]) >= r:  # leading term in the tag part => pure syzygy
            rows = {}
            for pos, e, c in v.terms():
                if pos < r:
                    raise AssertionError("mixed element escaped elimination")
                rows[(pos - r, e)] = c
            out.append(target.element(rows))
    return out


def lift_coordinates(gens, targets):
    """Express each target as a combination of the generators.

    gens, targets: elements of one free module, targets in <gens>.
    Returns coordinate vectors as elements of the rank-len(gens) free
    module with twists deg(gens).  Raises if a target is not a member.
    """
    module = gens[0].module
    ring = module.ring
    r = module.rank
    big = FreeModule(ring, module.twists + tuple(g.degree for g in gens), kind="pot")
    wits = []
    for i, g in enumerate(gens):
        rows = {(int(pos), e): c for pos, e, c in g.terms()}
        rows[(r + i, (0,) * ring.nvars)] = 1
        wits.append(big.element(rows))
    gb = buchberger(wits)
    coord = FreeModule(ring, tuple(g.degree for g in gens), kind="pot")
    out = []
    for w in targets:
        rows = {(int(pos), e): c for pos, e, c in w.terms()}
        lifted = normal_form(big.element(rows), gb)
        if any(int(pos) < r for pos, _, _ in lifted.terms()):
            raise ValueError("target is not in the span of the generators")
        out.append(
            coord.element(
                {(pos - r, e): (-c) % ring.p for pos, e, c in lifted.terms()}
            )
        )
    return out


def module_of(polys, ring=None):
    """View ring polynomials as elements of a rank-1 POT module (degree 0)."""
    ring = ring or polys[0].ring
    mod = FreeModule(ring, (0,), kind="pot")
    return [mod.inject(f, 0) for f in polys]


def is_member(f, G):
    return normal_form(f, G).is_zero


def spolynomial(f, g):
    """S-polynomial of two nonzero elements with equal leading positions."""
    if f.exps[0, 0] != g.exps[0, 0]:
        raise ValueError("leading terms in different positions")
    lcm = _lcm_exps(f.exps[0, 1:], g.exps[0, 1:])
    fi = f.ring.field.inv(int(f.coeffs[0]))
    gi = f.ring.field.inv(int(g.coeffs[0]))
    return f.mono_mul(lcm - f.exps[0, 1:], fi) - g.mono_mul(lcm - g.exps[0, 1:], gi)
