"""Exact arithmetic foundation: GF(p), monomial orders, graded polynomials
and elements of graded free modules.

Everything is immutable after construction.  Term data lives in numpy int64
arrays (see _kernels); monomial-order keys are additive, so multiplying by a
monomial is a key shift that preserves sortedness.
"""

import numpy as np

from . import _kernels as K
from .errors import DivisionByZero, PrimeCheckFailed, RingMismatch, ZeroPolynomial

_I64 = np.int64


def is_prime(p):
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


class PrimeField:
    """GF(p) for a machine-word prime p; elements are ints in [0, p)."""

    __slots__ = ("p",)

    def __init__(self, p):
        if not is_prime(p):
            raise PrimeCheckFailed(f"{p} is not prime")
        self.p = int(p)

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        a %= self.p
        if a == 0:
            raise DivisionByZero("inverse of 0 in GF(p)")
        return pow(a, self.p - 2, self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __repr__(self):
        return f"GF({self.p})"


class Order:
    """Monomial order encoded as an additive integer key.

    Rows of the key matrix compare lexicographically; larger key = larger
    monomial.  kinds: 'degrevlex', 'lex', 'block(k)' (first k variables form
    an elimination block, degrevlex inside each block).
    """

    __slots__ = ("kind", "block")

    def __init__(self, kind, block=0):
        if kind not in ("degrevlex", "lex", "block"):
            raise ValueError(f"unknown order {kind!r}")
        self.kind = kind
        self.block = int(block)

    def keylen(self, nv):
        if self.kind == "degrevlex":
            return nv + 1
        if self.kind == "lex":
            return nv
        return nv + 2

    def keys(self, exps):
        """exps: int64[m, nv] -> int64[m, keylen]."""
        exps = np.asarray(exps, dtype=_I64)
        if exps.ndim == 1:
            exps = exps[None, :]
        if self.kind == "degrevlex":
            return np.concatenate(
                [exps.sum(axis=1, keepdims=True), -exps[:, ::-1]], axis=1
            )
        if self.kind == "lex":
            return exps.copy()
        k = self.block
        return np.concatenate(
            [
                exps[:, :k].sum(axis=1, keepdims=True),
                -exps[:, k - 1 :: -1] if k else exps[:, :0],
                exps[:, k:].sum(axis=1, keepdims=True),
                -exps[:, : k - 1 : -1],
            ],
            axis=1,
        )

    def __eq__(self, other):
        return (
            isinstance(other, Order)
            and other.kind == self.kind
            and other.block == self.block
        )

    def __repr__(self):
        if self.kind == "block":
            return f"block({self.block})"
        return self.kind


DEGREVLEX = Order("degrevlex")
LEX = Order("lex")


class Ring:
    """K[x_0..x_{nvars-1}] over GF(p) with a fixed monomial order."""

    __slots__ = ("nvars", "field", "order", "names", "_mod")

    def __init__(self, nvars, p=32003, order=None, names=None):
        self.nvars = int(nvars)
        self.field = PrimeField(p)
        self.order = order or DEGREVLEX
        self.names = tuple(names) if names else tuple(f"x{i}" for i in range(nvars))
        if len(self.names) != self.nvars:
            raise ValueError("wrong number of variable names")
        self._mod = None

    @property
    def p(self):
        return self.field.p

    @property
    def as_module(self):
        if self._mod is None:
            self._mod = FreeModule(self, (0,), kind="ring")
        return self._mod

    def __eq__(self, other):
        return (
            isinstance(other, Ring)
            and other.nvars == self.nvars
            and other.field == self.field
            and other.order == self.order
        )

    def __hash__(self):
        return hash((self.nvars, self.p, self.order.kind, self.order.block))

    def __repr__(self):
        return f"GF({self.p})[{','.join(self.names)}]/{self.order!r}"

    # -- constructors -------------------------------------------------
    def poly(self, terms):
        """terms: {exps tuple: coeff} or iterable of (exps, coeff)."""
        if isinstance(terms, dict):
            terms = terms.items()
        rows = [((0,) + tuple(e), c) for e, c in terms]
        return Polynomial(self.as_module, _tuples_to_arrays(self.as_module, rows))

    def zero(self):
        return self.poly({})

    def one(self):
        return self.constant(1)

    def constant(self, c):
        return self.poly({(0,) * self.nvars: c})

    def var(self, i):
        e = [0] * self.nvars
        e[i] = 1
        return self.poly({tuple(e): 1})

    def monomial(self, exps, c=1):
        return self.poly({tuple(exps): c})

    def gens(self):
        return [self.var(i) for i in range(self.nvars)]

    def extended(self, k=1, prefix="t"):
        """New ring with k auxiliary variables in front and a block order
        eliminating them; used by intersection/elimination."""
        names = tuple(f"{prefix}{i}" for i in range(k)) + self.names
        return Ring(self.nvars + k, self.p, Order("block", k), names)

    def embed(self, f, k=1):
        """Map a polynomial of this ring into self.extended(k)."""
        ext = self.extended(k)
        return ext.poly({(0,) * k + e: c for _, e, c in f.terms()})

    def random_poly(self, degree, rng, homogeneous=True):
        """Dense-ish random homogeneous polynomial of the given degree."""
        from itertools import combinations_with_replacement

        monos = [
            _exp_from_combo(self.nvars, combo)
            for combo in combinations_with_replacement(range(self.nvars), degree)
        ]
        terms = {}
        for m in monos:
            c = int(rng.integers(0, self.p))
            if c:
                terms[m] = c
        return self.poly(terms)


def _exp_from_combo(nv, combo):
    e = [0] * nv
    for i in combo:
        e[i] += 1
    return tuple(e)


class FreeModule:
    """Graded free module over a Ring: direct sum of R(-a_i).

    Carries the *module order* as per-position additive key offsets; the ring
    key part embeds into columns `ring_cols` of the full key.  kinds:
      ring      rank 1, plain ring order
      pot       position-over-term (e_0 > e_1 > ...), ring order inside
      schreyer  offsets given by leading terms of a previous-stage basis
    """

    __slots__ = ("ring", "twists", "kind", "keylen", "ring_cols", "offsets")

    def __init__(self, ring, twists, kind="pot", offsets=None, ring_cols=None):
        self.ring = ring
        self.twists = tuple(int(t) for t in twists)
        self.kind = kind
        rk = ring.order.keylen(ring.nvars)
        if kind == "ring":
            if len(self.twists) != 1:
                raise ValueError("ring module has rank 1")
            self.keylen = rk
            self.ring_cols = slice(0, rk)
            self.offsets = np.zeros((1, rk), dtype=_I64)
        elif kind == "pot":
            self.keylen = rk + 1
            self.ring_cols = slice(1, rk + 1)
            off = np.zeros((len(self.twists), rk + 1), dtype=_I64)
            off[:, 0] = -np.arange(len(self.twists))
            self.offsets = off
        elif kind == "schreyer":
            self.keylen = offsets.shape[1]
            self.ring_cols = ring_cols
            self.offsets = np.asarray(offsets, dtype=_I64)
        else:
            raise ValueError(kind)

    @property
    def rank(self):
        return len(self.twists)

    def key_rows(self, exps):
        """exps int64[m, 1+nv] (column 0 = position) -> key matrix."""
        exps = np.asarray(exps, dtype=_I64)
        keys = np.zeros((len(exps), self.keylen), dtype=_I64)
        keys[:, self.ring_cols] = self.ring.order.keys(exps[:, 1:])
        keys += self.offsets[exps[:, 0]]
        return keys

    def schreyer_above(self, leads):
        """Schreyer module on generators with the given leading terms.

        leads: list of (pos, exps tuple) in *this* module.  Returns the free
        module of the syzygy stage, with twists = degrees of the leads.
        """
        rows = np.array(
            [(pos,) + tuple(e) for pos, e in leads], dtype=_I64
        ).reshape(len(leads), 1 + self.ring.nvars)
        base = self.key_rows(rows)
        off = np.concatenate(
            [base, -np.arange(len(leads), dtype=_I64)[:, None]], axis=1
        )
        tw = tuple(
            int(rows[i, 1:].sum()) + self.twists[rows[i, 0]] for i in range(len(leads))
        )
        rc = slice(self.ring_cols.start, self.ring_cols.stop)
        return FreeModule(self.ring, tw, kind="schreyer", offsets=off, ring_cols=rc)

    def element(self, terms):
        """terms: {(pos, exps tuple): coeff} or iterable of ((pos,)+exps, c)."""
        if isinstance(terms, dict):
            rows = [((pos,) + tuple(e), c) for (pos, e), c in terms.items()]
        else:
            rows = [(tuple(t), c) for t, c in terms]
        return Element(self, _tuples_to_arrays(self, rows))

    def zero(self):
        return self.element({})

    def gen(self, i):
        return self.element({(i, (0,) * self.ring.nvars): 1})

    def inject(self, f, pos):
        """Place ring polynomial f at position pos of this module."""
        exps = f.exps.copy()
        exps[:, 0] = pos
        keys = self.key_rows(exps)
        order = np.lexsort(keys.T[::-1])[::-1]
        return Element(self, (keys[order], exps[order], f.coeffs[order].copy()))

    def component(self, v, pos):
        """Ring polynomial sitting at position pos of v."""
        mask = v.exps[:, 0] == pos
        exps = v.exps[mask].copy()
        exps[:, 0] = 0
        rm = self.ring.as_module
        keys = rm.key_rows(exps)
        order = np.lexsort(keys.T[::-1])[::-1]
        return Polynomial(rm, (keys[order], exps[order], v.coeffs[mask][order].copy()))

    def dual_twists(self):
        return tuple(-t for t in self.twists)

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, FreeModule)
            and other.ring == self.ring
            and other.twists == self.twists
            and other.kind == self.kind
            and other.keylen == self.keylen
            and np.array_equal(other.offsets, self.offsets)
        )

    def __repr__(self):
        return f"Free({self.ring!r}, twists={self.twists}, {self.kind})"


def _tuples_to_arrays(module, rows):
    nv = module.ring.nvars
    if not rows:
        return K.empty_terms(1 + nv, module.keylen)
    exps = np.array([t for t, _ in rows], dtype=_I64).reshape(len(rows), 1 + nv)
    coeffs = np.array([c for _, c in rows], dtype=_I64)
    keys = module.key_rows(exps)
    return K.canonicalize(keys, exps, coeffs, module.ring.p)


class Element:
    """Element of a graded free module (immutable term arrays)."""

    __slots__ = ("module", "keys", "exps", "coeffs")

    def __init__(self, module, arrays):
        self.module = module
        self.keys, self.exps, self.coeffs = arrays

    # -- basic queries -------------------------------------------------
    @property
    def ring(self):
        return self.module.ring

    @property
    def is_zero(self):
        return len(self.coeffs) == 0

    def __len__(self):
        return len(self.coeffs)

    def terms(self):
        for i in range(len(self.coeffs)):
            yield (
                int(self.exps[i, 0]),
                tuple(int(x) for x in self.exps[i, 1:]),
                int(self.coeffs[i]),
            )

    def to_dict(self):
        return {(pos, e): c for pos, e, c in self.terms()}

    def lt(self):
        if self.is_zero:
            raise ZeroPolynomial("leading term of 0")
        return (
            int(self.exps[0, 0]),
            tuple(int(x) for x in self.exps[0, 1:]),
            int(self.coeffs[0]),
        )

    def lm(self):
        pos, e, _ = self.lt()
        return pos, e

    def lc(self):
        return self.lt()[2]

    def term_degree(self, i):
        return int(self.exps[i, 1:].sum()) + self.module.twists[int(self.exps[i, 0])]

    @property
    def degree(self):
        """Degree of the leading term (= total degree when homogeneous)."""
        if self.is_zero:
            raise ZeroPolynomial("degree of 0")
        return self.term_degree(0)

    @property
    def is_homogeneous(self):
        if self.is_zero:
            return True
        degs = self.exps[:, 1:].sum(axis=1) + np.array(self.module.twists, dtype=_I64)[
            self.exps[:, 0]
        ]
        return bool((degs == degs[0]).all())

    # -- arithmetic ----------------------------------------------------
    def _chk(self, other):
        if self.module != other.module:
            raise RingMismatch("elements of different modules/rings")

    def __add__(self, other):
        self._chk(other)
        return self._wrap(
            K.canonicalize(
                np.concatenate([self.keys, other.keys]),
                np.concatenate([self.exps, other.exps]),
                np.concatenate([self.coeffs, other.coeffs]),
                self.ring.p,
            )
        )

    def __sub__(self, other):
        self._chk(other)
        return self._wrap(
            K.merge_sub(
                self.keys, self.exps, self.coeffs, other.keys, other.exps, other.coeffs,
                self.ring.p,
            )
        )

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        c = int(c) % self.ring.p
        if c == 0:
            return self._wrap(K.empty_terms(self.exps.shape[1], self.keys.shape[1]))
        return self._wrap((self.keys.copy(), self.exps.copy(), (self.coeffs * c) % self.ring.p))

    def monic(self):
        if self.is_zero:
            return self
        return self.scale(self.ring.field.inv(self.lc()))

    def mono_mul(self, exps, c=1):
        """Multiply by c * monomial; keys shift additively, no re-sort."""
        c = int(c) % self.ring.p
        if c == 0 or self.is_zero:
            return self._wrap(K.empty_terms(self.exps.shape[1], self.keys.shape[1]))
        e = np.zeros((1, self.exps.shape[1]), dtype=_I64)
        e[0, 1:] = exps
        dk = np.zeros((1, self.module.keylen), dtype=_I64)
        dk[:, self.module.ring_cols] = self.ring.order.keys(e[:, 1:])
        return self._wrap(
            (self.keys + dk, self.exps + e, (self.coeffs * c) % self.ring.p)
        )

    def poly_mul(self, f):
        """Multiply by a ring polynomial."""
        if f.ring != self.ring:
            raise RingMismatch("polynomial from another ring")
        if f.is_zero or self.is_zero:
            return self._wrap(K.empty_terms(self.exps.shape[1], self.keys.shape[1]))
        m, n = len(self.coeffs), len(f.coeffs)
        de = f.exps[:, 1:]
        exps = np.repeat(self.exps, n, axis=0)
        exps[:, 1:] += np.tile(de, (m, 1))
        coeffs = (np.repeat(self.coeffs, n) * np.tile(f.coeffs, m)) % self.ring.p
        keys = self.module.key_rows(exps)
        return self._wrap(K.canonicalize(keys, exps, coeffs, self.ring.p))

    def _wrap(self, arrays):
        cls = type(self)
        return cls(self.module, arrays)

    def __eq__(self, other):
        return (
            isinstance(other, Element)
            and self.module == other.module
            and np.array_equal(self.exps, other.exps)
            and np.array_equal(self.coeffs, other.coeffs)
        )

    def __repr__(self):
        if self.is_zero:
            return "0"
        bits = []
        for pos, e, c in self.terms():
            s = _term_str(self.ring, e, c)
            bits.append(f"{s}*e{pos}" if self.module.kind != "ring" else s)
        return "+".join(bits)


class Polynomial(Element):
    """Ring element: module is ring.as_module, position column is 0."""

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            return self.poly_mul(other)
        if isinstance(other, int):
            return self.scale(other)
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, k):
        r = self.ring.one()
        b = self
        k = int(k)
        while k > 0:
            if k & 1:
                r = r * b
            b = b * b
            k >>= 1
        return r

    @property
    def is_monomial(self):
        return len(self.coeffs) == 1

    def exps_tuple(self):
        if not self.is_monomial:
            raise ValueError("not a monomial")
        return tuple(int(x) for x in self.exps[0, 1:])

    def exact_div(self, g):
        """self / g, raising if the division is not exact."""
        if g.is_zero:
            raise DivisionByZero("division by zero polynomial")
        p = self.ring.p
        _, ge, gc = g.exps[0, 1:], g.exps[0], g.coeffs[0]
        cur = self
        out = {}
        ginv = self.ring.field.inv(int(g.coeffs[0]))
        while not cur.is_zero:
            e = cur.exps[0]
            if (g.exps[0, 1:] > e[1:]).any():
                raise DivisionByZero("inexact polynomial division")
            u = tuple(int(x) for x in (e[1:] - g.exps[0, 1:]))
            c = (int(cur.coeffs[0]) * ginv) % p
            out[u] = c
            cur = cur - g.mono_mul(u, c)
        return self.ring.poly(out)

    def __repr__(self):
        if self.is_zero:
            return "0"
        return "+".join(_term_str(self.ring, e, c) for _, e, c in self.terms())


def _term_str(ring, e, c):
    parts = []
    for i, a in enumerate(e):
        if a == 1:
            parts.append(ring.names[i])
        elif a > 1:
            parts.append(f"{ring.names[i]}^{a}")
    if not parts:
        return str(c)
    body = "*".join(parts)
    return body if c == 1 else f"{c}*{body}"
