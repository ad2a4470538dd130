"""Reference implementations used to check the engine.

Nothing here calls the engine's multiplication, ordering, candidate search or
reduction code.  Elements are plain dicts ``{(alpha, beta): Scalar}`` and every
computation goes through words in the generators.  Only the scalar field and
the raw presentation data (relations and sigma factors) are shared.
"""

from __future__ import annotations

import itertools
from functools import lru_cache


class Oracle:
    def __init__(self, algebra):
        p = algebra.presentation
        self.algebra = algebra
        self.n = len(p.generators)
        self.field = p.field
        self.one = p.field.one
        self.nr = p.ring.nvars
        self.runit = (0,) * self.nr
        self.rels = {}
        for (j, i), (d, lower) in p.relations.items():
            if j > i:
                self.rels[(j, i)] = (d, [(self._word(a), b, c) for (a, b), c in lower.items()])
        sig = p.sigma
        self.factors = sig.factors if sig is not None else [[self.one] * self.nr for _ in range(self.n)]
        self.kind = p.order.kind
        self.prec = list(p.order.precedence)
        self._nf = lru_cache(maxsize=None)(self._nf_word)

    # -- helpers -------------------------------------------------------------
    def _word(self, alpha):
        return tuple(i for i, e in enumerate(alpha) for _ in range(e))

    def _exp(self, word):
        return tuple(word.count(i) for i in range(self.n))

    def key(self, alpha):
        lex = [alpha[p] for p in self.prec]
        deg = sum(alpha)
        if self.kind == "lex":
            return tuple(lex)
        if self.kind == "deglex":
            return (deg, *lex)
        return (deg, *[-alpha[p] for p in reversed(self.prec)])

    def twist(self, word, beta):
        """c with (word) * y^beta == c * y^beta * (word)."""
        c = self.one
        for letter in word:
            for l, e in enumerate(beta):
                if e:
                    c = c * self.factors[letter][l] ** e
        return c

    @staticmethod
    def _acc(out, k, v):
        w = out.get(k)
        w = v if w is None else w + v
        if w:
            out[k] = w
        else:
            out.pop(k, None)

    # -- normal form of words (rightmost inversion first) ---------------------
    def _nf_word(self, word):
        pos = next((p for p in range(len(word) - 2, -1, -1) if word[p] > word[p + 1]), None)
        if pos is None:
            return {(self._exp(word), self.runit): self.one}
        j, i = word[pos], word[pos + 1]
        d, lower = self.rels.get((j, i), (self.one, []))
        prefix, suffix = word[:pos], word[pos + 2:]
        out = {}
        if d:
            for k, c in self._nf(prefix + (i, j) + suffix).items():
                self._acc(out, k, d * c)
        for lw, lb, lc in lower:
            tw = lc * self.twist(prefix, lb)
            for (a, b), c in self._nf(prefix + lw + suffix).items():
                self._acc(out, (a, tuple(x + y for x, y in zip(lb, b))), tw * c)
        return out

    # -- element level ---------------------------------------------------------
    def from_engine(self, f):
        return dict(f.items())

    def mul(self, f, g):
        out = {}
        for (a1, b1), c1 in f.items():
            w1 = self._word(a1)
            for (a2, b2), c2 in g.items():
                c = c1 * c2 * self.twist(w1, b2)
                for (a, b), c3 in self._nf(w1 + self._word(a2)).items():
                    beta = tuple(x + y + z for x, y, z in zip(b1, b2, b))
                    self._acc(out, (a, beta), c * c3)
        return out

    def add(self, f, g, k=None):
        """f + k*g."""
        out = dict(f)
        for key, c in g.items():
            self._acc(out, key, c if k is None else k * c)
        return out

    def prod(self, elems):
        out = {((0,) * self.n, self.runit): self.one}
        for e in elems:
            out = self.mul(out, e)
        return out

    def lm(self, f):
        return max((a for a, _ in f), key=self.key) if f else None

    def lc(self, f):
        m = self.lm(f)
        return {b: c for (a, b), c in f.items() if a == m}

    def ratio(self, r, s):
        if r.keys() != s.keys():
            return None
        b0 = next(iter(s))
        k = r[b0] / s[b0]
        return k if all(r[b] == k * s[b] for b in s) else None

    # -- F-monomials and brute-force reduction --------------------------------
    def sequences(self, F, max_deg):
        """Every index tuple whose lm-degree sum is <= max_deg (assumes lm additive in degree)."""
        degs = [sum(self.lm(f)) for f in F]
        out = [()]
        frontier = [((), 0)]
        while frontier:
            nxt = []
            for seq, d in frontier:
                for i, di in enumerate(degs):
                    if d + di <= max_deg:
                        s = seq + (i,)
                        out.append(s)
                        nxt.append((s, d + di))
            frontier = nxt
        return out

    def snf_all(self, s, F, max_deg=None):
        """Set of remainders over every choice sequence, as frozensets of items."""
        F = [dict(f) for f in F]
        if max_deg is None:
            max_deg = sum(self.lm(s)) if s else 0
        values = {seq: self.prod(F[i] for i in seq) for seq in self.sequences(F, max_deg)}

        def rec(p):
            if not p:
                return {frozenset()}
            m, lc = self.lm(p), self.lc(p)
            kids = []
            for seq, v in values.items():
                if v and self.lm(v) == m:
                    k = self.ratio(lc, self.lc(v))
                    if k is not None:
                        kids.append(self.add(p, v, -k))
            if not kids:
                return {frozenset(p.items())}
            out = set()
            for q in kids:
                out |= rec(q)
            return out

        return rec(dict(s))


def as_set(polys):
    return {frozenset(p.items()) for p in polys}


def random_exponents(rng, n, max_deg):
    while True:
        a = tuple(rng.randint(0, max_deg) for _ in range(n))
        if 0 < sum(a) <= max_deg:
            return a


def all_monomials(n, max_deg):
    return [a for a in itertools.product(range(max_deg + 1), repeat=n) if sum(a) <= max_deg]
