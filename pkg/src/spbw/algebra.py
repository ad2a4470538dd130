"""Skew PBW extensions: presentations, monomial orders and standard-form arithmetic.

An algebra A = sigma(R)<x_1, ..., x_n> is given by scalars d_ij != 0 and lower
parts p_ji for every pair j > i, with

    x_j x_i = d_ij x_i x_j + p_ji,        x_i r = sigma_i(r) x_i   (r in R).

Elements are kept in standard form: a finite sum of terms c * y^beta * x^alpha with
c in K, y^beta a coefficient-ring monomial (written on the left) and x^alpha a
standard monomial x_1^a1 ... x_n^an.  Internally a polynomial is a dict keyed by
``(alpha, beta)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Iterable, Mapping, NamedTuple, Sequence

from .coefficients import CoefficientRing, RingElem, Scalar, ScalarField, SigmaAction
from .errors import DimensionMismatch, ValidationErrors

ExpVec = tuple  # tuple[int, ...], one entry per generator
TermKey = tuple  # (ExpVec, RMono)

ORDER_KINDS = ("lex", "deglex", "degrevlex")


def exp_add(a: ExpVec, b: ExpVec) -> ExpVec:
    return tuple(x + y for x, y in zip(a, b))


def exp_sub(a: ExpVec, b: ExpVec) -> ExpVec:
    return tuple(x - y for x, y in zip(a, b))


def exp_degree(a: ExpVec) -> int:
    return sum(a)


def unit_vector(n: int, i: int, k: int = 1) -> ExpVec:
    return tuple(k if j == i else 0 for j in range(n))


def exponents_of_degree(n: int, d: int) -> list[ExpVec]:
    out = []
    for combo in combinations_with_replacement(range(n), d):
        v = [0] * n
        for i in combo:
            v[i] += 1
        out.append(tuple(v))
    return out


def exponents_upto(n: int, d: int) -> list[ExpVec]:
    return [a for k in range(d + 1) for a in exponents_of_degree(n, k)]


class Cmp(IntEnum):
    LT = -1
    EQ = 0
    GT = 1


@dataclass(frozen=True)
class MonomialOrder:
    """Total order on exponent vectors.

    ``precedence`` lists generator indices from most to least significant, so
    deglex with precedence (1, 0) on generators (x, y) means y > x.
    """

    kind: str
    precedence: tuple[int, ...]

    def __post_init__(self):
        if self.kind not in ORDER_KINDS:
            raise ValueError(f"unknown order kind {self.kind!r}")
        if sorted(self.precedence) != list(range(len(self.precedence))):
            raise ValueError("precedence must be a permutation of generator indices")
        object.__setattr__(self, "_cache", {})

    @classmethod
    def from_names(cls, kind: str, precedence: Sequence[str], generators: Sequence[str]) -> "MonomialOrder":
        if sorted(precedence) != sorted(generators):
            raise ValueError("precedence must name every generator exactly once")
        return cls(kind, tuple(generators.index(name) for name in precedence))

    @property
    def nvars(self) -> int:
        return len(self.precedence)

    @property
    def degree_compatible(self) -> bool:
        return self.kind != "lex"

    def key(self, alpha: ExpVec):
        """Sort key; larger key means larger monomial."""
        cache = self._cache
        k = cache.get(alpha)
        if k is None:
            if len(alpha) != len(self.precedence):
                raise DimensionMismatch(f"expected {len(self.precedence)} exponents, got {len(alpha)}")
            if self.kind == "lex":
                k = tuple(alpha[p] for p in self.precedence)
            elif self.kind == "deglex":
                k = (sum(alpha),) + tuple(alpha[p] for p in self.precedence)
            else:
                k = (sum(alpha),) + tuple(-alpha[p] for p in reversed(self.precedence))
            cache[alpha] = k
        return k

    def compare(self, alpha: ExpVec, beta: ExpVec) -> Cmp:
        if len(alpha) != len(beta):
            raise DimensionMismatch("exponent vectors of different length")
        ka, kb = self.key(alpha), self.key(beta)
        return Cmp.GT if ka > kb else Cmp.LT if ka < kb else Cmp.EQ

    def describe(self, generators: Sequence[str]) -> str:
        return f"{self.kind}(" + ">".join(generators[p] for p in self.precedence) + ")"


def compare(order: MonomialOrder, alpha: ExpVec, beta: ExpVec) -> Cmp:
    return order.compare(alpha, beta)


# --------------------------------------------------------------------------
# presentation and validation


@dataclass
class Presentation:
    """Raw SPBW data before validation.

    ``relations`` maps ``(j, i)`` with j >= i to ``(d_ij, lower)`` where lower is a
    dict ``{(alpha, beta): scalar}``.  Pairs left out default to commuting.
    """

    name: str
    field: ScalarField
    ring: CoefficientRing
    generators: tuple[str, ...]
    relations: dict[tuple[int, int], tuple[Scalar, dict]]
    order: MonomialOrder
    sigma: SigmaAction | None = None
    strict: bool = False


@dataclass
class ZeroD:
    j: int
    i: int

    def __str__(self):
        return f"ZeroD: d for pair ({self.j},{self.i}) is zero"


@dataclass
class DiagonalNotOne:
    i: int
    d: object

    def __str__(self):
        return f"DiagonalNotOne: relation x{self.i}*x{self.i} must be trivial (d={self.d})"


@dataclass
class LowerPartNotSmaller:
    j: int
    i: int
    witness: ExpVec

    def __str__(self):
        return f"LowerPartNotSmaller: monomial {self.witness} in lower part of ({self.j},{self.i}) is not below x_i*x_j"


@dataclass
class StrictnessViolation:
    j: int
    i: int
    witness: ExpVec

    def __str__(self):
        return f"StrictnessViolation: lower part of ({self.j},{self.i}) has degree >1 monomial {self.witness}"


@dataclass
class AssociativityFailure:
    triple: tuple
    difference: object

    def __str__(self):
        return f"AssociativityFailure: {self.triple} differs by {self.difference}"


class Leading(NamedTuple):
    lm: ExpVec | None
    lc: RingElem
    lt: "StdPoly"


class Algebra:
    """A validated SPBW extension.  Use :func:`validate` to build one."""

    def __init__(self, p: Presentation):
        self.name = p.name
        self.field = p.field
        self.ring = p.ring
        self.generators = tuple(p.generators)
        self.n = len(self.generators)
        self.order = p.order
        self.strict = p.strict
        self.sigma = p.sigma or SigmaAction.identity(p.ring, self.n)
        self.presentation = p
        self._runit = p.ring.unit
        self._zero_exp = (0,) * self.n
        self._rels: dict[tuple[int, int], tuple[Scalar, dict]] = {}
        for (j, i), (d, lower) in p.relations.items():
            if j > i:
                self._rels[(j, i)] = (d, dict(lower))
        self._var_cache: dict = {}
        self._mono_cache: dict = {}
        self.zero = StdPoly(self, {})
        self.one = StdPoly(self, {(self._zero_exp, self._runit): self.field.one})

    def __repr__(self):
        return f"<Algebra {self.name} gens={list(self.generators)} order={self.order.describe(self.generators)}>"

    # -- constructors ------------------------------------------------------
    def gen(self, i: int | str) -> "StdPoly":
        if isinstance(i, str):
            i = self.generators.index(i)
        return StdPoly(self, {(unit_vector(self.n, i), self._runit): self.field.one})

    def gens(self) -> list["StdPoly"]:
        return [self.gen(i) for i in range(self.n)]

    def scalar(self, c) -> "StdPoly":
        c = self.field(c)
        return StdPoly(self, {(self._zero_exp, self._runit): c} if c else {})

    def coeff(self, r: RingElem) -> "StdPoly":
        return StdPoly(self, {(self._zero_exp, m): c for m, c in r.terms.items()})

    def coeff_var(self, name: str) -> "StdPoly":
        return self.coeff(self.ring.var(name))

    def monomial(self, alpha: ExpVec, coeff=1) -> "StdPoly":
        alpha = tuple(alpha)
        if len(alpha) != self.n:
            raise DimensionMismatch("exponent vector has wrong length")
        if isinstance(coeff, RingElem):
            return StdPoly(self, {(alpha, m): c for m, c in coeff.terms.items()})
        c = self.field(coeff)
        return StdPoly(self, {(alpha, self._runit): c} if c else {})

    def from_terms(self, terms: Mapping[ExpVec, RingElem | Scalar | int | Fraction]) -> "StdPoly":
        out: dict = {}
        for alpha, r in terms.items():
            if not isinstance(r, RingElem):
                r = self.ring(r)
            for m, c in r.terms.items():
                out[(tuple(alpha), m)] = c
        return StdPoly(self, out)

    # -- order helpers -----------------------------------------------------
    def compare(self, alpha: ExpVec, beta: ExpVec) -> Cmp:
        return self.order.compare(alpha, beta)

    def with_order(self, order: MonomialOrder) -> "Algebra":
        p = self.presentation
        return validate(
            Presentation(p.name, p.field, p.ring, p.generators, p.relations, order, p.sigma, p.strict)
        )

    def relation(self, j: int, i: int) -> tuple[Scalar, "StdPoly"]:
        d, lower = self._rels.get((j, i), (self.field.one, {}))
        return d, StdPoly(self, lower)

    # -- multiplication ----------------------------------------------------
    def _var_mul(self, j: int, b: ExpVec) -> dict:
        """x_j * x^b in standard form."""
        key = (j, b)
        hit = self._var_cache.get(key)
        if hit is not None:
            return hit
        i = next((k for k, e in enumerate(b) if e), None)
        if i is None or j <= i:
            out = {(exp_add(b, unit_vector(self.n, j)), self._runit): self.field.one}
        else:
            rest = exp_sub(b, unit_vector(self.n, i))
            d, lower = self._rels.get((j, i), (self.field.one, {}))
            out = {}
            twist = self.sigma.twist
            ei = unit_vector(self.n, i)
            # x_j x_i x^rest = d * x_i (x_j x^rest) + lower * x^rest
            for (gam, rg), c in self._var_mul(j, rest).items():
                c2 = d * c * twist(ei, rg)
                for (dl, rd), c3 in self._var_mul(i, gam).items():
                    _acc(out, (dl, _radd(rg, rd)), c2 * c3)
            for (dl, rl), c in lower.items():
                for (g2, r2), c3 in self._mono(dl, rest).items():
                    _acc(out, (g2, _radd(rl, r2)), c * c3)
            out = {k: v for k, v in out.items() if v}
        self._var_cache[key] = out
        return out

    def _mono(self, a: ExpVec, b: ExpVec) -> dict:
        """x^a * x^b in standard form."""
        key = (a, b)
        hit = self._mono_cache.get(key)
        if hit is not None:
            return hit
        j = next((k for k in range(self.n - 1, -1, -1) if a[k]), None)
        i = next((k for k, e in enumerate(b) if e), None)
        if j is None or i is None or j <= i:
            out = {(exp_add(a, b), self._runit): self.field.one}
        else:
            a2 = exp_sub(a, unit_vector(self.n, j))
            out = {}
            twist = self.sigma.twist
            for (gam, rg), c in self._var_mul(j, b).items():
                c2 = c * twist(a2, rg)
                for (dl, rd), c3 in self._mono(a2, gam).items():
                    _acc(out, (dl, _radd(rg, rd)), c2 * c3)
            out = {k: v for k, v in out.items() if v}
        self._mono_cache[key] = out
        return out

    def mul(self, f: "StdPoly", g: "StdPoly") -> "StdPoly":
        if not f._t or not g._t:
            return self.zero
        out: dict = {}
        twist = self.sigma.twist
        for (a, ra), c1 in f._t.items():
            for (b, rb), c2 in g._t.items():
                c = c1 * c2
                tw = twist(a, rb)
                if not tw.is_one():
                    c = c * tw
                rab = _radd(ra, rb)
                for (gam, rg), c3 in self._mono(a, b).items():
                    _acc(out, (gam, _radd(rab, rg)), c * c3)
        return StdPoly(self, out)

    def normalize(self, word: Iterable) -> "StdPoly":
        """Standard form of a word by rewriting adjacent inversions.

        Letters are generator indices or names, scalars, or ring elements.  This
        path is independent of :meth:`mul` and doubles as a cross-check for it.
        """
        items: list[tuple[Scalar, tuple, tuple]] = [(self.field.one, self._runit, ())]
        for letter in word:
            if isinstance(letter, str) and letter in self.generators:
                letter = self.generators.index(letter)
            if isinstance(letter, int) and not isinstance(letter, bool):
                items = [(c, beta, w + (letter,)) for c, beta, w in items]
                continue
            if isinstance(letter, str):
                if letter in self.ring.names:
                    letter = self.ring.var(letter)
                else:
                    letter = self.field.param(letter)
            r = letter if isinstance(letter, RingElem) else self.ring(letter)
            new = []
            for c, beta, w in items:
                alpha = _word_exp(w, self.n)
                for m, k in r.terms.items():
                    new.append((c * k * self.sigma.twist(alpha, m), _radd(beta, m), w))
            items = new
        out: dict = {}
        stack = list(items)
        while stack:
            c, beta, w = stack.pop()
            if not c:
                continue
            p = next((k for k in range(len(w) - 1) if w[k] > w[k + 1]), None)
            if p is None:
                _acc(out, (_word_exp(w, self.n), beta), c)
                continue
            j, i = w[p], w[p + 1]
            d, lower = self._rels.get((j, i), (self.field.one, {}))
            stack.append((c * d, beta, w[:p] + (i, j) + w[p + 2 :]))
            prefix = _word_exp(w[:p], self.n)
            for (dl, rl), cl in lower.items():
                tw = self.sigma.twist(prefix, rl)
                stack.append((c * cl * tw, _radd(beta, rl), w[:p] + _exp_word(dl) + w[p + 2 :]))
        return StdPoly(self, out)

    # -- leading data ------------------------------------------------------
    def leading(self, f: "StdPoly") -> Leading:
        if not f._t:
            return Leading(None, self.ring.zero, self.zero)
        lm = f.lm
        return Leading(lm, f.lc, f.lt)

    def deg(self, f: "StdPoly") -> int:
        return f.deg()

    def parse(self, text: str) -> "StdPoly":
        from .expr import parse_poly

        return parse_poly(self, text)

    def render(self, f: "StdPoly") -> str:
        from .expr import render_canonical

        return render_canonical(f)


def _radd(a: tuple, b: tuple) -> tuple:
    if not a:
        return a
    return tuple(x + y for x, y in zip(a, b))


def _acc(out: dict, key, value) -> None:
    v = out.get(key)
    out[key] = value if v is None else v + value


def _word_exp(w: tuple, n: int) -> ExpVec:
    v = [0] * n
    for i in w:
        v[i] += 1
    return tuple(v)


def _exp_word(alpha: ExpVec) -> tuple:
    return tuple(i for i, e in enumerate(alpha) for _ in range(e))


class StdPoly:
    """Element of A in standard form (immutable)."""

    __slots__ = ("algebra", "_t", "_lm", "_hash")

    def __init__(self, algebra: Algebra, terms: Mapping[TermKey, Scalar]):
        self.algebra = algebra
        self._t = {k: v for k, v in terms.items() if v}
        self._lm = False
        self._hash = None

    # -- views ---------------------------------------------------------------
    @property
    def terms(self) -> dict[ExpVec, RingElem]:
        grouped: dict[ExpVec, dict] = {}
        for (a, b), c in self._t.items():
            grouped.setdefault(a, {})[b] = c
        return {a: RingElem(self.algebra.ring, t) for a, t in grouped.items()}

    def items(self):
        return self._t.items()

    def support(self) -> set[ExpVec]:
        return {a for a, _ in self._t}

    def sorted_support(self) -> list[ExpVec]:
        key = self.algebra.order.key
        return sorted(self.support(), key=key, reverse=True)

    @property
    def lm(self) -> ExpVec | None:
        if self._lm is False:
            if not self._t:
                self._lm = None
            else:
                key = self.algebra.order.key
                self._lm = max({a for a, _ in self._t}, key=key)
        return self._lm

    @property
    def lc(self) -> RingElem:
        lm = self.lm
        ring = self.algebra.ring
        if lm is None:
            return ring.zero
        return RingElem(ring, {b: c for (a, b), c in self._t.items() if a == lm})

    @property
    def lt(self) -> "StdPoly":
        lm = self.lm
        if lm is None:
            return self
        return StdPoly(self.algebra, {k: c for k, c in self._t.items() if k[0] == lm})

    def deg(self) -> int:
        if not self._t:
            return -1
        return max(sum(a) for a, _ in self._t)

    def is_zero(self) -> bool:
        return not self._t

    def __bool__(self):
        return bool(self._t)

    def is_constant(self) -> bool:
        z = self.algebra._zero_exp
        return all(a == z for a, _ in self._t)

    def is_term(self) -> bool:
        return len(self.support()) <= 1

    def leading_scalar(self) -> Scalar:
        """Scalar coefficient of the first term of lc (fixed canonical choice)."""
        lc = self.lc
        m = max(lc.terms)
        return lc.terms[m]

    def normalized(self) -> "StdPoly":
        """K-multiple whose leading scalar is 1; equal for K-proportional elements."""
        if not self._t:
            return self
        return self.scale(self.leading_scalar().inverse())

    # -- arithmetic --------------------------------------------------------
    def _wrap(self, other):
        if isinstance(other, StdPoly):
            return other
        if isinstance(other, RingElem):
            return self.algebra.coeff(other)
        if isinstance(other, (int, Fraction, Scalar)):
            return self.algebra.scalar(other)
        return None

    def __add__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        out = dict(self._t)
        for k, c in o._t.items():
            v = out.get(k)
            out[k] = c if v is None else v + c
        return StdPoly(self.algebra, out)

    __radd__ = __add__

    def __neg__(self):
        return StdPoly(self.algebra, {k: -c for k, c in self._t.items()})

    def __sub__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def scale(self, k) -> "StdPoly":
        k = self.algebra.field(k)
        if not k:
            return self.algebra.zero
        if k.is_one():
            return self
        return StdPoly(self.algebra, {key: c * k for key, c in self._t.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            return self.scale(other)
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        return self.algebra.mul(self, o)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            return self.scale(other)
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        return self.algebra.mul(o, self)

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            return NotImplemented
        out = self.algebra.one
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, StdPoly):
            return self._t == other._t
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        return self._t == o._t

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._t.items()))
        return self._hash

    def sort_key(self) -> tuple:
        return (bool(self._t), str(self))

    def __repr__(self):
        return f"StdPoly({self})"

    def __str__(self):
        from .expr import render_canonical

        return render_canonical(self)


def mul(a: Algebra, f: StdPoly, g: StdPoly) -> StdPoly:
    return a.mul(f, g)


def normalize(a: Algebra, word: Iterable) -> StdPoly:
    return a.normalize(word)


def leading(a: Algebra, f: StdPoly) -> Leading:
    return a.leading(f)


def deg(f: StdPoly) -> int:
    return f.deg()


def validate(p: Presentation) -> Algebra:
    """Check a presentation and return an immutable :class:`Algebra`.

    Raises :class:`ValidationErrors` listing every problem found.
    """
    n = len(p.generators)
    if p.order.nvars != n:
        raise ValidationErrors([DimensionMismatch("order and generator count differ")])
    issues: list = []
    for (j, i), (d, lower) in sorted(p.relations.items()):
        if not (0 <= i <= j < n):
            issues.append(ValueError(f"relation ({j},{i}) must have j >= i"))
            continue
        if j == i:
            if d != 1 or any(lower.values()):
                issues.append(DiagonalNotOne(i, d))
            continue
        if not d:
            issues.append(ZeroD(j, i))
        top = exp_add(unit_vector(n, i), unit_vector(n, j))
        for (alpha, _beta), c in lower.items():
            if c and p.order.compare(alpha, top) != Cmp.LT:
                issues.append(LowerPartNotSmaller(j, i, alpha))
                break
        if p.strict:
            for (alpha, _beta), c in lower.items():
                if c and sum(alpha) > 1:
                    issues.append(StrictnessViolation(j, i, alpha))
                    break
    if issues:
        raise ValidationErrors(issues)

    a = Algebra(p)
    xs = a.gens()
    for k in range(n):
        for j in range(k + 1):
            for i in range(j + 1):
                lhs = (xs[k] * xs[j]) * xs[i]
                rhs = xs[k] * (xs[j] * xs[i])
                if lhs != rhs:
                    issues.append(AssociativityFailure((k, j, i), lhs - rhs))
    for name in a.ring.names:
        y = a.coeff_var(name)
        for j in range(n):
            for i in range(j + 1):
                lhs = (xs[j] * xs[i]) * y
                rhs = xs[j] * (xs[i] * y)
                if lhs != rhs:
                    issues.append(AssociativityFailure((j, i, name), lhs - rhs))
    if issues:
        raise ValidationErrors(issues)
    return a
