"""Exact arithmetic for the base field K = Q(p1, ..., pm) and the coefficient ring R.

Scalars are reduced fractions of polynomials over Q in the declared parameter
names, backed by ``flint.fmpq_mpoly``.  The denominator is normalised so that its
leading coefficient under pure lex (declared parameter order) is 1, which makes
the representation unique and lets ``==`` and ``hash`` work structurally.

The coefficient ring R is K[y1, ..., ym] where each y may be flagged Laurent.
Generators act on R through a diagonal twist ``x_i * y_j = c_ij * y_j * x_i``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from typing import Iterable, Mapping

import flint

from .errors import DivisionByZero, DomainViolation, ZeroDivisor

RMono = tuple  # exponent vector over the coefficient variables


def _fmpq(value) -> flint.fmpq:
    if isinstance(value, flint.fmpq):
        return value
    if isinstance(value, Fraction):
        return flint.fmpq(value.numerator, value.denominator)
    if isinstance(value, int):
        return flint.fmpq(value)
    raise TypeError(f"cannot convert {type(value).__name__} to a rational")


def _as_fraction(c: flint.fmpq) -> Fraction:
    return Fraction(int(c.p), int(c.q))


class ScalarField:
    """The field K = Q(params).  Instances with equal parameter tuples compare equal."""

    def __init__(self, params: Iterable[str] = ()):
        self.params: tuple[str, ...] = tuple(params)
        if len(set(self.params)) != len(self.params):
            raise ValueError("duplicate parameter names")
        self._ctx = flint.fmpq_mpoly_ctx.get(self.params, "lex")
        self._one_poly = self._ctx.constant(1)
        self.zero = Scalar(self, self._ctx.constant(0), self._one_poly)
        self.one = Scalar(self, self._one_poly, self._one_poly)

    def __eq__(self, other):
        return isinstance(other, ScalarField) and other.params == self.params

    def __hash__(self):
        return hash(("ScalarField", self.params))

    def __repr__(self):
        return f"ScalarField({list(self.params)!r})"

    def __call__(self, value) -> "Scalar":
        if isinstance(value, Scalar):
            if value.field != self:
                raise ValueError("scalar belongs to a different field")
            return value
        return Scalar(self, self._ctx.constant(_fmpq(value)), self._one_poly)

    def param(self, name: str) -> "Scalar":
        i = self.params.index(name)
        return Scalar(self, self._ctx.gens()[i], self._one_poly)

    def gens(self) -> dict[str, "Scalar"]:
        return {name: self.param(name) for name in self.params}

    def from_parts(self, num: Mapping[tuple, object], den: Mapping[tuple, object] | None = None) -> "Scalar":
        """Build num/den from exponent->rational dictionaries and canonicalise."""
        n = self._ctx.from_dict({k: _fmpq(v) for k, v in num.items()})
        d = self._ctx.from_dict({k: _fmpq(v) for k, v in den.items()}) if den else self._one_poly
        return Scalar._make(self, n, d)


class Scalar:
    """Element of K in canonical form."""

    __slots__ = ("field", "num", "den", "_hash")

    def __init__(self, field: ScalarField, num, den):
        self.field = field
        self.num = num
        self.den = den
        self._hash = None

    @staticmethod
    def _make(field: ScalarField, num, den) -> "Scalar":
        if den.is_zero():
            raise DivisionByZero("zero denominator")
        if num.is_zero():
            return field.zero
        if not den.is_one():
            if not den.is_constant():
                g = num.gcd(den)
                if not g.is_one():
                    num = num / g
                    den = den / g
            lc = den.leading_coefficient()
            if lc != 1:
                num = num / lc
                den = den / lc
        return Scalar(field, num, den)

    def _coerce(self, other) -> "Scalar | None":
        if isinstance(other, Scalar):
            if other.field is not self.field and other.field != self.field:
                raise ValueError("scalars from different fields")
            return other
        if isinstance(other, (int, Fraction, flint.fmpq)):
            return self.field(other)
        return None

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den.is_one() and o.den.is_one():
            n = self.num + o.num
            return self.field.zero if n.is_zero() else Scalar(self.field, n, self.den)
        if self.den == o.den:
            return Scalar._make(self.field, self.num + o.num, self.den)
        return Scalar._make(self.field, self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return Scalar(self.field, -self.num, self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den.is_one() and o.den.is_one():
            n = self.num * o.num
            return self.field.zero if n.is_zero() else Scalar(self.field, n, self._one())
        return Scalar._make(self.field, self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def _one(self):
        return self.field._one_poly

    def inverse(self) -> "Scalar":
        if self.num.is_zero():
            raise DivisionByZero("inverse of zero")
        return Scalar._make(self.field, self.den, self.num)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise DivisionByZero("division by zero scalar")
        return Scalar._make(self.field, self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        if e == 0:
            return self.field.one
        return Scalar(self.field, self.num ** e, self.den ** e)

    # -- predicates ---------------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num.is_one() and self.den.is_one()

    def is_rational(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not a rational constant")
        if self.num.is_zero():
            return Fraction(0)
        return _as_fraction(self.num.leading_coefficient()) / _as_fraction(self.den.leading_coefficient())

    def numerator(self) -> dict[tuple, Fraction]:
        return {k: _as_fraction(v) for k, v in self.num.to_dict().items()}

    def denominator(self) -> dict[tuple, Fraction]:
        return {k: _as_fraction(v) for k, v in self.den.to_dict().items()}

    def _key(self):
        return (
            tuple(sorted((k, (int(v.p), int(v.q))) for k, v in self.num.to_dict().items())),
            tuple(sorted((k, (int(v.p), int(v.q))) for k, v in self.den.to_dict().items())),
        )

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.field == other.field and self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.to_fraction() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._key()) if not self.is_rational() else hash(self.to_fraction())
        return self._hash

    def __bool__(self):
        return not self.num.is_zero()

    def __repr__(self):
        return f"Scalar({self})"

    def __str__(self):
        from .expr import render_scalar

        return render_scalar(self)


class CoefficientRing:
    """R = K[y1, ..., ym], with Laurent exponents allowed on flagged variables."""

    def __init__(self, field: ScalarField, names: Iterable[str] = (), laurent: Iterable[bool] | None = None):
        self.field = field
        self.names: tuple[str, ...] = tuple(names)
        self.laurent: tuple[bool, ...] = tuple(laurent) if laurent is not None else (False,) * len(self.names)
        if len(self.laurent) != len(self.names):
            raise ValueError("laurent flags do not match variable names")
        self.nvars = len(self.names)
        self.unit: RMono = (0,) * self.nvars
        self.zero = RingElem(self, {})
        self.one = RingElem(self, {self.unit: field.one})

    @property
    def is_field(self) -> bool:
        return self.nvars == 0

    def __eq__(self, other):
        return (
            isinstance(other, CoefficientRing)
            and other.field == self.field
            and other.names == self.names
            and other.laurent == self.laurent
        )

    def __hash__(self):
        return hash((self.field, self.names, self.laurent))

    def check_mono(self, mono: RMono) -> RMono:
        if len(mono) != self.nvars:
            raise ValueError("coefficient monomial has wrong length")
        for e, name, lau in zip(mono, self.names, self.laurent):
            if e < 0 and not lau:
                raise DomainViolation(f"negative exponent on non-Laurent variable {name!r}")
        return mono

    def var(self, name: str) -> "RingElem":
        i = self.names.index(name)
        mono = tuple(1 if k == i else 0 for k in range(self.nvars))
        return RingElem(self, {mono: self.field.one})

    def monomial(self, mono: RMono, c=1) -> "RingElem":
        c = self.field(c)
        return RingElem(self, {self.check_mono(tuple(mono)): c} if c else {})

    def __call__(self, value) -> "RingElem":
        if isinstance(value, RingElem):
            return value
        c = self.field(value)
        return RingElem(self, {self.unit: c} if c else {})


def _add_mono(a: RMono, b: RMono) -> RMono:
    return tuple(x + y for x, y in zip(a, b))


class RingElem:
    """Element of R: a finite map from coefficient monomials to nonzero scalars."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: CoefficientRing, terms: Mapping[RMono, Scalar]):
        self.ring = ring
        self.terms = {m: c for m, c in terms.items() if c}
        self._hash = None

    def _coerce(self, other):
        if isinstance(other, RingElem):
            return other
        if isinstance(other, (Scalar, int, Fraction)):
            return self.ring(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for m, c in o.terms.items():
            v = out.get(m)
            out[m] = c if v is None else v + c
        return RingElem(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return RingElem(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out: dict[RMono, Scalar] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in o.terms.items():
                m = _add_mono(m1, m2)
                v = out.get(m)
                out[m] = c1 * c2 if v is None else v + c1 * c2
        return RingElem(self.ring, out)

    __rmul__ = __mul__

    def scale(self, k: Scalar) -> "RingElem":
        if not k:
            return self.ring.zero
        return RingElem(self.ring, {m: c * k for m, c in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_scalar(self) -> bool:
        return not self.terms or set(self.terms) == {self.ring.unit}

    def scalar(self) -> Scalar:
        if not self.terms:
            return self.ring.field.zero
        if not self.is_scalar():
            raise ValueError(f"{self} is not a scalar")
        return self.terms[self.ring.unit]

    def sorted_terms(self) -> list[tuple[RMono, Scalar]]:
        return sorted(self.terms.items(), key=lambda mc: mc[0], reverse=True)

    def __eq__(self, other):
        o = self._coerce(other) if not isinstance(other, RingElem) else other
        if o is None:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __repr__(self):
        return f"RingElem({self})"

    def __str__(self):
        from .expr import render_ring_elem

        return render_ring_elem(self)


def scalar_ratio(r: RingElem, s: RingElem) -> Scalar | None:
    """Return k in K with r == k*s, or None when no such scalar exists."""
    if not s.terms:
        raise ZeroDivisor("ratio against zero ring element")
    if not r.terms:
        return r.ring.field.zero
    if r.terms.keys() != s.terms.keys():
        return None
    it = iter(s.terms.items())
    m0, c0 = next(it)
    k = r.terms[m0] / c0
    for m, c in it:
        if r.terms[m] != k * c:
            return None
    return k


class SigmaAction:
    """Diagonal twist: sigma_i(y_j) = factors[i][j] * y_j, and delta_i = 0 on R."""

    def __init__(self, ring: CoefficientRing, factors: Iterable[Iterable[Scalar]]):
        self.ring = ring
        self.factors: tuple[tuple[Scalar, ...], ...] = tuple(tuple(ring.field(c) for c in row) for row in factors)
        for row in self.factors:
            if len(row) != ring.nvars:
                raise ValueError("sigma row length does not match coefficient variables")
            if any(not c for c in row):
                raise ValueError("sigma factors must be nonzero")
        self.ngens = len(self.factors)
        self._twist_cache: dict[tuple, Scalar] = {}
        self.trivial = all(c.is_one() for row in self.factors for c in row)

    @classmethod
    def identity(cls, ring: CoefficientRing, ngens: int) -> "SigmaAction":
        return cls(ring, [[ring.field.one] * ring.nvars for _ in range(ngens)])

    def twist(self, alpha: tuple, mono: RMono) -> Scalar:
        """Scalar c with sigma^alpha(y^mono) == c * y^mono."""
        if self.trivial or not any(mono):
            return self.ring.field.one
        key = (alpha, mono)
        c = self._twist_cache.get(key)
        if c is None:
            c = self.ring.field.one
            for i, a in enumerate(alpha):
                if a:
                    for j, e in enumerate(mono):
                        if e:
                            c = c * self.factors[i][j] ** (a * e)
            self._twist_cache[key] = c
        return c

    def apply(self, i: int, r: RingElem) -> RingElem:
        alpha = tuple(1 if k == i else 0 for k in range(self.ngens))
        return self.apply_power(alpha, r)

    def apply_power(self, alpha: tuple, r: RingElem) -> RingElem:
        if self.trivial:
            return r
        return RingElem(self.ring, {m: c * self.twist(tuple(alpha), m) for m, c in r.terms.items()})


def apply_sigma(sigma: SigmaAction, i: int, r: RingElem) -> RingElem:
    return sigma.apply(i, r)


def apply_sigma_power(sigma: SigmaAction, alpha: tuple, r: RingElem) -> RingElem:
    return sigma.apply_power(alpha, r)


def scalar_arith(a: Scalar, b: Scalar, op: str) -> Scalar:
    ops = {
        "add": lambda: a + b,
        "sub": lambda: a - b,
        "mul": lambda: a * b,
        "div": lambda: a / b,
    }
    return ops[op]()


def ring_arith(r: RingElem, s: RingElem, op: str) -> RingElem:
    if r.ring != s.ring:
        raise ValueError("operands belong to different coefficient rings")
    ops = {"add": lambda: r + s, "sub": lambda: r - s, "mul": lambda: r * s}
    return ops[op]()


def product(items: Iterable[Scalar], start: Scalar) -> Scalar:
    return reduce(lambda x, y: x * y, items, start)
