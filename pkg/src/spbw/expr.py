"""Expression parsing and canonical rendering.

Grammar (``/`` and the leading unary minus extend the base grammar so that
rational-function coefficients round-trip)::

    expr   := ["-"] term (("+" | "-") term)*
    term   := factor (("*" | "/") factor)*
    factor := atom ("^" ["-"] integer)?
    atom   := integer | name | "(" expr ")"

Products keep their written order and are normalised through the algebra.  The
divisor of ``/`` must evaluate to a nonzero scalar.  Negative powers are allowed
on scalars and on monomials in Laurent coefficient variables.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING

from .coefficients import RingElem, Scalar, ScalarField
from .errors import DivisionByZero, DomainViolation, ExprSyntaxError, UnknownName

if TYPE_CHECKING:
    from .algebra import Algebra, StdPoly


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))")


@dataclass(frozen=True)
class Tok:
    kind: str
    text: str
    pos: int


def tokenize(text: str) -> list[Tok]:
    out = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            if text[pos:].strip() == "":
                break
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        out.append(Tok(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    out.append(Tok("end", "", n))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    def peek(self) -> Tok:
        return self.toks[self.i]

    def take(self) -> Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> Tok:
        t = self.take()
        if t.text != text:
            found = t.text or "end of input"
            raise ExprSyntaxError(f"expected {text!r}, found {found!r}", t.pos, self.text)
        return t

    def parse(self):
        if self.peek().kind == "end":
            raise ExprSyntaxError("empty expression", 0, self.text)
        node = self.expr()
        t = self.peek()
        if t.kind != "end":
            raise ExprSyntaxError(f"unexpected {t.text!r}", t.pos, self.text)
        return node

    def expr(self):
        if self.peek().text == "-":
            self.take()
            node = ("neg", self.term())
        else:
            node = self.term()
        while self.peek().text in ("+", "-"):
            op = self.take().text
            rhs = self.term()
            node = ("add" if op == "+" else "sub", node, rhs)
        return node

    def term(self):
        node = self.factor()
        while self.peek().text in ("*", "/"):
            t = self.take()
            rhs = self.factor()
            node = ("mul", node, rhs) if t.text == "*" else ("div", node, rhs, t.pos)
        return node

    def factor(self):
        node = self.atom()
        if self.peek().text == "^":
            caret = self.take()
            paren = False
            if self.peek().text == "(":
                self.take()
                paren = True
            sign = 1
            if self.peek().text == "-":
                self.take()
                sign = -1
            t = self.take()
            if t.kind != "num":
                raise ExprSyntaxError("exponent must be an integer", t.pos, self.text)
            if paren:
                self.expect(")")
            node = ("pow", node, sign * int(t.text), caret.pos)
        return node

    def atom(self):
        t = self.take()
        if t.kind == "num":
            return ("num", Fraction(int(t.text)))
        if t.kind == "name":
            return ("name", t.text, t.pos)
        if t.text == "(":
            node = self.expr()
            self.expect(")")
            return node
        found = t.text or "end of input"
        raise ExprSyntaxError(f"unexpected {found!r}", t.pos, self.text)


def parse_tree(text: str):
    return _Parser(text).parse()


def _evaluate(node, dom):
    kind = node[0]
    if kind == "num":
        return dom.literal(node[1])
    if kind == "name":
        return dom.name(node[1], node[2])
    if kind == "neg":
        return dom.neg(_evaluate(node[1], dom))
    if kind == "add":
        return dom.add(_evaluate(node[1], dom), _evaluate(node[2], dom))
    if kind == "sub":
        return dom.add(_evaluate(node[1], dom), dom.neg(_evaluate(node[2], dom)))
    if kind == "mul":
        return dom.mul(_evaluate(node[1], dom), _evaluate(node[2], dom))
    if kind == "div":
        return dom.div(_evaluate(node[1], dom), _evaluate(node[2], dom), node[3])
    if kind == "pow":
        return dom.pow(_evaluate(node[1], dom), node[2], node[3])
    raise AssertionError(kind)


# ---------------------------------------------------------------- scalars


class _ScalarDomain:
    def __init__(self, field: ScalarField):
        self.field = field

    def literal(self, q):
        return self.field(q)

    def name(self, n, pos):
        if n in self.field.params:
            return self.field.param(n)
        raise UnknownName(n, pos)

    def neg(self, a):
        return -a

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def div(self, a, b, pos):
        if not b:
            raise DivisionByZero(f"division by zero at position {pos}")
        return a / b

    def pow(self, a, e, pos):
        if e < 0 and not a:
            raise DivisionByZero(f"negative power of zero at position {pos}")
        return a**e


def parse_scalar(field: ScalarField, text: str) -> Scalar:
    return _evaluate(parse_tree(text), _ScalarDomain(field))


# ---------------------------------------------------------------- algebra


class _AlgebraDomain:
    def __init__(self, algebra: "Algebra"):
        self.a = algebra

    def literal(self, q):
        return self.a.scalar(q)

    def name(self, n, pos):
        a = self.a
        if n in a.generators:
            return a.gen(n)
        if n in a.ring.names:
            return a.coeff_var(n)
        if n in a.field.params:
            return a.scalar(a.field.param(n))
        raise UnknownName(n, pos)

    def neg(self, f):
        return -f

    def add(self, f, g):
        return f + g

    def mul(self, f, g):
        return self.a.mul(f, g)

    def _as_scalar(self, f) -> Scalar | None:
        if f.is_zero():
            return self.a.field.zero
        if f.is_constant() and f.lc.is_scalar():
            return f.lc.scalar()
        return None

    def div(self, f, g, pos):
        k = self._as_scalar(g)
        if k is None:
            raise DomainViolation(f"divisor at position {pos} is not a scalar")
        if not k:
            raise DivisionByZero(f"division by zero at position {pos}")
        return f.scale(k.inverse())

    def pow(self, f, e, pos):
        if e >= 0:
            return f**e
        k = self._as_scalar(f)
        if k is not None:
            if not k:
                raise DivisionByZero(f"negative power of zero at position {pos}")
            return self.a.scalar(k**e)
        # a single coefficient-ring monomial in Laurent variables
        if f.is_constant() and len(f.lc.terms) == 1:
            (m, c), = f.lc.terms.items()
            inv = tuple(-x for x in m)
            self.a.ring.check_mono(inv)
            base = self.a.coeff(RingElem(self.a.ring, {inv: c.inverse()}))
            return base ** (-e)
        raise DomainViolation(f"negative exponent at position {pos} needs a scalar or Laurent monomial base")


def parse_poly(algebra: "Algebra", text: str) -> "StdPoly":
    """Parse ``text`` into standard form inside ``algebra``."""
    return _evaluate(parse_tree(text), _AlgebraDomain(algebra))


class _FreeDomain:
    """Evaluation for relation right-hand sides: words are kept as written.

    Values are dicts ``{(word, beta): scalar}``.  Coefficients must stand to the
    left of generators so that no commutation rule is needed.
    """

    def __init__(self, field, ring, generators):
        self.field = field
        self.ring = ring
        self.generators = tuple(generators)

    def _const(self, k, beta=None):
        beta = beta if beta is not None else self.ring.unit
        return {((), beta): k} if k else {}

    def literal(self, q):
        return self._const(self.field(q))

    def name(self, n, pos):
        if n in self.generators:
            return {((self.generators.index(n),), self.ring.unit): self.field.one}
        if n in self.ring.names:
            return {((), self.ring.var(n).sorted_terms()[0][0]): self.field.one}
        if n in self.field.params:
            return self._const(self.field.param(n))
        raise UnknownName(n, pos)

    def neg(self, f):
        return {k: -c for k, c in f.items()}

    def add(self, f, g):
        out = dict(f)
        for k, c in g.items():
            out[k] = out[k] + c if k in out else c
        return {k: c for k, c in out.items() if c}

    def mul(self, f, g, pos=None):
        out: dict = {}
        for (w1, b1), c1 in f.items():
            for (w2, b2), c2 in g.items():
                if w1 and any(b2):
                    raise ExprSyntaxError("coefficient variables must precede generators in a relation")
                key = (w1 + w2, tuple(x + y for x, y in zip(b1, b2)))
                out[key] = out[key] + c1 * c2 if key in out else c1 * c2
        return {k: c for k, c in out.items() if c}

    def _as_scalar(self, f):
        if not f:
            return self.field.zero
        if set(f) == {((), self.ring.unit)}:
            return f[((), self.ring.unit)]
        return None

    def div(self, f, g, pos):
        k = self._as_scalar(g)
        if k is None:
            raise DomainViolation(f"divisor at position {pos} is not a scalar")
        if not k:
            raise DivisionByZero(f"division by zero at position {pos}")
        return {key: c / k for key, c in f.items()}

    def pow(self, f, e, pos):
        if e < 0:
            k = self._as_scalar(f)
            if k is not None:
                if not k:
                    raise DivisionByZero(f"negative power of zero at position {pos}")
                return self._const(k**e)
            if len(f) == 1:
                ((w, b), c), = f.items()
                if not w:
                    inv = tuple(-x for x in b)
                    self.ring.check_mono(inv)
                    f = {((), inv): c.inverse()}
                    e = -e
                else:
                    raise DomainViolation(f"negative exponent at position {pos}")
            else:
                raise DomainViolation(f"negative exponent at position {pos}")
        out = self._const(self.field.one)
        for _ in range(e):
            out = self.mul(out, f)
        return out


def parse_free(field, ring, generators, text: str) -> dict:
    """Parse without rewriting; returns ``{(word, beta): scalar}``."""
    return _evaluate(parse_tree(text), _FreeDomain(field, ring, generators))


# ---------------------------------------------------------------- rendering


def _frac_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _mono_str(names, mono) -> list[str]:
    out = []
    for name, e in zip(names, mono):
        if e == 1:
            out.append(name)
        elif e:
            out.append(f"{name}^{e}")
    return out


def _term_str(coeff: Fraction, factors: list[str]) -> str:
    """c * f1 * f2 ... with the conventional 1/-1 elision."""
    if not factors:
        return _frac_str(coeff)
    body = "*".join(factors)
    if coeff == 1:
        return body
    if coeff == -1:
        return "-" + body
    return f"{_frac_str(coeff)}*{body}"


def _join(parts: list[str]) -> str:
    if not parts:
        return "0"
    s = parts[0]
    for p in parts[1:]:
        s += p if p.startswith("-") else "+" + p
    return s


def _qpoly_str(names, d: dict) -> str:
    items = sorted(d.items(), key=lambda kv: kv[0], reverse=True)
    return _join([_term_str(c, _mono_str(names, m)) for m, c in items])


def render_scalar(s: Scalar) -> str:
    names = s.field.params
    num = s.numerator()
    den = s.denominator()
    if s.is_zero():
        return "0"
    num_s = _qpoly_str(names, num)
    if len(num) > 1:
        num_s = f"({num_s})"
    if s.den.is_one():
        return num_s
    den_s = _qpoly_str(names, den)
    single_var = len(den) == 1 and sum(1 for e in next(iter(den)) if e) == 1
    if not single_var:
        den_s = f"({den_s})"
    return f"{num_s}/{den_s}"


def _coeff_factors(c: Scalar, factors: list[str]) -> str:
    """Render c * factors, folding a rational or -1 coefficient into the product."""
    if c.is_rational():
        return _term_str(c.to_fraction(), factors)
    cs = render_scalar(c)
    if not factors:
        return cs
    return cs + "*" + "*".join(factors)


def render_ring_elem(r: RingElem) -> str:
    names = r.ring.names
    return _join([_coeff_factors(c, _mono_str(names, m)) for m, c in r.sorted_terms()])


def render_canonical(f: "StdPoly") -> str:
    a = f.algebra
    key = a.order.key
    items = sorted(f.items(), key=lambda kv: (key(kv[0][0]), kv[0][1]), reverse=True)
    parts = []
    for (alpha, beta), c in items:
        factors = _mono_str(a.ring.names, beta) + _mono_str(a.generators, alpha)
        parts.append(_coeff_factors(c, factors))
    return _join(parts)
