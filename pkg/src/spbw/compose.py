"""Composition by Theta: substituting x_i -> theta_i in standard forms.

Substitution sends x^alpha to the ordered product theta_1^a1 ... theta_n^an and is
K-linear.  It is multiplicative exactly when Theta respects the defining
relations (admissible Theta), which is checked explicitly.  Compatibility with
the ordering and with nonequality is checked on all monomials up to a degree
bound, so every verdict is bound-relative.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .algebra import Algebra, Cmp, ExpVec, StdPoly, exp_add, exponents_upto
from .errors import CoefficientRingNotScalar, ConstantInF
from .sagbi import Caps, Counterexample, FSet, Inconclusive, SagbiReport, sagbi_test


class Composition:
    """Theta = (theta_1, ..., theta_n) with every theta_i nonconstant."""

    def __init__(self, algebra: Algebra, theta: Sequence[StdPoly]):
        if not algebra.ring.is_field:
            raise CoefficientRingNotScalar("composition requires R == K")
        theta = list(theta)
        if len(theta) != algebra.n:
            raise ValueError(f"Theta needs {algebra.n} entries, got {len(theta)}")
        for i, t in enumerate(theta):
            if t.is_zero() or t.lm == algebra._zero_exp:
                raise ConstantInF(f"theta_{i + 1} = {t} lies in K")
        self.algebra = algebra
        self.theta = theta
        self.hat_lms: list[ExpVec] = [t.lm for t in theta]
        self._powers: dict[tuple[int, int], StdPoly] = {}
        self._mono: dict[ExpVec, StdPoly] = {}

    def _power(self, i: int, e: int) -> StdPoly:
        key = (i, e)
        p = self._powers.get(key)
        if p is None:
            p = self.algebra.one if e == 0 else self._power(i, e - 1) * self.theta[i]
            self._powers[key] = p
        return p

    def monomial_image(self, alpha: ExpVec) -> StdPoly:
        img = self._mono.get(alpha)
        if img is None:
            img = self.algebra.one
            for i, e in enumerate(alpha):
                if e:
                    img = img * self._power(i, e)
            self._mono[alpha] = img
        return img

    def hat(self, alpha: ExpVec) -> ExpVec:
        """Exponent of x^alpha composed with the leading monomials of Theta."""
        out = self.algebra._zero_exp
        for i, e in enumerate(alpha):
            for _ in range(e):
                out = exp_add(out, self.hat_lms[i])
        return out

    def max_degree(self) -> int:
        return max(sum(m) for m in self.hat_lms)


def substitute(algebra: Algebra, f: StdPoly, theta) -> StdPoly:
    comp = theta if isinstance(theta, Composition) else Composition(algebra, theta)
    out = algebra.zero
    for (alpha, _beta), c in f.items():
        out = out + comp.monomial_image(alpha).scale(c)
    return out


@dataclass
class Admissible:
    def __str__(self):
        return "Admissible"


@dataclass
class RelationViolation:
    i: int
    j: int
    difference: StdPoly

    def __str__(self):
        return f"RelationViolation(x{self.j + 1}*x{self.i + 1}: {self.difference})"


def check_admissible(algebra: Algebra, theta):
    """theta_j theta_i - d_ij theta_i theta_j - p_ji(Theta) == 0 for every j > i."""
    comp = theta if isinstance(theta, Composition) else Composition(algebra, theta)
    th = comp.theta
    for j in range(algebra.n):
        for i in range(j):
            d, lower = algebra.relation(j, i)
            diff = th[j] * th[i] - (th[i] * th[j]).scale(d) - substitute(algebra, lower, comp)
            if diff:
                return RelationViolation(i, j, diff)
    return Admissible()


@dataclass
class Holds:
    D: int

    def __str__(self):
        return f"Holds({self.D})"


@dataclass
class CounterWitness:
    xi: ExpVec
    xj: ExpVec

    def __str__(self):
        return f"CounterWitness({self.xi}, {self.xj})"


def _sorted_monomials(algebra: Algebra, D: int) -> list[ExpVec]:
    return sorted(exponents_upto(algebra.n, D), key=algebra.order.key)


def check_order_compatible(algebra: Algebra, theta, D: int):
    """Xi < Xj implies hat(Xi) < hat(Xj) for all monomials of degree <= D.

    The order is total, so it is enough to check consecutive monomials in
    ascending order; the witness is the first consecutive pair that fails.
    """
    comp = theta if isinstance(theta, Composition) else Composition(algebra, theta)
    mons = _sorted_monomials(algebra, D)
    for lo, hi in zip(mons, mons[1:]):
        if algebra.compare(comp.hat(lo), comp.hat(hi)) != Cmp.LT:
            return CounterWitness(lo, hi)
    return Holds(D)


def check_nonequality_compatible(algebra: Algebra, theta, D: int):
    comp = theta if isinstance(theta, Composition) else Composition(algebra, theta)
    seen: dict[ExpVec, ExpVec] = {}
    for m in _sorted_monomials(algebra, D):
        h = comp.hat(m)
        if h in seen:
            return CounterWitness(seen[h], m)
        seen[h] = m
    return Holds(D)


@dataclass
class CommutationReport:
    admissible: object
    order_compatible: object
    nonequality_compatible: object
    implication_ok: bool
    D: int
    scaled_D: int
    forward: str = "not-applicable"  # passed | failed | inconclusive | not-applicable
    report_F: SagbiReport | None = None
    report_FTheta: SagbiReport | None = None
    hat_failures: list = field(default_factory=list)
    lemma_failures: list = field(default_factory=list)
    converse: dict | None = None

    @property
    def consistent(self) -> bool:
        """No observation contradicts the commutation theorem."""
        return (
            self.implication_ok
            and self.forward != "failed"
            and not self.hat_failures
            and not self.lemma_failures
        )


def check_commutation(algebra: Algebra, F: Sequence[StdPoly], theta, D: int,
                      caps: Caps | None = None, samples: int = 50) -> CommutationReport:
    caps = caps or Caps()
    comp = theta if isinstance(theta, Composition) else Composition(algebra, theta)
    adm = check_admissible(algebra, comp)
    oc = check_order_compatible(algebra, comp, D)
    ne = check_nonequality_compatible(algebra, comp, D)
    implication_ok = not (isinstance(oc, Holds) and not isinstance(ne, Holds))
    scaled = D * comp.max_degree()
    rep = CommutationReport(adm, oc, ne, implication_ok, D, scaled)
    if not isinstance(adm, Admissible):
        return rep

    FT = [substitute(algebra, f, comp) for f in F]
    if isinstance(oc, Holds):
        rep.report_F = sagbi_test(algebra, F, D, caps)
        if rep.report_F.verified:
            rep.report_FTheta = sagbi_test(algebra, FT, scaled, caps)
            v = rep.report_FTheta.verdict
            rep.forward = "failed" if isinstance(v, Counterexample) else (
                "inconclusive" if isinstance(v, Inconclusive) else "passed")
        # hat commutation on F-monomials: lm(m o Theta) == hat(lm(m))
        fs = FSet(algebra, F)
        fts = FSet(algebra, FT)
        for seq in fs.sequences_upto(D, caps)[:samples]:
            lhs = fts.value(seq).lm
            rhs = comp.hat(fs.value(seq).lm)
            if lhs != rhs:
                rep.hat_failures.append((seq, lhs, rhs))
        # every critical pair of F o Theta is a critical pair of F
        groups: dict[ExpVec, list] = {}
        for seq in fts.sequences_upto(scaled, caps):
            if seq:
                groups.setdefault(fts.lm_exp(seq), []).append(seq)
        for seqs in groups.values():
            exps = {fs.lm_exp(s) for s in seqs}
            if len(exps) > 1:
                rep.lemma_failures.append(seqs[:2])
    elif isinstance(oc, CounterWitness):
        rep.converse = converse_probe(algebra, comp, oc, D, caps)
    return rep


def converse_probe(algebra: Algebra, comp: Composition, witness: CounterWitness, D: int, caps: Caps) -> dict:
    """Build H from an order witness and test H and H o Theta.

    With u = Xj > v = Xi: when the images are equal H = {u - 1, v}, otherwise
    H = {u - v, v}.  The outcome is recorded, not asserted.
    """
    u = algebra.monomial(witness.xj)
    v = algebra.monomial(witness.xi)
    equal = comp.hat(witness.xi) == comp.hat(witness.xj)
    if not witness.xi or not any(witness.xi):
        # v == 1 cannot be a generator; fall back to H = {u - 1}
        H = [u - algebra.one]
    else:
        H = [u - algebra.one, v] if equal else [u - v, v]
    HT = [substitute(algebra, h, comp) for h in H]
    out = {"H": [str(h) for h in H], "H_theta": [str(h) for h in HT]}
    if any(h.is_zero() or h.lm == algebra._zero_exp for h in HT):
        out["H_theta_test"] = "H o Theta contains a constant"
        return out
    rH = sagbi_test(algebra, H, D, caps)
    rHT = sagbi_test(algebra, HT, D * comp.max_degree(), caps)
    out["H_test"] = str(rH.verdict)
    out["H_theta_test"] = str(rHT.verdict)
    out["H_theta_fails"] = rHT.counterexample
    return out
