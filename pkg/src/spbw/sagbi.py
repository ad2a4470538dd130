"""F-monomials, SAGBI normal forms, critical pairs, the bounded SAGBI test and completion.

An F-monomial is a tuple of indices into F; the empty tuple is the monomial 1.
Because lm is additive in an SPBW extension, the leading monomial of an
F-monomial is the sum of the leading exponents of its factors, so candidate
sequences for a reduction are found by an exponent subset-sum search.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Sequence

from .algebra import Algebra, ExpVec, StdPoly, exp_add, exp_degree, exp_sub
from .coefficients import Scalar, scalar_ratio
from .errors import CapsExceeded, ConstantInF, EmptyRepresentation, NoScalarRatio

FMonomial = tuple  # tuple[int, ...]

# Set by the test-suite: when true every trace produced is replayed on creation.
VERIFY_TRACES = False
TRACE_STATS = {"verified": 0}


@dataclass(frozen=True)
class Caps:
    max_branches: int = 10_000
    max_steps: int = 10_000
    max_pairs: int = 100_000
    max_monomials: int = 200_000

    @classmethod
    def from_env(cls, env: str | None = None) -> "Caps":
        """Defaults overridden by ``SPBW_CAPS="max_branches=100,max_steps=50"``."""
        text = os.environ.get("SPBW_CAPS", "") if env is None else env
        caps = cls()
        for item in filter(None, (s.strip() for s in text.split(","))):
            key, _, value = item.partition("=")
            key = key.strip()
            if key not in cls.__dataclass_fields__:
                raise ValueError(f"unknown cap {key!r}")
            caps = replace(caps, **{key: int(value)})
        return caps


class FSet:
    """A generating family F together with cached F-monomial values."""

    def __init__(self, algebra: Algebra, F: Sequence[StdPoly]):
        self.algebra = algebra
        self.F = list(F)
        for k, f in enumerate(self.F):
            if f.is_zero() or f.lm == algebra._zero_exp:
                raise ConstantInF(f"F[{k}] = {f} is constant")
        self.lms: list[ExpVec] = [f.lm for f in self.F]
        self.lts: list[StdPoly] = [f.lt for f in self.F]
        self._values: dict[FMonomial, StdPoly] = {(): algebra.one}
        self._lts: dict[FMonomial, StdPoly] = {(): algebra.one}
        self.snf_memo: dict[StdPoly, dict] = {}

    def __len__(self):
        return len(self.F)

    def value(self, seq: FMonomial) -> StdPoly:
        seq = tuple(seq)
        v = self._values.get(seq)
        if v is None:
            v = self.value(seq[:-1]) * self.F[seq[-1]]
            self._values[seq] = v
        return v

    def lt_value(self, seq: FMonomial) -> StdPoly:
        """lt of the product, computed from the leading terms only."""
        seq = tuple(seq)
        v = self._lts.get(seq)
        if v is None:
            v = (self.lt_value(seq[:-1]) * self.lts[seq[-1]]).lt
            self._lts[seq] = v
        return v

    def lm_exp(self, seq: FMonomial) -> ExpVec:
        out = self.algebra._zero_exp
        for i in seq:
            out = exp_add(out, self.lms[i])
        return out

    def name(self, seq: FMonomial) -> str:
        return "*".join(f"q{i + 1}" for i in seq) if seq else "1"

    def sequences_upto(self, D: int, caps: Caps) -> list[FMonomial]:
        """All F-monomials with lm-degree <= D in index-lex order (1 first)."""
        degs = [exp_degree(m) for m in self.lms]
        out: list[FMonomial] = []

        def rec(prefix, budget):
            out.append(prefix)
            if len(out) > caps.max_monomials:
                raise CapsExceeded("max_monomials", caps.max_monomials)
            for i, d in enumerate(degs):
                if d <= budget:
                    rec(prefix + (i,), budget - d)

        rec((), D)
        return out


def _fset(algebra: Algebra, F) -> FSet:
    return F if isinstance(F, FSet) else FSet(algebra, F)


# ---------------------------------------------------------------- candidates


def candidates(algebra: Algebra, F, s0: StdPoly, caps: Caps | None = None):
    """Sequences m with k*lt(m) == lt(s0), as ``(items, truncated)``.

    ``items`` is a list of ``(k, seq)`` in index-lexicographic order of seq.
    """
    fs = _fset(algebra, F)
    caps = caps or Caps()
    if s0.is_zero():
        return [], False
    target = s0.lm
    lc0 = s0.lc
    found: list[tuple[Scalar, FMonomial]] = []
    visited = 0
    truncated = False
    lms = fs.lms

    def rec(prefix, remaining):
        nonlocal visited, truncated
        if truncated:
            return
        if not any(remaining):
            k = scalar_ratio(lc0, fs.lt_value(prefix).lc)
            if k is not None:
                found.append((k, prefix))
            return
        for i, m in enumerate(lms):
            if all(a <= b for a, b in zip(m, remaining)):
                visited += 1
                if visited > caps.max_branches:
                    truncated = True
                    return
                rec(prefix + (i,), exp_sub(remaining, m))

    rec((), target)
    return found, truncated


# ---------------------------------------------------------------- traces


@dataclass
class ReductionTrace:
    source: StdPoly
    steps: list  # list of (k, seq)
    remainder: StdPoly
    complete: bool = True

    def replay(self, fs: FSet) -> StdPoly:
        total = self.remainder
        for k, seq in self.steps:
            total = total + fs.value(seq).scale(k)
        return total

    def render(self, fs: FSet) -> list[dict]:
        return [{"k": str(k), "monomial": fs.name(seq), "seq": list(seq)} for k, seq in self.steps]


def verify_trace(fs: FSet, trace: ReductionTrace) -> None:
    """Replay identity and strict descent of the leading monomials."""
    if trace.replay(fs) != trace.source:
        raise AssertionError(f"trace replay failed for {trace.source}")
    key = fs.algebra.order.key
    prev = None
    for k, seq in trace.steps:
        lm = fs.value(seq).lm
        if prev is not None and not key(lm) < key(prev):
            raise AssertionError("trace leading monomials do not strictly decrease")
        prev = lm
    TRACE_STATS["verified"] += 1


def _emit(fs: FSet, trace: ReductionTrace) -> ReductionTrace:
    if VERIFY_TRACES:
        verify_trace(fs, trace)
    return trace


@dataclass
class SNFResult:
    """Outcome of strategy=all: one trace per distinct remainder."""

    traces: list[ReductionTrace]
    inconclusive: bool = False
    branches: int = 0
    stopped: bool = False  # search ended early at a nonzero remainder

    @property
    def remainders(self) -> list[StdPoly]:
        return [t.remainder for t in self.traces]

    def trace_for(self, r: StdPoly) -> ReductionTrace | None:
        return next((t for t in self.traces if t.remainder == r), None)


def _canon(p: StdPoly):
    return (bool(p), str(p))


def snf(algebra: Algebra, s: StdPoly, F, strategy: str = "first", caps: Caps | None = None):
    """SAGBI normal form.  ``first`` returns a ReductionTrace, ``all`` an SNFResult."""
    fs = _fset(algebra, F)
    caps = caps or Caps()
    if strategy == "first":
        return _snf_first(fs, s, caps)
    if strategy == "all":
        return _snf_all(fs, s, caps)
    raise ValueError(f"unknown strategy {strategy!r}")


def _snf_first(fs: FSet, s: StdPoly, caps: Caps) -> ReductionTrace:
    s0 = s
    steps = []
    complete = True
    while s0:
        items, _trunc = candidates(fs.algebra, fs, s0, caps)
        if not items:
            break
        if len(steps) >= caps.max_steps:
            complete = False
            break
        k, seq = items[0]
        s0 = s0 - fs.value(seq).scale(k)
        steps.append((k, seq))
    return _emit(fs, ReductionTrace(s, steps, s0, complete))


def _snf_all(fs: FSet, s: StdPoly, caps: Caps, stop_on_nonzero: bool = False) -> SNFResult:
    """Explore every choice point.  With ``stop_on_nonzero`` the search ends at the
    first nonzero remainder (enough to refute the SAGBI property).

    Completed sub-results are memoised on the FSet, keyed by the intermediate
    element, so repeated reductions over the same F share work.  Choices that
    lead to the same intermediate element are explored once.
    """
    memo = fs.snf_memo  # s0 -> {remainder: tail steps}, complete results only
    partial: dict[StdPoly, dict] = {}
    branches = 0
    inconclusive = False
    stopped = False

    def children(p):
        nonlocal inconclusive
        if not p:
            return []
        items, trunc = candidates(fs.algebra, fs, p, caps)
        if trunc:
            inconclusive = True
        return items

    def merge(res, edge, sub):
        nonlocal stopped
        for rem, tail in sub.items():
            if rem not in res:
                res[rem] = [edge] + tail
                if rem and stop_on_nonzero:
                    stopped = True

    if s in memo:
        out = memo[s]
        stopped = stop_on_nonzero and any(out)
    else:
        root_children = children(s)
        if not root_children:
            stopped = bool(s) and stop_on_nonzero
            memo[s] = {s: []}
        else:
            # frame: [element, children, next index, results, incoming edge, seen successors]
            stack = [[s, root_children, 0, {}, None, set()]]
            while stack:
                frame = stack[-1]
                p, kids, idx, res, _edge, seen = frame
                if idx < len(kids) and not inconclusive and not stopped:
                    frame[2] += 1
                    k, seq = kids[idx]
                    p1 = p - fs.value(seq).scale(k)
                    if p1 in seen:
                        continue
                    seen.add(p1)
                    branches += 1
                    if branches > caps.max_branches:
                        inconclusive = True
                        continue
                    if p1 in memo:
                        merge(res, (k, seq), memo[p1])
                        continue
                    sub_kids = children(p1)
                    if not sub_kids:
                        memo[p1] = {p1: []}
                        merge(res, (k, seq), memo[p1])
                        continue
                    stack.append([p1, sub_kids, 0, {}, (k, seq), set()])
                else:
                    stack.pop()
                    if inconclusive or stopped:
                        partial[p] = res
                    else:
                        memo[p] = res
                    if stack:
                        merge(stack[-1][3], frame[4], res)
        out = memo.get(s) or partial.get(s, {})
    done = not (inconclusive or stopped)
    traces = [_emit(fs, ReductionTrace(s, steps, rem, done)) for rem, steps in out.items()]
    traces.sort(key=lambda t: _canon(t.remainder))
    return SNFResult(traces, inconclusive and not stopped, branches, stopped)


class Reduction(Enum):
    STRONG = "Strong"
    WEAK_ONLY = "WeakOnly"
    NONE = "None"
    INCONCLUSIVE = "Inconclusive"


def reduces(algebra: Algebra, s: StdPoly, F, caps: Caps | None = None) -> Reduction:
    res = snf(algebra, s, F, "all", caps)
    if res.inconclusive:
        return Reduction.INCONCLUSIVE
    rems = res.remainders
    has_zero = any(not r for r in rems)
    if has_zero and len(rems) == 1:
        return Reduction.STRONG
    if has_zero:
        return Reduction.WEAK_ONLY
    return Reduction.NONE


# ---------------------------------------------------------------- critical pairs


@dataclass
class CriticalPair:
    left: FMonomial
    right: FMonomial
    k: Scalar | None  # None when the leading coefficients have no ratio in K

    @property
    def has_ratio(self) -> bool:
        return self.k is not None


def _classes(fs: FSet, D: int, caps: Caps) -> list[tuple[ExpVec, list[FMonomial]]]:
    """Nonempty F-monomials of lm-degree <= D grouped by lm exponent, ascending."""
    groups: dict[ExpVec, list[FMonomial]] = {}
    for seq in fs.sequences_upto(D, caps):
        if seq:
            groups.setdefault(fs.lm_exp(seq), []).append(seq)
    key = fs.algebra.order.key
    return sorted(groups.items(), key=lambda kv: key(kv[0]))


def critical_pairs(algebra: Algebra, F, D: int, caps: Caps | None = None) -> list[CriticalPair]:
    """Every unordered pair of distinct F-monomials with equal lm and lm-degree <= D."""
    fs = _fset(algebra, F)
    caps = caps or Caps()
    classes = _classes(fs, D, caps)
    total = sum(len(seqs) * (len(seqs) - 1) // 2 for _, seqs in classes)
    if total > caps.max_pairs:
        raise CapsExceeded("max_pairs", caps.max_pairs)
    out = []
    for _, seqs in classes:
        for a in range(len(seqs)):
            for b in range(a + 1, len(seqs)):
                l, r = seqs[a], seqs[b]
                k = scalar_ratio(fs.lt_value(l).lc, fs.lt_value(r).lc)
                out.append(CriticalPair(l, r, k))
    return out


def t_polynomial(algebra: Algebra, F, pair: CriticalPair) -> StdPoly:
    fs = _fset(algebra, F)
    k = pair.k
    if k is None:
        k = scalar_ratio(fs.value(pair.left).lc, fs.value(pair.right).lc)
        if k is None:
            raise NoScalarRatio(f"no scalar ratio for pair {fs.name(pair.left)}, {fs.name(pair.right)}")
    return fs.value(pair.left) - fs.value(pair.right).scale(k)


# ---------------------------------------------------------------- SAGBI test


@dataclass
class VerifiedUpTo:
    D: int

    def __str__(self):
        return f"VerifiedUpTo({self.D})"


@dataclass
class Counterexample:
    pair: CriticalPair
    t: StdPoly
    remainder: StdPoly
    trace: ReductionTrace

    def __str__(self):
        return f"Counterexample(remainder={self.remainder})"


@dataclass
class Inconclusive:
    reason: str

    def __str__(self):
        return f"Inconclusive({self.reason})"


@dataclass
class SagbiReport:
    verdict: object
    stats: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)
    order: str = ""

    @property
    def verified(self) -> bool:
        return isinstance(self.verdict, VerifiedUpTo)

    @property
    def counterexample(self) -> bool:
        return isinstance(self.verdict, Counterexample)

    @property
    def inconclusive(self) -> bool:
        return isinstance(self.verdict, Inconclusive)


def _value_groups(fs: FSet, seqs: list[FMonomial]) -> list[list[FMonomial]]:
    """Partition sequences by K-proportionality of their values."""
    groups: dict[StdPoly, list[FMonomial]] = {}
    for seq in seqs:
        groups.setdefault(fs.value(seq).normalized(), []).append(seq)
    return list(groups.values())


def _first_route_exact(algebra: Algebra) -> bool:
    return algebra.order.degree_compatible and algebra.ring.is_field


def sagbi_test(algebra: Algebra, F, D: int, caps: Caps | None = None, method: str = "auto") -> SagbiReport:
    """Reduce the T-polynomial of every critical pair of lm-degree <= D.

    Pairs whose two values are K-proportional have T == 0 identically.  For the
    remaining pairs, T(m, m') is a nonzero K-multiple of T(rep(m), rep(m')) where
    rep picks the first sequence of each proportionality class, and reduction is
    K-linear, so one reduction per pair of classes decides all of them.

    ``method="exhaustive"`` explores every branch of every reduction.  With
    ``"auto"`` and a degree-compatible order over R == K one branch per
    T-polynomial is followed instead.  That is exact: if each T of lm-degree <= D
    reaches 0 along some branch, every nonzero element of the span of F-monomials
    of lm-degree <= D has a reducible leading term (induction on the height of a
    minimal representation), and every state of every branch lies in that span,
    so all branches end at 0.  A nonzero remainder on any branch refutes the
    property in both methods.
    """
    fs = _fset(algebra, F)
    caps = caps or Caps()
    if method not in ("auto", "exhaustive"):
        raise ValueError(f"unknown method {method!r}")
    single = method == "auto" and _first_route_exact(algebra)
    order = algebra.order.describe(algebra.generators)
    stats = {"pairs": 0, "zero_pairs": 0, "reductions": 0, "branches": 0, "classes": 0,
             "method": "single-branch" if single else "exhaustive"}
    warnings: list[str] = []
    inconclusive = None
    try:
        classes = _classes(fs, D, caps)
    except CapsExceeded as e:
        return SagbiReport(Inconclusive(str(e)), stats, warnings, order)
    for _exp, seqs in classes:
        if len(seqs) < 2:
            continue
        stats["classes"] += 1
        groups = _value_groups(fs, seqs)
        stats["pairs"] += len(seqs) * (len(seqs) - 1) // 2
        stats["zero_pairs"] += sum(len(g) * (len(g) - 1) // 2 for g in groups)
        # T(a, b) is a K-combination of T(0, a) and T(0, b), so one branch per
        # T against the first class suffices on the single-branch route
        pairs = [(0, b) for b in range(1, len(groups))] if single else \
            [(a, b) for a in range(len(groups)) for b in range(a + 1, len(groups))]
        for a, b in pairs:
            left, right = groups[a][0], groups[b][0]
            k = scalar_ratio(fs.value(left).lc, fs.value(right).lc)
            if k is None:
                warnings.append(f"NoScalarRatio for pair ({fs.name(left)}, {fs.name(right)})")
                continue
            if stats["reductions"] >= caps.max_pairs:
                return SagbiReport(Inconclusive("max_pairs"), stats, warnings, order)
            pair = CriticalPair(left, right, k)
            t = fs.value(left) - fs.value(right).scale(k)
            stats["reductions"] += 1
            if single:
                tr = _snf_first(fs, t, caps)
                stats["branches"] += len(tr.steps)
                bad = tr if tr.remainder else None
                cut = not tr.complete
            else:
                res = _snf_all(fs, t, caps, stop_on_nonzero=True)
                stats["branches"] += res.branches
                bad = next((x for x in res.traces if x.remainder), None)
                cut = res.inconclusive
            if bad is not None and bad.complete:
                return SagbiReport(Counterexample(pair, t, bad.remainder, bad), stats, warnings, order)
            if (cut or bad is not None) and inconclusive is None:
                inconclusive = f"caps hit while reducing T({fs.name(left)}, {fs.name(right)})"
    if inconclusive:
        return SagbiReport(Inconclusive(inconclusive), stats, warnings, order)
    return SagbiReport(VerifiedUpTo(D), stats, warnings, order)


@dataclass
class Adjoined:
    """An element added by completion: T(pair) reduced over the family at that time."""

    element: StdPoly
    pair: CriticalPair
    family_size: int
    trace: ReductionTrace


def sagbi_build(algebra: Algebra, F, D: int, max_iter: int = 10, caps: Caps | None = None):
    """Bounded completion.  Returns ``(G, report, adjoined)``.

    Each pass reduces the T-polynomial of every pair class up to D over the
    current family and adjoins nonzero remainders one at a time, so later
    remainders are already reduced against earlier ones.  A pass that adds
    nothing is confirmed with :func:`sagbi_test`.
    """
    caps = caps or Caps()
    order = algebra.order.describe(algebra.generators)
    G = list(F.F if isinstance(F, FSet) else F)
    adjoined: list[Adjoined] = []
    for it in range(max_iter):
        fs = FSet(algebra, G)
        added = 0
        try:
            classes = _classes(fs, D, caps)
        except CapsExceeded as e:
            return G, SagbiReport(Inconclusive(str(e)), {"iterations": it}, order=order), adjoined
        pending = []
        for _exp, seqs in classes:
            groups = _value_groups(fs, seqs) if len(seqs) > 1 else []
            for b in range(1, len(groups)):
                left, right = groups[0][0], groups[b][0]
                k = scalar_ratio(fs.value(left).lc, fs.value(right).lc)
                if k is not None:
                    pending.append((CriticalPair(left, right, k), fs.value(left) - fs.value(right).scale(k)))
        for pair, t in pending:
            cur = FSet(algebra, G) if added else fs
            tr = _snf_first(cur, t, caps)
            if tr.remainder:
                adjoined.append(Adjoined(tr.remainder, pair, len(G), tr))
                G.append(tr.remainder)
                added += 1
        if not added:
            report = sagbi_test(algebra, fs, D, caps)
            report.stats["iterations"] = it + 1
            if isinstance(report.verdict, Counterexample):
                v = report.verdict
                adjoined.append(Adjoined(v.remainder, v.pair, len(G), v.trace))
                G.append(v.remainder)
                continue
            return G, report, adjoined
    return G, SagbiReport(Inconclusive("max_iter"), {"iterations": max_iter}, order=order), adjoined


# ---------------------------------------------------------------- membership


@dataclass
class Member:
    trace: ReductionTrace


@dataclass
class NoReductionFound:
    remainders: list
    certified: bool
    note: str
    inconclusive: bool = False


def membership(algebra: Algebra, s: StdPoly, F, caps: Caps | None = None, report: SagbiReport | None = None):
    """Member(trace) if some branch reaches 0, otherwise NoReductionFound.

    Non-membership is certified only relative to a VerifiedUpTo(D) report for F
    with D >= deg(s).
    """
    fs = _fset(algebra, F)
    res = _snf_all(fs, s, caps or Caps())
    zero = next((t for t in res.traces if not t.remainder), None)
    if zero is not None:
        return Member(zero)
    if report is not None and isinstance(report.verdict, VerifiedUpTo) and report.verdict.D >= s.deg() and not res.inconclusive:
        note = f"certified by VerifiedUpTo({report.verdict.D})"
        certified = True
    else:
        note = "not certified: no SAGBI report covering deg(s)"
        certified = False
    return NoReductionFound(res.remainders, certified, note, res.inconclusive)


@dataclass
class Found:
    coefficients: list  # list of (Scalar, seq)


@dataclass
class NotInSpan:
    D: int


def span_membership(algebra: Algebra, s: StdPoly, F, D: int, caps: Caps | None = None):
    """Solve s = sum c_j value(m_j) over F-monomials m_j of lm-degree <= D."""
    fs = _fset(algebra, F)
    caps = caps or Caps()
    if s.is_zero():
        return Found([])
    seqs = fs.sequences_upto(D, caps)
    key = algebra.order.key

    def pivot(vec):
        return max(vec, key=lambda ab: (key(ab[0]), ab[1]))

    basis: dict = {}  # pivot -> (vector, combination)

    def reduce(vec, comb):
        vec = dict(vec)
        comb = dict(comb)
        while vec:
            p = pivot(vec)
            if p not in basis:
                return vec, comb, p
            bvec, bcomb = basis[p]
            f = vec[p]  # basis vectors have pivot coefficient 1
            for kk, c in bvec.items():
                v = vec.get(kk)
                nv = -f * c if v is None else v - f * c
                if nv:
                    vec[kk] = nv
                else:
                    vec.pop(kk, None)
            for j, c in bcomb.items():
                v = comb.get(j)
                nv = -f * c if v is None else v - f * c
                if nv:
                    comb[j] = nv
                else:
                    comb.pop(j, None)
        return vec, comb, None

    for j, seq in enumerate(seqs):
        vec, comb, p = reduce(dict(fs.value(seq).items()), {j: algebra.field.one})
        if p is not None:
            inv = vec[p].inverse()
            basis[p] = ({kk: c * inv for kk, c in vec.items()}, {i: c * inv for i, c in comb.items()})
    vec, comb, _ = reduce(dict(s.items()), {})
    if vec:
        return NotInSpan(D)
    # s - sum comb_j v_j == 0  =>  s == sum (-comb_j) v_j
    return Found([(-c, seqs[j]) for j, c in sorted(comb.items())])


def replay_combination(algebra: Algebra, F, coefficients) -> StdPoly:
    fs = _fset(algebra, F)
    total = algebra.zero
    for c, seq in coefficients:
        total = total + fs.value(seq).scale(c)
    return total


def height(algebra: Algebra, F, rep: Iterable) -> ExpVec:
    """Largest lm among the F-monomials of a sum representation [(k, seq), ...]."""
    fs = _fset(algebra, F)
    rep = list(rep)
    if not rep:
        raise EmptyRepresentation("height of an empty representation")
    key = algebra.order.key
    return max((fs.lm_exp(seq) for _k, seq in rep), key=key)
