"""Overlaps, critical pairs, and a brute-force local-confluence oracle.

Rules are renamed apart by prefixing their variables with ``1#`` (inner
rule) and ``2#`` (outer rule). User variables never contain ``#``, so the
renamed variable sets are disjoint whatever names the rules use.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Dict, Iterable, List, Optional, Sequence

from .rewriting import DEFAULT_FUEL, TRS, FuelExhausted, Rule, Step, all_steps, normalize, rewrite_at
from .terms import (
    App,
    Position,
    Substitution,
    Symbol,
    Term,
    Var,
    apply_subst,
    clean_renaming,
    function_positions,
    match_pairs,
    rename_with_prefix,
    replace_at,
    subterm_at,
    symbols,
    unify,
    variables,
)

INNER_PREFIX = "1#"
OUTER_PREFIX = "2#"


@dataclass(frozen=True)
class Overlap:
    outer: int
    inner: int
    pos: Position
    mgu: Substitution


@dataclass(frozen=True)
class CriticalPair:
    peak: Term
    left: Term
    right: Term
    left_step: Step
    right_step: Step

    @property
    def inner(self) -> int:
        return self.left_step.ref

    @property
    def outer(self) -> int:
        return self.right_step.ref

    @property
    def pos(self) -> Position:
        return self.left_step.pos

    def __str__(self):
        return f"{self.left} <– {self.peak} –> {self.right}"


class CriticalPairFuel(FuelExhausted):
    def __init__(self, pair: CriticalPair, cause: FuelExhausted):
        super().__init__(cause.term, cause.fuel)
        self.pair = pair


def rename_rule(rule: Rule, prefix: str) -> Rule:
    return Rule(rule.index, rename_with_prefix(rule.lhs, prefix), rename_with_prefix(rule.rhs, prefix))


def rules_are_variants(a: Rule, b: Rule) -> bool:
    return (
        match_pairs([(a.lhs, b.lhs), (a.rhs, b.rhs)]) is not None
        and match_pairs([(b.lhs, a.lhs), (b.rhs, a.rhs)]) is not None
    )


def _rule_pairs(trs: TRS, involving: Optional[Iterable[int]]):
    wanted = None if involving is None else set(involving)
    for outer in trs:
        for inner in trs:
            if wanted is None or inner.index in wanted or outer.index in wanted:
                yield outer, inner


def overlaps(trs: TRS, involving: Optional[Iterable[int]] = None) -> List[Overlap]:
    """All overlaps of inner rules into non-variable positions of outer lhs's.

    Order: outer rule, then inner rule (both in TRS order), then position in
    pre-order. With `involving`, only pairs touching those indices.
    """
    out = []
    for outer, inner in _rule_pairs(trs, involving):
        o = rename_rule(outer, OUTER_PREFIX)
        i = rename_rule(inner, INNER_PREFIX)
        for p in function_positions(o.lhs):
            if not p and rules_are_variants(outer, inner):
                continue
            sigma = unify(subterm_at(o.lhs, p), i.lhs)
            if sigma is not None:
                out.append(Overlap(outer.index, inner.index, p, sigma))
    return out


def _unprefixed(sigma: Substitution, rule: Rule, prefix: str) -> Substitution:
    """Express sigma (over prefixed variables) over the rule's own variables."""
    out = {}
    for x in sorted(variables(rule.lhs) | variables(rule.rhs)):
        out[x] = sigma.get(prefix + x, Var(prefix + x))
    return out


def _rename_step(st: Step, rho: Dict[str, Term]) -> Step:
    subst = {x: apply_subst(rho, v) for x, v in st.subst.items()}
    subst = {x: v for x, v in subst.items() if not (isinstance(v, Var) and v.name == x)}
    return Step(apply_subst(rho, st.source), apply_subst(rho, st.target), st.ref, st.kind, st.dir, st.pos, subst)


def critical_pair(trs: TRS, ov: Overlap) -> CriticalPair:
    outer, inner = trs.get(ov.outer), trs.get(ov.inner)
    o = rename_rule(outer, OUTER_PREFIX)
    i = rename_rule(inner, INNER_PREFIX)
    sigma = ov.mgu
    peak = apply_subst(sigma, o.lhs)
    left_step = rewrite_at(peak, ov.pos, inner, _unprefixed(sigma, inner, INNER_PREFIX))
    right_step = rewrite_at(peak, (), outer, _unprefixed(sigma, outer, OUTER_PREFIX))
    assert left_step.target == replace_at(peak, ov.pos, apply_subst(sigma, i.rhs))
    rho = clean_renaming([peak, left_step.target, right_step.target])
    left_step = _rename_step(left_step, rho)
    right_step = _rename_step(right_step, rho)
    return CriticalPair(left_step.source, left_step.target, right_step.target, left_step, right_step)


def critical_pairs(trs: TRS, involving: Optional[Iterable[int]] = None) -> List[CriticalPair]:
    return [critical_pair(trs, ov) for ov in overlaps(trs, involving)]


@dataclass(frozen=True)
class JoinabilityVerdict:
    joinable: bool
    pair: Optional[CriticalPair] = None
    checked: int = 0


def all_cps_joinable(trs: TRS, fuel: int = DEFAULT_FUEL) -> JoinabilityVerdict:
    checked = 0
    for cp in critical_pairs(trs):
        try:
            left = normalize(trs, cp.left, fuel)[0]
            right = normalize(trs, cp.right, fuel)[0]
        except FuelExhausted as e:
            raise CriticalPairFuel(cp, e) from e
        checked += 1
        if left != right:
            return JoinabilityVerdict(False, cp, checked)
    return JoinabilityVerdict(True, None, checked)


# Brute-force oracle -------------------------------------------------------

DEFAULT_ORACLE_DEPTH = 4
DEFAULT_ORACLE_POOL = ("x", "y", "z")
DEFAULT_MAX_PEAKS = 200_000


class ResourceLimit(RuntimeError):
    def __init__(self, message: str, **counts):
        super().__init__(f"{message} ({', '.join(f'{k}={v}' for k, v in counts.items())})")
        self.counts = counts


@dataclass(frozen=True)
class Peak:
    top: Term
    left: Step
    right: Step


@dataclass(frozen=True)
class OracleVerdict:
    locally_confluent: bool
    peak: Optional[Peak]
    terms: int
    peaks: int


def trs_signature(trs: TRS) -> List[Symbol]:
    sig = set()
    for r in trs:
        sig |= symbols(r.lhs) | symbols(r.rhs)
    return sorted(sig, key=lambda s: (s.arity, s.name))


def count_terms(signature: Sequence[Symbol], pool: Sequence[str], depth: int) -> int:
    n = 0
    for _ in range(depth):
        n = len(pool) + sum(n ** s.arity if s.arity else 1 for s in signature)
    return n


def enumerate_terms(signature: Sequence[Symbol], pool: Sequence[str], depth: int) -> List[Term]:
    """All terms of depth at most `depth` over the signature and variable pool."""
    level: List[Term] = []
    for _ in range(depth):
        nxt: List[Term] = [Var(x) for x in pool]
        for s in signature:
            if s.arity == 0:
                nxt.append(App(s.name))
            else:
                nxt.extend(App(s.name, args) for args in product(level, repeat=s.arity))
        level = nxt
    return level


def local_confluence_oracle(
    trs: TRS,
    depth: int = DEFAULT_ORACLE_DEPTH,
    pool: Sequence[str] = DEFAULT_ORACLE_POOL,
    max_peaks: int = DEFAULT_MAX_PEAKS,
    terms: Optional[Iterable[Term]] = None,
    signature: Optional[Sequence[Symbol]] = None,
    fuel: int = DEFAULT_FUEL,
) -> OracleVerdict:
    """Check every one-step peak t1 <- u -> t2 over a finite universe of u.

    The universe is every term up to `depth` over `pool`, or `terms` when
    given. Exceeding `max_peaks` (or a universe larger than that) raises
    ResourceLimit instead of returning a verdict.
    """
    if terms is None:
        sig = trs_signature(trs) if signature is None else list(signature)
        n = count_terms(sig, pool, depth)
        if n > max_peaks:
            raise ResourceLimit("term universe too large", terms=n, limit=max_peaks)
        terms = enumerate_terms(sig, pool, depth)
    nf_cache: Dict[Term, Term] = {}

    def nf(t: Term) -> Term:
        if t not in nf_cache:
            nf_cache[t] = normalize(trs, t, fuel)[0]
        return nf_cache[t]

    n_terms = n_peaks = 0
    for u in terms:
        n_terms += 1
        steps = all_steps(trs, u)
        for a, b in combinations(steps, 2):
            if a.target == b.target:
                continue
            n_peaks += 1
            if n_peaks > max_peaks:
                raise ResourceLimit("too many peaks", terms=n_terms, peaks=n_peaks, limit=max_peaks)
            if nf(a.target) != nf(b.target):
                return OracleVerdict(False, Peak(u, a, b), n_terms, n_peaks)
    return OracleVerdict(True, None, n_terms, n_peaks)
