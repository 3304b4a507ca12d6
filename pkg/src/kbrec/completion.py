"""Recording completion: inference rules with a history, and a strategy loop.

Every equation and rule carries an index; every index carries a history
entry ``i: s o1^j u o2^k t`` stating how the object ``i: s ~ t`` arose from
the objects ``j`` and ``k`` via the middle term ``u``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .critical_pairs import CriticalPair, CriticalPairFuel, critical_pairs
from .order import UNORIENTABLE, Precedence
from .order import orient as orient_equation
from .rewriting import (
    DEFAULT_FUEL,
    ES,
    LR,
    TRS,
    Equation,
    FuelExhausted,
    Rule,
    Step,
    check_step,
    find_redex,
    normalize,
    rewrite_at,
)
from .terms import SEPARATOR, Term, innermost_positions, iter_vars, match, size

log = logging.getLogger(__name__)

TO = "->"
FROM = "<-"
EQ = "="
INVERSE = {TO: FROM, FROM: TO, EQ: EQ}

DEFAULT_MAX_INFERENCES = 1000


class InferenceError(ValueError):
    """An inference rule was applied outside its side conditions."""


class Unorientable(InferenceError):
    pass


@dataclass(frozen=True)
class HistoryEntry:
    index: int
    left: Term
    op1: str
    ref1: int
    middle: Term
    op2: str
    ref2: int
    right: Term

    def mirrored(self) -> "HistoryEntry":
        return HistoryEntry(
            self.index, self.right, INVERSE[self.op2], self.ref2, self.middle, INVERSE[self.op1], self.ref1, self.left
        )

    @property
    def refs(self) -> Tuple[int, int]:
        return self.ref1, self.ref2

    def __str__(self):
        return f"{self.index}: {self.left} {self.op1}{self.ref1} {self.middle} {self.op2}{self.ref2} {self.right}"


History = Dict[int, HistoryEntry]


@dataclass(frozen=True)
class State:
    equations: Tuple[Equation, ...]
    rules: TRS
    history: Mapping[int, HistoryEntry]
    next_index: int

    def equation(self, i: int) -> Equation:
        for e in self.equations:
            if e.index == i:
                return e
        raise InferenceError(f"no equation with index {i}")

    def rule(self, i: int) -> Rule:
        r = self.rules.get(i)
        if r is None:
            raise InferenceError(f"no rule with index {i}")
        return r

    def _with(self, equations=None, rules=None, history=None, next_index=None) -> "State":
        return State(
            self.equations if equations is None else tuple(equations),
            self.rules if rules is None else TRS(rules),
            self.history if history is None else history,
            self.next_index if next_index is None else next_index,
        )


def _reducing_step(trs: TRS, t: Term, by: Optional[int] = None, exclude: Optional[int] = None) -> Optional[Step]:
    if by is None:
        if exclude is not None:
            trs = TRS(r for r in trs if r.index != exclude)
        return find_redex(trs, t)
    rule = trs.get(by)
    if rule is None or rule.index == exclude:
        raise InferenceError(f"rule {by} is not available here")
    for p, sub in innermost_positions(t):
        sigma = match(rule.lhs, sub)
        if sigma is not None:
            return rewrite_at(t, p, rule, sigma)
    return None


def init(es: Iterable[Equation]) -> State:
    equations = []
    history: History = {}
    for i, e in enumerate(es, 1):
        for x in list(iter_vars(e.lhs)) + list(iter_vars(e.rhs)):
            if SEPARATOR in x:
                raise InferenceError(f"variable {x!r} uses the reserved character {SEPARATOR!r}")
        equations.append(Equation(i, e.lhs, e.rhs))
        history[i] = HistoryEntry(i, e.lhs, TO, i, e.rhs, EQ, 0, e.rhs)
    return State(tuple(equations), TRS(), history, len(equations) + 1)


def deduce(st: State, cp: CriticalPair) -> State:
    for step, target in ((cp.left_step, cp.left), (cp.right_step, cp.right)):
        if step.source != cp.peak or step.target != target or not check_step(st.rules, (), step):
            raise InferenceError(f"not a critical peak of the current rules: {cp}")
    m = st.next_index
    entry = HistoryEntry(m, cp.left, FROM, cp.left_step.ref, cp.peak, TO, cp.right_step.ref, cp.right)
    return st._with(
        equations=st.equations + (Equation(m, cp.left, cp.right),),
        history={**st.history, m: entry},
        next_index=m + 1,
    )


def orient(st: State, eq_index: int, prec: Precedence) -> State:
    e = st.equation(eq_index)
    direction = orient_equation(prec, e)
    if direction == UNORIENTABLE:
        raise Unorientable(f"cannot orient {e} with precedence [{prec}]")
    rest = [x for x in st.equations if x.index != eq_index]
    if direction == LR:
        return st._with(equations=rest, rules=st.rules.rules + (Rule(e.index, e.lhs, e.rhs),))
    history = dict(st.history)
    history[eq_index] = history[eq_index].mirrored()
    return st._with(equations=rest, rules=st.rules.rules + (Rule(e.index, e.rhs, e.lhs),), history=history)


def simplify(st: State, eq_index: int, side: str, by: Optional[int] = None) -> State:
    e = st.equation(eq_index)
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', not {side!r}")
    step = _reducing_step(st.rules, e.lhs if side == "left" else e.rhs, by)
    if step is None:
        raise InferenceError(f"{side}-hand side of {e} is irreducible")
    m = st.next_index
    u, l = step.target, step.ref
    if side == "left":
        new = Equation(m, u, e.rhs)
        entry = HistoryEntry(m, u, FROM, l, e.lhs, TO, eq_index, e.rhs)
    else:
        new = Equation(m, e.lhs, u)
        entry = HistoryEntry(m, e.lhs, TO, eq_index, e.rhs, TO, l, u)
    equations = [new if x.index == eq_index else x for x in st.equations]
    return st._with(equations=equations, history={**st.history, m: entry}, next_index=m + 1)


def delete(st: State, eq_index: int) -> State:
    e = st.equation(eq_index)
    if e.lhs != e.rhs:
        raise InferenceError(f"cannot delete non-trivial equation {e}")
    users = sorted(h.index for h in st.history.values() if h.index != eq_index and eq_index in h.refs)
    if users:
        raise InferenceError(f"history entries {users} still refer to equation {eq_index}")
    history = {k: v for k, v in st.history.items() if k != eq_index}
    return st._with(equations=[x for x in st.equations if x.index != eq_index], history=history)


def compose(st: State, rule_index: int, by: Optional[int] = None) -> State:
    r = st.rule(rule_index)
    step = _reducing_step(st.rules, r.rhs, by)
    if step is None:
        raise InferenceError(f"right-hand side of {r} is irreducible")
    m = st.next_index
    rules = [Rule(m, r.lhs, step.target) if x.index == rule_index else x for x in st.rules]
    entry = HistoryEntry(m, r.lhs, TO, rule_index, r.rhs, TO, step.ref, step.target)
    return st._with(rules=rules, history={**st.history, m: entry}, next_index=m + 1)


def collapse(st: State, rule_index: int, by: Optional[int] = None) -> State:
    r = st.rule(rule_index)
    if by == rule_index:
        raise InferenceError(f"rule {rule_index} cannot collapse itself")
    step = _reducing_step(st.rules, r.lhs, by, exclude=rule_index)
    if step is None:
        raise InferenceError(f"left-hand side of {r} is irreducible by the other rules")
    m = st.next_index
    entry = HistoryEntry(m, step.target, FROM, step.ref, r.lhs, TO, rule_index, r.rhs)
    return st._with(
        equations=st.equations + (Equation(m, step.target, r.rhs),),
        rules=[x for x in st.rules if x.index != rule_index],
        history={**st.history, m: entry},
        next_index=m + 1,
    )


def non_joinable_pairs(trs: TRS, fuel: int = DEFAULT_FUEL) -> List[CriticalPair]:
    out = []
    for cp in critical_pairs(trs):
        try:
            if normalize(trs, cp.left, fuel)[0] != normalize(trs, cp.right, fuel)[0]:
                out.append(cp)
        except FuelExhausted as e:
            raise CriticalPairFuel(cp, e) from e
    return out


def success_check(st: State, fuel: int = DEFAULT_FUEL) -> bool:
    """E is empty and the rules are locally confluent.

    Raises FuelExhausted when joinability cannot be decided.
    """
    return not st.equations and not non_joinable_pairs(st.rules, fuel)


def referenced_closure(history: Mapping[int, HistoryEntry], roots: Iterable[int]) -> set:
    seen = set()
    todo = list(roots)
    while todo:
        i = todo.pop()
        if i in seen or i not in history:
            continue
        seen.add(i)
        todo.extend(j for j in history[i].refs if j and j != i)
    return seen


def prune_history(history: Mapping[int, HistoryEntry], e0_indices: Iterable[int], rules: TRS) -> History:
    keep = set(e0_indices) | referenced_closure(history, (r.index for r in rules))
    return {i: history[i] for i in sorted(history) if i in keep}


def history_problems(st: State, e0_indices: Iterable[int]) -> List[str]:
    """Violations of the history well-formedness invariants (empty if none)."""
    e0 = set(e0_indices)
    problems = []
    sides = {e.index: (e.lhs, e.rhs) for e in st.equations}
    sides.update({r.index: (r.lhs, r.rhs) for r in st.rules})
    for i, h in st.history.items():
        if h.index != i:
            problems.append(f"entry stored under {i} has index {h.index}")
        if i in sides and (h.left, h.right) != sides[i]:
            problems.append(f"entry {i} does not match the sides of object {i}")
        if i in sides and i >= st.next_index:
            problems.append(f"index {i} is not below next_index {st.next_index}")
        for op, ref, a, b in ((h.op1, h.ref1, h.left, h.middle), (h.op2, h.ref2, h.middle, h.right)):
            if op not in INVERSE:
                problems.append(f"entry {i} has unknown operator {op!r}")
            if ref == 0:
                if op != EQ or a != b:
                    problems.append(f"entry {i} uses index 0 outside a reflexive step")
            elif i in e0:
                if ref != i:
                    problems.append(f"initial entry {i} refers to {ref}")
            elif not 0 < ref < i:
                problems.append(f"entry {i} refers to non-smaller index {ref}")
    for i in sides:
        if i not in st.history:
            problems.append(f"object {i} has no history entry")
    eq_idx = {e.index for e in st.equations}
    if eq_idx & set(st.rules.indices()):
        problems.append("an index is both an equation and a rule")
    return problems


@dataclass
class RunResult:
    success: bool
    rules: TRS
    history: History
    trace: List[Tuple[str, str, Optional[int]]]
    e0: ES
    prec: Precedence
    reason: Optional[str] = None
    state: Optional[State] = None

    def trace_lines(self) -> List[str]:
        return [f"{name} {affected}" + (f" -> {new}" if new is not None else "") for name, affected, new in self.trace]


class _Run:
    """Mutable driver around the immutable inference functions."""

    def __init__(self, es, prec, max_inferences, fuel, observer=None):
        self.state = init(es)
        self.e0 = self.state.equations
        self.prec = prec
        self.max_inferences = max_inferences
        self.fuel = fuel
        self.trace: List[Tuple[str, str, Optional[int]]] = []
        self.observer = observer

    def apply(self, name: str, affected, fn, *args, **kw) -> Optional[int]:
        if len(self.trace) >= self.max_inferences:
            raise _Limit(f"inference limit {self.max_inferences} reached")
        before = self.state.next_index
        self.state = fn(self.state, *args, **kw)
        new = before if self.state.next_index > before else None
        self.trace.append((name, str(affected), new))
        log.debug("%s %s -> %s", name, affected, new)
        if self.observer is not None:
            self.observer(name, self.state)
        return new

    def interreduce(self, fresh: set):
        changed = True
        while changed:
            changed = False
            for r in list(self.state.rules):
                if find_redex(self.state.rules, r.rhs) is not None:
                    m = self.apply("compose", r.index, compose, r.index)
                    fresh.discard(r.index)
                    fresh.add(m)
                    changed = True
                    break
        changed = True
        while changed:
            changed = False
            for r in list(self.state.rules):
                others = TRS(x for x in self.state.rules if x.index != r.index)
                if find_redex(others, r.lhs) is not None:
                    self.apply("collapse", r.index, collapse, r.index)
                    fresh.discard(r.index)
                    changed = True
                    break

    def deduce_all(self, pairs: Iterable[CriticalPair]):
        for cp in pairs:
            if cp.left != cp.right:
                self.apply("deduce", f"{cp.inner},{cp.outer}", deduce, cp)

    def process(self, e: Equation):
        i = e.index
        while True:
            e = self.state.equation(i)
            if find_redex(self.state.rules, e.lhs) is not None:
                i = self.apply("simplify-l", i, simplify, i, "left")
            elif find_redex(self.state.rules, e.rhs) is not None:
                i = self.apply("simplify-r", i, simplify, i, "right")
            else:
                break
        if e.lhs == e.rhs:
            self.apply("delete", i, delete, i)
            return
        direction = orient_equation(self.prec, e)
        if direction == UNORIENTABLE:
            raise Unorientable(f"cannot orient {e} with precedence [{self.prec}]")
        self.apply("orient-l" if direction == LR else "orient-r", i, orient, i, self.prec)
        fresh = {i}
        self.interreduce(fresh)
        live = set(self.state.rules.indices())
        self.deduce_all(critical_pairs(self.state.rules, involving=fresh & live))

    def run(self):
        while True:
            while self.state.equations:
                self.process(min(self.state.equations, key=lambda e: (size(e.lhs) + size(e.rhs), e.index)))
            pending = non_joinable_pairs(self.state.rules, self.fuel)
            if not pending:
                return
            self.deduce_all(pending)


class _Limit(RuntimeError):
    pass


def complete(
    es: Sequence[Equation],
    prec: Precedence = Precedence(),
    max_inferences: int = DEFAULT_MAX_INFERENCES,
    fuel: int = DEFAULT_FUEL,
    observer=None,
) -> RunResult:
    """Run recording completion with a fixed Huet-style strategy.

    Equations are processed smallest first (ties by index): simplified to normal form,
    deleted if trivial, otherwise oriented (left-to-right preferred); then
    rules are inter-reduced and the critical pairs of the new rules deduced.
    `observer(name, state)` is called after every inference.
    """
    runner = _Run(es, prec, max_inferences, fuel, observer)
    reason = None
    try:
        runner.run()
    except Unorientable as e:
        reason = f"unorientable: {e}"
    except _Limit as e:
        reason = f"limit: {e}"
    except FuelExhausted as e:
        reason = f"fuel: {e}"
    st = runner.state
    history = dict(sorted(st.history.items()))
    if reason is None:
        history = prune_history(history, (e.index for e in runner.e0), st.rules)
    return RunResult(reason is None, st.rules, history, runner.trace, runner.e0, prec, reason, st)
