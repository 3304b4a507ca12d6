"""Rewrite rules, equations, justified steps, normalization and joins."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from .terms import (
    App,
    Position,
    Substitution,
    Term,
    TermError,
    Var,
    apply_subst,
    format_position,
    match,
    positions,
    replace_at,
    subterm_at,
    variables,
)

DEFAULT_FUEL = 10_000

RULE = "rule"
EQUATION = "equation"
LR = "lr"
RL = "rl"


class FuelExhausted(RuntimeError):
    """Normalization ran out of steps; the system may be nonterminating."""

    def __init__(self, term: Term, fuel: int):
        super().__init__(f"no normal form of {term} within {fuel} steps (possibly nonterminating)")
        self.term = term
        self.fuel = fuel


@dataclass(frozen=True)
class Rule:
    index: int
    lhs: Term
    rhs: Term

    def __str__(self):
        return f"{self.index}: {self.lhs} -> {self.rhs}"


@dataclass(frozen=True)
class Equation:
    index: int
    lhs: Term
    rhs: Term

    def __str__(self):
        return f"{self.index}: {self.lhs} = {self.rhs}"


ES = Tuple[Equation, ...]


class TRS:
    """An immutable sequence of rules with pairwise distinct indices."""

    def __init__(self, rules: Iterable[Rule] = ()):
        self.rules: Tuple[Rule, ...] = tuple(rules)
        self._by_index: Dict[int, Rule] = {}
        for r in self.rules:
            if r.index in self._by_index:
                raise ValueError(f"duplicate rule index {r.index}")
            self._by_index[r.index] = r

    def __iter__(self):
        return iter(self.rules)

    def __len__(self):
        return len(self.rules)

    def __eq__(self, other):
        return isinstance(other, TRS) and self.rules == other.rules

    def __hash__(self):
        return hash(self.rules)

    def __repr__(self):
        return f"TRS({list(self.rules)!r})"

    def get(self, index: int) -> Optional[Rule]:
        return self._by_index.get(index)

    def indices(self):
        return [r.index for r in self.rules]

    @cached_property
    def _heads(self):
        by_head: Dict[Tuple[str, int], List[Rule]] = {}
        var_rules: List[Rule] = []
        for r in sorted(self.rules, key=lambda r: r.index):
            if isinstance(r.lhs, Var):
                var_rules.append(r)
            else:
                by_head.setdefault((r.lhs.fun, len(r.lhs.args)), []).append(r)
        if var_rules:
            for key, rs in by_head.items():
                by_head[key] = sorted(rs + var_rules, key=lambda r: r.index)
        return by_head, var_rules

    def candidates(self, t: Term) -> List[Rule]:
        """Rules that might rewrite t at the root, lowest index first."""
        by_head, var_rules = self._heads
        if isinstance(t, Var):
            return var_rules
        return by_head.get((t.fun, len(t.args)), var_rules)


@dataclass(frozen=True)
class Step:
    source: Term
    target: Term
    ref: int
    kind: str = RULE
    dir: str = LR
    pos: Position = ()
    subst: Substitution = field(default_factory=dict)

    def reversed(self) -> "Step":
        """The same rewrite read backwards, as an equation step."""
        return Step(self.target, self.source, self.ref, EQUATION, RL if self.dir == LR else LR, self.pos, self.subst)

    def __str__(self):
        arrow = {RULE: "->", EQUATION: "="}[self.kind]
        d = "" if self.dir == LR else "^-1"
        return f"{self.source} {arrow}[{self.ref}{d} @ {format_position(self.pos)}] {self.target}"


@dataclass(frozen=True)
class Conversion:
    start: Term
    steps: Tuple[Step, ...] = ()

    @property
    def end(self) -> Term:
        return self.steps[-1].target if self.steps else self.start

    def __len__(self):
        return len(self.steps)


@dataclass(frozen=True)
class Join:
    left: Tuple[Step, ...]
    right: Tuple[Step, ...]
    meet: Term


def rewrite_at(t: Term, p: Position, rule: Rule, sigma: Substitution) -> Step:
    target = replace_at(t, p, apply_subst(sigma, rule.rhs))
    return Step(t, target, rule.index, RULE, LR, p, sigma)


def _find(trs: TRS, t: Term, normal: set):
    if t in normal:
        return None
    if isinstance(t, App):
        for i, a in enumerate(t.args, 1):
            found = _find(trs, a, normal)
            if found is not None:
                pos, rule, sigma = found
                return (i,) + pos, rule, sigma
    for rule in trs.candidates(t):
        sigma = match(rule.lhs, t)
        if sigma is not None:
            return (), rule, sigma
    normal.add(t)
    return None


def find_redex(trs: TRS, t: Term, normal: Optional[set] = None) -> Optional[Step]:
    """Leftmost-innermost redex, contracted with the lowest-index rule.

    `normal` is an optional cache of subterms already known to be normal.
    """
    found = _find(trs, t, set() if normal is None else normal)
    if found is None:
        return None
    return rewrite_at(t, found[0], found[1], found[2])


def normalize(trs: TRS, t: Term, fuel: int = DEFAULT_FUEL) -> Tuple[Term, List[Step]]:
    start = t
    trace: List[Step] = []
    normal: set = set()
    while True:
        st = find_redex(trs, t, normal)
        if st is None:
            return t, trace
        if len(trace) >= fuel:
            raise FuelExhausted(start, fuel)
        trace.append(st)
        t = st.target


def normal_form(trs: TRS, t: Term, fuel: int = DEFAULT_FUEL) -> Term:
    return normalize(trs, t, fuel)[0]


def all_steps(trs: TRS, t: Term) -> List[Step]:
    """Every one-step reduct of t, by position (pre-order) then rule index."""
    out = []
    for p in positions(t):
        sub = subterm_at(t, p)
        for rule in trs.candidates(sub):
            sigma = match(rule.lhs, sub)
            if sigma is not None:
                out.append(rewrite_at(t, p, rule, sigma))
    return out


def normalize_randomly(trs: TRS, t: Term, rng, fuel: int = DEFAULT_FUEL) -> Tuple[Term, List[Step]]:
    """Normalize by picking a uniformly random redex at every step."""
    trace: List[Step] = []
    while True:
        choices = all_steps(trs, t)
        if not choices:
            return t, trace
        if len(trace) >= fuel:
            raise FuelExhausted(t, fuel)
        st = rng.choice(choices)
        trace.append(st)
        t = st.target


def joinable(trs: TRS, s: Term, t: Term, fuel: int = DEFAULT_FUEL) -> Optional[Join]:
    s_nf, left = normalize(trs, s, fuel)
    t_nf, right = normalize(trs, t, fuel)
    if s_nf != t_nf:
        return None
    return Join(tuple(left), tuple(right), s_nf)


def by_index(objs) -> Dict[int, object]:
    """Index table of rules or equations; mappings are taken as they are."""
    if isinstance(objs, Mapping):
        return dict(objs)
    return {o.index: o for o in objs}


def _sides(obj, direction: str):
    return (obj.lhs, obj.rhs) if direction == LR else (obj.rhs, obj.lhs)


def step_problem(rules, eqs, st: Step) -> Optional[str]:
    """Why `st` is not a valid step, or None if it is."""
    table = rules if st.kind == RULE else eqs
    if st.kind not in (RULE, EQUATION):
        return f"unknown step kind {st.kind!r}"
    if st.dir not in (LR, RL):
        return f"unknown direction {st.dir!r}"
    if st.kind == RULE and st.dir != LR:
        return f"rule {st.ref} used right-to-left"
    obj = table.get(st.ref) if isinstance(table, (dict, TRS)) else by_index(table).get(st.ref)
    if obj is None:
        return f"no {st.kind} with index {st.ref}"
    l, r = _sides(obj, st.dir)
    extra = set(st.subst) - variables(l) - variables(r)
    if extra:
        return f"substitution binds {sorted(extra)} outside {st.kind} {st.ref}"
    if any(isinstance(v, Var) and v.name == x for x, v in st.subst.items()):
        return "substitution contains an identity binding"
    try:
        redex = subterm_at(st.source, st.pos)
    except TermError as e:
        return str(e)
    if redex != apply_subst(st.subst, l):
        return f"{st.kind} {st.ref} does not match {redex} at {format_position(st.pos)}"
    if st.target != replace_at(st.source, st.pos, apply_subst(st.subst, r)):
        return f"target {st.target} is not the contractum of {st.kind} {st.ref}"
    return None


def check_step(rules, eqs, st: Step) -> bool:
    return step_problem(rules, eqs, st) is None


def conversion_problem(eqs, conv: Conversion, s: Term, t: Term) -> Optional[str]:
    if conv.start != s:
        return f"conversion starts at {conv.start}, expected {s}"
    table = by_index(eqs)
    current = s
    for n, st in enumerate(conv.steps):
        if st.kind != EQUATION:
            return f"step {n} is a {st.kind} step"
        if st.source != current:
            return f"step {n} does not continue from {current}"
        why = step_problem({}, table, st)
        if why:
            return f"step {n}: {why}"
        current = st.target
    if current != t:
        return f"conversion ends at {current}, expected {t}"
    return None


def check_conversion(eqs, conv: Conversion, s: Term, t: Term) -> bool:
    return conversion_problem(eqs, conv, s, t) is None
