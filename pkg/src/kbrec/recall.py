"""Turn rewrite joins into conversions over the initial equations.

A step with rule ``i`` is replaced by the two steps recorded in history
entry ``i``, instantiated at the step's position and substitution. Entry
steps refer to strictly smaller indices, so repeated expansion ends in
steps over the initial equations only.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Mapping, Tuple

from .completion import FROM, INVERSE, HistoryEntry
from .rewriting import EQUATION, LR, RL, Conversion, Equation, Join, Step, step_problem
from .terms import Term, TermError, Var, apply_subst, match_pairs, positions, replace_at, subterm_at, variables

DEFAULT_MAX_STEPS = 1_000_000


class RecallError(ValueError):
    pass


@dataclass(frozen=True)
class AuxiliaryRecord:
    index: int
    equation: Equation
    conversion: Conversion


def _e0_table(e0) -> Dict[int, Equation]:
    if isinstance(e0, Mapping):
        return dict(e0)
    return {e.index: e for e in e0}


def _sides(history: Mapping[int, HistoryEntry], e0: Mapping[int, Equation], j: int) -> Tuple[Term, Term]:
    if j in e0:
        return e0[j].lhs, e0[j].rhs
    if j not in history:
        raise RecallError(f"no history entry for index {j}")
    h = history[j]
    return h.left, h.right


def justify(sides: Tuple[Term, Term], a: Term, b: Term, prefer: str = LR):
    """Find (position, substitution, direction) rewriting a into b by `sides`."""
    for d in (prefer, RL if prefer == LR else LR):
        l, r = sides if d == LR else sides[::-1]
        names = variables(l) | variables(r)
        for p in positions(a):
            try:
                b_sub = subterm_at(b, p)
            except TermError:
                continue
            if replace_at(a, p, b_sub) != b:
                continue
            sigma = match_pairs([(l, subterm_at(a, p)), (r, b_sub)])
            if sigma is not None:
                return p, {x: v for x, v in sigma.items() if x in names}, d
    return None


def _halves(h: HistoryEntry, forward: bool):
    if forward:
        return [(h.left, h.middle, h.op1, h.ref1), (h.middle, h.right, h.op2, h.ref2)]
    return [(h.right, h.middle, INVERSE[h.op2], h.ref2), (h.middle, h.left, INVERSE[h.op1], h.ref1)]


def _prefer(op: str) -> str:
    return RL if op == FROM else LR


def _as_equation_step(e0: Mapping[int, Equation], st: Step) -> Step:
    for d in (st.dir, RL if st.dir == LR else LR):
        cand = Step(st.source, st.target, st.ref, EQUATION, d, st.pos, st.subst)
        if step_problem({}, e0, cand) is None:
            return cand
    raise RecallError(f"step {st} is not an instance of equation {st.ref}")


def expand_step(history: Mapping[int, HistoryEntry], e0, st: Step) -> Conversion:
    """Replace one step by the two steps of its history entry."""
    e0 = _e0_table(e0)
    if st.ref in e0:
        return Conversion(st.source, (_as_equation_step(e0, st),))
    h = history.get(st.ref)
    if h is None:
        raise RecallError(f"no history entry for index {st.ref}")
    sigma = st.subst
    src, tgt = subterm_at(st.source, st.pos), subterm_at(st.target, st.pos)
    candidates = (True, False) if st.dir == LR else (False, True)
    for forward in candidates:
        a, b = (h.left, h.right) if forward else (h.right, h.left)
        if apply_subst(sigma, a) == src and apply_subst(sigma, b) == tgt:
            break
    else:
        raise RecallError(f"entry {h} does not match step {st}")
    steps = []
    for a, b, op, ref in _halves(h, forward):
        if ref == 0 or a == b:
            continue
        if ref >= st.ref and ref not in e0:
            raise RecallError(f"entry {st.ref} refers to non-smaller index {ref}")
        found = justify(_sides(history, e0, ref), a, b, _prefer(op))
        if found is None:
            raise RecallError(f"entry {h.index}: {a} {op}{ref} {b} is not a step of {ref}")
        q, tau, d = found
        l, r = _sides(history, e0, ref)
        names = variables(l) | variables(r)
        rho = {y: apply_subst(sigma, tau.get(y, Var(y))) for y in sorted(names)}
        rho = {y: v for y, v in rho.items() if not (isinstance(v, Var) and v.name == y)}
        source = replace_at(st.source, st.pos, apply_subst(sigma, a))
        target = replace_at(st.source, st.pos, apply_subst(sigma, b))
        steps.append(Step(source, target, ref, EQUATION, d, st.pos + q, rho))
    return Conversion(st.source, tuple(steps))


def join_steps(join: Join) -> List[Step]:
    """The join read as one sequence: left steps, then right steps reversed."""
    return list(join.left) + [s.reversed() for s in reversed(join.right)]


def recall(history: Mapping[int, HistoryEntry], e0, join: Join, max_steps: int = DEFAULT_MAX_STEPS) -> Conversion:
    e0 = _e0_table(e0)
    steps = join_steps(join)
    start = steps[0].source if steps else join.meet
    out: List[Step] = []
    todo = list(reversed(steps))
    while todo:
        st = todo.pop()
        if st.ref in e0:
            out.append(_as_equation_step(e0, st))
            if len(out) > max_steps:
                raise RecallError(f"recalled conversion exceeds {max_steps} steps")
            continue
        sub = expand_step(history, e0, st).steps
        todo.extend(reversed(sub))
    return Conversion(start, tuple(out))


def rule_conversion(history: Mapping[int, HistoryEntry], e0, rule) -> Conversion:
    """An initial-equation conversion from a rule's lhs to its rhs."""
    step = Step(rule.lhs, rule.rhs, rule.index)
    return recall(history, e0, Join((step,), (), rule.rhs))


def export_auxiliary(history: Mapping[int, HistoryEntry], e0) -> List[AuxiliaryRecord]:
    """Each history entry as an auxiliary equation with a two-step proof.

    Records come out in increasing index order; every step refers to an
    initial equation or to an earlier record.
    """
    e0 = _e0_table(e0)
    records = []
    for i in sorted(history):
        h = history[i]
        steps = []
        for a, b, op, ref in _halves(h, True):
            if ref == 0 or a == b:
                continue
            if ref not in e0 and not (ref < i and ref in history):
                raise RecallError(f"history entry {i} refers forward to {ref}")
            found = justify(_sides(history, e0, ref), a, b, _prefer(op))
            if found is None:
                raise RecallError(f"entry {i}: {a} {op}{ref} {b} is not a step of {ref}")
            q, tau, d = found
            steps.append(Step(a, b, ref, EQUATION, d, q, tau))
        records.append(AuxiliaryRecord(i, Equation(i, h.left, h.right), Conversion(h.left, tuple(steps))))
    return records
