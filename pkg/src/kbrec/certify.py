"""Independent checking of completion results, proofs and disproofs.

Nothing here trusts the prover: termination, critical pairs, normal forms
and every single step are recomputed from the certificate alone. The
completion run itself is never replayed, only its result is checked.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

from .certificate import (
    COMPLETION,
    DISPROOF,
    PROOF,
    STYLE_CONVERSION,
    STYLE_HISTORY,
    Certificate,
    ConversionSpec,
    Justification,
    StepSpec,
)
from .critical_pairs import critical_pairs
from .order import Precedence, non_decreasing_rule
from .rewriting import (
    DEFAULT_FUEL,
    EQUATION,
    LR,
    RULE,
    TRS,
    Conversion,
    Equation,
    FuelExhausted,
    Rule,
    Step,
    normalize,
    step_problem,
)
from .terms import SEPARATOR, Term, TermError, Var, apply_subst, format_position, replace_at


@dataclass(frozen=True)
class Failure:
    check: str
    subject: str
    reason: str
    resource: bool = False

    def __str__(self):
        return f"[{self.check}] {self.subject}: {self.reason}"


@dataclass(frozen=True)
class Verdict:
    accepted: bool
    failure: Optional[Failure] = None

    def __bool__(self):
        return self.accepted

    def __str__(self):
        return "ACCEPTED" if self.accepted else f"REJECTED {self.failure}"


ACCEPTED = Verdict(True)


class _Reject(Exception):
    def __init__(self, check: str, subject: str, reason: str, resource: bool = False):
        super().__init__(reason)
        self.failure = Failure(check, subject, reason, resource)


def _verdict(fn, *args) -> Verdict:
    try:
        fn(*args)
    except _Reject as r:
        return Verdict(False, r.failure)
    return ACCEPTED


def _nf(trs: TRS, t: Term, fuel: int, check: str, subject: str) -> Term:
    try:
        return normalize(trs, t, fuel)[0]
    except FuelExhausted as e:
        raise _Reject(check, subject, f"certifier resource limit: {e}", resource=True) from None


def replay(start: Term, specs: Sequence[StepSpec], rules: Mapping[int, Rule], eqs: Mapping[int, Equation], check: str, subject: str) -> Conversion:
    """Rebuild a conversion from step specifications, validating every step."""
    current = start
    steps = []
    for n, sp in enumerate(specs):
        where = f"{subject}, step {n}"
        table = rules if sp.kind == RULE else eqs
        obj = table.get(sp.ref)
        if obj is None:
            raise _Reject(check, where, f"no {sp.kind} with index {sp.ref} is available")
        contractum = obj.rhs if sp.dir == LR else obj.lhs
        try:
            target = replace_at(current, sp.pos, apply_subst(sp.subst, contractum))
        except TermError as e:
            raise _Reject(check, where, str(e)) from None
        st = Step(current, target, sp.ref, sp.kind, sp.dir, tuple(sp.pos), dict(sp.subst))
        why = step_problem(rules, eqs, st)
        if why:
            raise _Reject(check, where, why)
        steps.append(st)
        current = target
    return Conversion(start, tuple(steps))


def _check_convergence(rules: TRS, prec: Precedence, fuel: int):
    bad = non_decreasing_rule(prec, rules)
    if bad is not None:
        raise _Reject("termination", f"rule {bad}", "left-hand side is not LPO-greater than right-hand side")
    for cp in critical_pairs(rules):
        subject = f"critical pair of rules {cp.inner} and {cp.outer} at {format_position(cp.pos)}"
        l = _nf(rules, cp.left, fuel, "local-confluence", subject)
        r = _nf(rules, cp.right, fuel, "local-confluence", subject)
        if l != r:
            raise _Reject("local-confluence", subject, f"{cp} is not joinable: normal forms {l} and {r}")


def verify_convergence(rules: TRS, prec: Precedence, fuel: int = DEFAULT_FUEL) -> Verdict:
    return _verdict(_check_convergence, TRS(rules), prec, fuel)


def _check_e_in_r(e0: Iterable[Equation], rules: TRS, fuel: int):
    for e in sorted(e0, key=lambda e: e.index):
        subject = f"equation {e}"
        l = _nf(rules, e.lhs, fuel, "E-subset-R", subject)
        r = _nf(rules, e.rhs, fuel, "E-subset-R", subject)
        if l != r:
            raise _Reject("E-subset-R", subject, f"normal forms differ: {l} vs {r}")


def verify_E_subset_R(e0: Iterable[Equation], rules: TRS, fuel: int = DEFAULT_FUEL) -> Verdict:
    return _verdict(_check_e_in_r, e0, TRS(rules), fuel)


def _check_conversion_spec(conv: ConversionSpec, eqs: Mapping[int, Equation], lhs: Term, rhs: Term, check: str, subject: str):
    if conv.start != lhs:
        raise _Reject(check, subject, f"conversion starts at {conv.start}, expected {lhs}")
    for n, sp in enumerate(conv.steps):
        if sp.kind != EQUATION:
            raise _Reject(check, f"{subject}, step {n}", f"{sp.kind} step where an equation step is required")
    end = replay(conv.start, conv.steps, {}, eqs, check, subject).end
    if end != rhs:
        raise _Reject(check, subject, f"conversion ends at {end}, expected {rhs}")


def _check_r_in_e(rules: TRS, e0: Sequence[Equation], justification: Optional[Justification]):
    check = "R-subset-E"
    eqs = {e.index: e for e in e0}
    if justification is None:
        raise _Reject(check, "justification", "missing")
    if justification.style == STYLE_CONVERSION:
        convs: Dict[int, ConversionSpec] = {}
        for rc in justification.conversions:
            if rc.rule in convs:
                raise _Reject(check, f"conversion for rule {rc.rule}", "duplicate")
            if rules.get(rc.rule) is None:
                raise _Reject(check, f"conversion for rule {rc.rule}", "no such rule")
            convs[rc.rule] = rc.conversion
        for r in rules:
            if r.index not in convs:
                raise _Reject(check, f"rule {r}", "no conversion given")
            _check_conversion_spec(convs[r.index], eqs, r.lhs, r.rhs, check, f"conversion for rule {r.index}")
        return
    if justification.style != STYLE_HISTORY:
        raise _Reject(check, "justification", f"unknown style {justification.style!r}")
    table = dict(eqs)
    verified: Dict[int, Tuple[Term, Term]] = {}
    last = 0
    for rec in justification.records:
        subject = f"record {rec.index}"
        if rec.index <= last:
            raise _Reject(check, subject, f"records out of order (after {last})")
        last = rec.index
        if rec.index in eqs and (rec.lhs, rec.rhs) not in ((eqs[rec.index].lhs, eqs[rec.index].rhs), (eqs[rec.index].rhs, eqs[rec.index].lhs)):
            raise _Reject(check, subject, "sides differ from the initial equation with the same index")
        for n, sp in enumerate(rec.conversion.steps):
            if sp.ref not in table:
                raise _Reject(check, f"{subject}, step {n}", f"forward reference to {sp.ref}")
        _check_conversion_spec(rec.conversion, table, rec.lhs, rec.rhs, check, subject)
        verified[rec.index] = (rec.lhs, rec.rhs)
        table.setdefault(rec.index, Equation(rec.index, rec.lhs, rec.rhs))
    for r in rules:
        if verified.get(r.index) != (r.lhs, r.rhs):
            raise _Reject(check, f"rule {r}", "no verified record with these sides")


def verify_R_subset_E(rules: TRS, e0: Sequence[Equation], justification: Optional[Justification]) -> Verdict:
    return _verdict(_check_r_in_e, TRS(rules), tuple(e0), justification)


def _terms_of(c: Certificate):
    for e in c.equations:
        yield f"equation {e.index}", e.lhs
        yield f"equation {e.index}", e.rhs
    cl = c.claim
    for r in cl.rules or ():
        yield f"rule {r.index}", r.lhs
        yield f"rule {r.index}", r.rhs
    if cl.goal:
        yield "goal", cl.goal[0]
        yield "goal", cl.goal[1]
    convs = []
    if cl.conversion:
        convs.append(("claim conversion", cl.conversion.start, cl.conversion.steps))
    if cl.join:
        yield "join meet", cl.join.meet
        convs.append(("join left", None, cl.join.left))
        convs.append(("join right", None, cl.join.right))
    j = c.justification
    if j is not None:
        for rc in j.conversions:
            convs.append((f"conversion for rule {rc.rule}", rc.conversion.start, rc.conversion.steps))
        for rec in j.records:
            yield f"record {rec.index}", rec.lhs
            yield f"record {rec.index}", rec.rhs
            convs.append((f"record {rec.index}", rec.conversion.start, rec.conversion.steps))
    for subject, start, steps in convs:
        if start is not None:
            yield subject, start
        for n, sp in enumerate(steps):
            for v in sp.subst.values():
                yield f"{subject}, step {n}", v


def _check_signature(c: Certificate):
    arity: Dict[str, int] = {}
    for s in c.signature:
        if s.name in arity:
            raise _Reject("signature", s.name, "declared twice")
        arity[s.name] = s.arity
    for subject, t in _terms_of(c):
        stack = [t]
        while stack:
            u = stack.pop()
            if isinstance(u, Var):
                if SEPARATOR in u.name:
                    raise _Reject("signature", subject, f"variable {u.name!r} uses reserved {SEPARATOR!r}")
                continue
            if arity.get(u.fun) != len(u.args):
                raise _Reject("signature", subject, f"symbol {u.fun}/{len(u.args)} is not in the signature")
            stack.extend(u.args)


def _check_unique(objs, what: str):
    seen = set()
    for o in objs:
        if o.index in seen:
            raise _Reject("indices", f"{what} {o.index}", "duplicate index")
        seen.add(o.index)


def _completion_checks(c: Certificate, fuel: int) -> TRS:
    cl = c.claim
    if cl.rules is None or cl.precedence is None:
        raise _Reject("claim", cl.kind, "rules and precedence are required")
    _check_unique(cl.rules, "rule")
    rules = TRS(cl.rules)
    _check_convergence(rules, cl.precedence, fuel)
    _check_e_in_r(c.equations, rules, fuel)
    _check_r_in_e(rules, c.equations, c.justification)
    return rules


def _check_certificate(c: Certificate, fuel: int):
    _check_signature(c)
    _check_unique(c.equations, "equation")
    cl = c.claim
    eqs = {e.index: e for e in c.equations}
    if cl.kind == COMPLETION:
        _completion_checks(c, fuel)
        return
    if cl.goal is None:
        raise _Reject("claim", cl.kind, "goal is required")
    s, t = cl.goal
    if cl.kind == PROOF:
        if cl.conversion is None and cl.rules is None:
            raise _Reject("claim", "proof", "neither a conversion nor a rewrite system is given")
        if cl.conversion is not None:
            _check_conversion_spec(cl.conversion, eqs, s, t, "proof", "claim conversion")
        if cl.rules is not None:
            rules = _completion_checks(c, fuel)
            table = {r.index: r for r in rules}
            if cl.join is not None:
                for side, start, specs in (("left", s, cl.join.left), ("right", t, cl.join.right)):
                    end = replay(start, specs, table, {}, "proof", f"join {side}").end
                    if end != cl.join.meet:
                        raise _Reject("proof", f"join {side}", f"ends at {end}, not at {cl.join.meet}")
            else:
                ns = _nf(rules, s, fuel, "proof", "goal lhs")
                nt = _nf(rules, t, fuel, "proof", "goal rhs")
                if ns != nt:
                    raise _Reject("proof", "goal", f"normal forms differ: {ns} vs {nt}")
        return
    if cl.kind == DISPROOF:
        rules = _completion_checks(c, fuel)
        ns = _nf(rules, s, fuel, "disproof", "goal lhs")
        nt = _nf(rules, t, fuel, "disproof", "goal rhs")
        if ns == nt:
            raise _Reject("disproof", "goal", f"both sides normalize to {ns}")
        return
    raise _Reject("claim", cl.kind, "unknown claim kind")


def verify_certificate(c: Certificate, fuel: int = DEFAULT_FUEL) -> Verdict:
    return _verdict(_check_certificate, c, fuel)
