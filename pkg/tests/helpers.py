"""Random generators shared by the property and acceptance tests."""

import random
from typing import List, Tuple

from kbrec.order import Precedence, lpo_gt
from kbrec.rewriting import EQUATION, LR, RL, TRS, Conversion, Rule, Step
from kbrec.terms import Term, Var, apply_subst, match, positions, replace_at, subterm_at, variables

from conftest import random_term

RANDOM_SIG = (("a", 0), ("b", 0), ("f", 1), ("g", 1), ("h", 2))
NAMES = ("x", "y", "z")


def random_precedence(rng: random.Random) -> Precedence:
    names = [f for f, _ in RANDOM_SIG]
    rng.shuffle(names)
    return Precedence.from_pairs(zip(names, names[1:]))


def _rhs_for(rng: random.Random, lhs: Term, depth: int) -> Term:
    names = sorted(variables(lhs))
    if not names:
        return random_term(rng, depth, RANDOM_SIG, ())
    if rng.random() < 0.3:
        return Var(rng.choice(names))
    ps = [p for p in positions(lhs) if p]
    if ps and rng.random() < 0.4:
        return subterm_at(lhs, rng.choice(ps))
    return random_term(rng, depth, RANDOM_SIG, names)


def random_terminating_trs(rng: random.Random, max_rules: int = 4, depth: int = 3) -> Tuple[TRS, Precedence]:
    """A random TRS of at most `max_rules` rules, each decreasing in LPO."""
    prec = random_precedence(rng)
    rules: List[Rule] = []
    target = rng.randint(1, max_rules)
    tries = 0
    while len(rules) < target and tries < 500:
        tries += 1
        lhs = random_term(rng, depth, RANDOM_SIG, NAMES)
        if isinstance(lhs, Var):
            continue
        rhs = _rhs_for(rng, lhs, depth)
        if lpo_gt(prec, lhs, rhs):
            rules.append(Rule(len(rules) + 1, lhs, rhs))
    return TRS(rules), prec


def random_walk(rng: random.Random, eqs, start: Term, length: int) -> Conversion:
    """A random conversion from `start` using equations in both directions."""
    steps = []
    t = start
    for _ in range(length):
        options = []
        for e in eqs:
            for d in (LR, RL):
                l, r = (e.lhs, e.rhs) if d == LR else (e.rhs, e.lhs)
                if isinstance(l, Var) or not variables(r) <= variables(l):
                    continue
                for p in positions(t):
                    sigma = match(l, subterm_at(t, p))
                    if sigma is not None:
                        options.append(Step(t, replace_at(t, p, apply_subst(sigma, r)), e.index, EQUATION, d, p, sigma))
        if not options:
            break
        st = rng.choice(options)
        steps.append(st)
        t = st.target
    return Conversion(start, tuple(steps))
