"""Built-in problems: small equational systems that complete under LPO, and R_c."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Tuple

from .order import Precedence
from .rewriting import TRS, Equation, Rule
from .syntax import parse_problem
from .terms import App, Term, Var


@dataclass(frozen=True)
class Problem:
    name: str
    equations: Tuple[Equation, ...]
    precedence: Precedence
    variables: Tuple[str, ...]
    arities: Dict[str, int]


_SOURCES = {
    "example1": "(VAR x) (EQUATIONS f(f(x)) = f(x), g(g(f(x))) = g(x))",
    "group": """(VAR x y z) (PREC i > m > e)
        (EQUATIONS m(m(x,y),z) = m(x,m(y,z)), m(e,x) = x, m(i(x),x) = e)""",
    "monoid": "(VAR x y z) (EQUATIONS m(m(x,y),z) = m(x,m(y,z)), m(e,x) = x, m(x,e) = x)",
    "involution": "(VAR x) (EQUATIONS h(h(x)) = x)",
    "square": "(VAR x) (PREC f > g) (EQUATIONS f(f(x)) = g(x))",
    "cube": "(VAR x) (EQUATIONS f(f(f(x))) = x)",
    "constants": "(PREC a > b > c) (EQUATIONS a = b, b = c)",
    "peano_plus": "(VAR x y) (PREC plus > s) (EQUATIONS plus(0,y) = y, plus(s(x),y) = s(plus(x,y)))",
    "peano_times": """(VAR x y) (PREC times > plus > s)
        (EQUATIONS plus(0,y) = y, plus(s(x),y) = s(plus(x,y)), times(0,y) = 0, times(s(x),y) = plus(times(x,y),y))""",
    "booleans": """(VAR x y) (PREC or > not > and)
        (EQUATIONS not(not(x)) = x, and(true,x) = x, and(false,x) = false, or(x,y) = not(and(not(x),not(y))))""",
    "append": """(VAR x y z) (PREC app > cons) (EQUATIONS app(nil,y) = y, app(cons(x,y),z) = cons(x,app(y,z)),
        app(app(x,y),z) = app(x,app(y,z)))""",
    "distributivity": "(VAR x y z) (PREC times > plus) (EQUATIONS times(x,plus(y,z)) = plus(times(x,y),times(x,z)))",
    "commute": "(VAR x) (PREC f > g) (EQUATIONS f(g(x)) = g(f(x)))",
    "idempotent_pair": "(VAR x y) (EQUATIONS f(f(x)) = f(x), g(f(x)) = f(x), g(g(x)) = g(x))",
}


def _problem(name: str, text: str) -> Problem:
    p = parse_problem(text)
    return Problem(name, p.equations, p.precedence, p.variables, dict(p.arities))


CORPUS: Dict[str, Problem] = {name: _problem(name, text) for name, text in _SOURCES.items()}


def example1() -> Problem:
    return CORPUS["example1"]


# R_c -------------------------------------------------------------------------

RC_VARIABLES = tuple(f"x{i}" for i in range(1, 6))


def _x(i: int) -> Var:
    return Var(f"x{i}")


def _f(name: str, *args: Term) -> App:
    return App(name, tuple(args))


C = _f("c")


def rc_t_schema() -> List[Term]:
    """The four shapes t ranges over in the R_2 rule schema."""
    return [C, _f("f", _x(4), _x(5)), _f("g", _x(4), _x(5)), _f("h", _x(4), _x(5))]


def rc_rules() -> TRS:
    """R_c as a TRS over {f/2, g/2, h/2, c/0} and variables x1..x5, 57 rules."""
    g, h = (lambda a, b: _f("g", a, b)), (lambda a, b: _f("h", a, b))
    x1, x2, x3, x4, x5 = (_x(i) for i in range(1, 6))
    lhss_rhss: List[Tuple[Term, Term]] = [
        (_f("f", g(x1, x2), g(x3, x4)), h(x1, h(x2, g(x3, x4)))),
        (_f("f", g(g(x1, x2), g(x3, x4)), x5), h(x5, h(g(x1, x2), g(x3, x4)))),
    ]
    r2 = [
        lambda t: h(g(t, x1), h(x2, x3)),
        lambda t: h(g(x1, t), h(x2, x3)),
        lambda t: h(x1, h(g(t, x2), x3)),
        lambda t: h(x1, h(g(x2, t), x3)),
        lambda t: h(x1, h(x2, g(t, x3))),
        lambda t: h(x1, h(x2, g(x3, t))),
    ]
    for schema in r2:
        lhss_rhss.extend((schema(t), C) for t in rc_t_schema())
    r3 = [
        lambda y: h(g(y, x1), h(g(x2, x3), g(x4, x5))),
        lambda y: h(g(x1, y), h(g(x2, x3), g(x4, x5))),
        lambda y: h(g(x1, x2), h(g(y, x3), g(x4, x5))),
        lambda y: h(g(x1, x2), h(g(x3, y), g(x4, x5))),
        lambda y: h(g(x1, x2), h(g(x3, x4), g(y, x5))),
        lambda y: h(g(x1, x2), h(g(x3, x4), g(x5, y))),
    ]
    for schema in r3:
        lhss_rhss.extend((schema(Var(y)), C) for y in RC_VARIABLES)
    lhss_rhss.append((h(x1, C), C))
    return TRS(tuple(Rule(i, l, r) for i, (l, r) in enumerate(lhss_rhss, 1)))


def rc_instance_values() -> List[Term]:
    """Values substituted for the critical pair's variables in the bounded check."""
    return [_x(i) for i in range(1, 6)] + rc_t_schema()
