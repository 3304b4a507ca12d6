"""Reader for problem files.

    file     := section+
    section  := "(VAR" ident* ")" | "(PREC" chain ("," chain)* ")"
              | "(EQUATIONS" eq ("," eq)* ")" | "(RULES" rule ("," rule)* ")"
              | "(GOAL" eq ")"
    eq       := term "=" term
    rule     := term "->" term
    term     := ident | ident "(" term ("," term)* ")"
    chain    := ident (">" ident)+

Identifiers are ASCII letters, digits and underscores. Terms are written
fully parenthesized.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .order import Precedence, PrecedenceError
from .rewriting import Equation, Rule
from .terms import SEPARATOR, App, Symbol, Term, Var

_TOKEN = re.compile(r"\s*(?:(?P<arrow>->)|(?P<punct>[(),=>])|(?P<ident>[A-Za-z0-9_]+)|(?P<bad>\S))")
SECTIONS = ("VAR", "PREC", "EQUATIONS", "RULES", "GOAL")


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        super().__init__(f"{line}:{col}: {message}" if line else message)
        self.line = line
        self.col = col


@dataclass
class ProblemFile:
    variables: Tuple[str, ...] = ()
    precedence: Precedence = field(default_factory=Precedence)
    equations: Tuple[Equation, ...] = ()
    rules: Tuple[Rule, ...] = ()
    goal: Optional[Tuple[Term, Term]] = None
    arities: Dict[str, int] = field(default_factory=dict)

    @property
    def signature(self) -> Tuple[Symbol, ...]:
        return tuple(Symbol(n, a) for n, a in sorted(self.arities.items()))


class _Parser:
    def __init__(self, text: str, variables=(), arities=None):
        self.text = text
        self.tokens: List[Tuple[str, str, int]] = []
        for m in _TOKEN.finditer(text):
            kind = m.lastgroup
            value = m.group(kind)
            start = m.start(kind)
            if kind == "bad":
                if value == SEPARATOR:
                    raise self.error(f"reserved character {SEPARATOR!r}", start)
                raise self.error(f"unexpected character {value!r}", start)
            self.tokens.append((kind, value, start))
        self.i = 0
        self.variables = set(variables)
        self.arities: Dict[str, int] = dict(arities or {})

    def error(self, message: str, offset: Optional[int] = None) -> ParseError:
        if offset is None:
            offset = self.tokens[self.i][2] if self.i < len(self.tokens) else len(self.text)
        line = self.text.count("\n", 0, offset) + 1
        col = offset - (self.text.rfind("\n", 0, offset) + 1) + 1
        return ParseError(message, line, col)

    def peek(self) -> Optional[str]:
        return self.tokens[self.i][1] if self.i < len(self.tokens) else None

    def at_end(self) -> bool:
        return self.i >= len(self.tokens)

    def take(self, expected: Optional[str] = None) -> str:
        if self.at_end():
            raise self.error(f"expected {expected or 'a token'}, found end of input")
        kind, value, _ = self.tokens[self.i]
        if expected is not None and value != expected:
            raise self.error(f"expected {expected!r}, found {value!r}")
        self.i += 1
        return value

    def ident(self) -> str:
        if self.at_end() or self.tokens[self.i][0] != "ident":
            raise self.error("expected an identifier" if self.at_end() else f"expected an identifier, found {self.peek()!r}")
        return self.take()

    def term(self) -> Term:
        start = self.i
        name = self.ident()
        if self.peek() == "(":
            if name in self.variables:
                raise self.error(f"variable {name!r} used as a function symbol", self.tokens[start][2])
            self.take("(")
            args = [self.term()]
            while self.peek() == ",":
                self.take(",")
                args.append(self.term())
            self.take(")")
            return self._app(name, tuple(args), start)
        if name in self.variables:
            return Var(name)
        return self._app(name, (), start)

    def _app(self, name: str, args, start: int) -> App:
        known = self.arities.setdefault(name, len(args))
        if known != len(args):
            raise self.error(f"symbol {name!r} used with arity {len(args)} and {known}", self.tokens[start][2])
        return App(name, args)

    def pair(self, sep: str) -> Tuple[Term, Term]:
        s = self.term()
        self.take(sep)
        return s, self.term()

    def items(self, parse_one) -> list:
        out = []
        if self.peek() == ")":
            return out
        out.append(parse_one())
        while self.peek() == ",":
            self.take(",")
            out.append(parse_one())
        return out


def parse_problem(text: str) -> ProblemFile:
    p = _Parser(text)
    prob = ProblemFile()
    variables: List[str] = []
    prec_pairs: List[Tuple[str, str]] = []
    equations: List[Equation] = []
    rules: List[Rule] = []
    if p.at_end():
        raise p.error("empty problem file")
    while not p.at_end():
        p.take("(")
        at = p.i
        section = p.ident()
        if section not in SECTIONS:
            raise p.error(f"unknown section {section!r}", p.tokens[at][2])
        if section == "VAR":
            while p.peek() != ")":
                at = p.i
                name = p.ident()
                if name in p.arities:
                    raise p.error(f"{name!r} is already a function symbol", p.tokens[at][2])
                p.variables.add(name)
                variables.append(name)
        elif section == "PREC":

            def chain():
                names = [p.ident()]
                while p.peek() == ">":
                    p.take(">")
                    names.append(p.ident())
                if len(names) < 2:
                    raise p.error("a precedence chain needs at least two symbols")
                return list(zip(names, names[1:]))

            for c in p.items(chain):
                prec_pairs.extend(c)
        elif section == "EQUATIONS":
            for s, t in p.items(lambda: p.pair("=")):
                equations.append(Equation(len(equations) + 1, s, t))
        elif section == "RULES":
            for s, t in p.items(lambda: p.pair("->")):
                rules.append(Rule(len(rules) + 1, s, t))
        else:
            if prob.goal is not None:
                raise p.error("more than one GOAL", p.tokens[at][2])
            prob.goal = p.pair("=")
        p.take(")")
    clash = sorted(set(variables) & set(p.arities))
    if clash:
        raise ParseError(f"identifiers used both as variables and function symbols: {', '.join(clash)}")
    try:
        prob.precedence = Precedence.from_pairs(prec_pairs)
    except PrecedenceError as e:
        raise ParseError(str(e)) from None
    prob.variables = tuple(dict.fromkeys(variables))
    prob.equations = tuple(equations)
    prob.rules = tuple(rules)
    prob.arities = dict(p.arities)
    return prob


def _finish(p: _Parser, value):
    if not p.at_end():
        raise p.error(f"unexpected {p.peek()!r}")
    return value


def parse_term(text: str, variables=(), arities=None) -> Term:
    p = _Parser(text, variables, arities)
    return _finish(p, p.term())


def parse_equation(text: str, variables=(), arities=None) -> Tuple[Term, Term]:
    p = _Parser(text, variables, arities)
    return _finish(p, p.pair("="))
