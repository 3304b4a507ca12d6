"""Lexicographic path order over a strict precedence on symbol names."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import FrozenSet, Iterable, Optional, Protocol, Tuple

from .rewriting import LR, RL, Equation, Rule
from .terms import Term, Var, occurs

UNORIENTABLE = "unorientable"
_IDENT = re.compile(r"[A-Za-z0-9_]+")


class PrecedenceError(ValueError):
    pass


@dataclass(frozen=True)
class Precedence:
    """A strict partial order on symbol names, stored transitively closed."""

    pairs: FrozenSet[Tuple[str, str]] = frozenset()

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[str, str]]) -> "Precedence":
        closure = set(pairs)
        while True:
            extra = {(a, d) for a, b in closure for c, d in closure if b == c} - closure
            if not extra:
                break
            closure |= extra
        loops = sorted(a for a, b in closure if a == b)
        if loops:
            raise PrecedenceError(f"precedence is cyclic through {', '.join(loops)}")
        return cls(frozenset(closure))

    @classmethod
    def parse(cls, text: str) -> "Precedence":
        """Parse `f > g > h, a > b`; the empty string is the empty precedence."""
        pairs = []
        for chain in filter(None, (c.strip() for c in text.split(","))):
            names = [n.strip() for n in chain.split(">")]
            if len(names) < 2 or not all(_IDENT.fullmatch(n) for n in names):
                raise PrecedenceError(f"malformed precedence chain {chain!r}")
            pairs.extend(zip(names, names[1:]))
        return cls.from_pairs(pairs)

    def gt(self, f: str, g: str) -> bool:
        return (f, g) in self.pairs

    def __str__(self):
        return ", ".join(f"{a} > {b}" for a, b in sorted(self.pairs))


EMPTY = Precedence()


class ReductionOrder(Protocol):
    def gt(self, s: Term, t: Term) -> bool: ...


def lpo_gt(prec: Precedence, s: Term, t: Term) -> bool:
    if isinstance(s, Var):
        return False
    if isinstance(t, Var):
        return occurs(t.name, s)
    if any(si == t or lpo_gt(prec, si, t) for si in s.args):
        return True
    if s.fun == t.fun and len(s.args) == len(t.args):
        if not all(lpo_gt(prec, s, tj) for tj in t.args):
            return False
        for si, ti in zip(s.args, t.args):
            if si != ti:
                return lpo_gt(prec, si, ti)
        return False
    if prec.gt(s.fun, t.fun):
        return all(lpo_gt(prec, s, tj) for tj in t.args)
    return False


class LPO:
    def __init__(self, prec: Precedence = EMPTY):
        self.prec = prec

    def gt(self, s: Term, t: Term) -> bool:
        return lpo_gt(self.prec, s, t)


def orient(prec: Precedence, e: Equation) -> str:
    """LR, RL or UNORIENTABLE; left-to-right is tried first."""
    if lpo_gt(prec, e.lhs, e.rhs):
        return LR
    if lpo_gt(prec, e.rhs, e.lhs):
        return RL
    return UNORIENTABLE


def non_decreasing_rule(prec: Precedence, trs: Iterable[Rule]) -> Optional[Rule]:
    for r in trs:
        if not lpo_gt(prec, r.lhs, r.rhs):
            return r
    return None


def check_termination(prec: Precedence, trs: Iterable[Rule]) -> bool:
    return non_decreasing_rule(prec, trs) is None
