"""First-order terms over string-named variables.

Terms are immutable values. Positions are tuples of 1-based argument
indices, the empty tuple being the root.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterator, Mapping, Optional, Tuple, Union

# Reserved for renaming apart; never allowed in user-supplied variable names.
SEPARATOR = "#"

Position = Tuple[int, ...]


class TermError(ValueError):
    """Malformed term access, e.g. an invalid position."""


@dataclass(frozen=True)
class Symbol:
    name: str
    arity: int

    def __str__(self):
        return f"{self.name}/{self.arity}"


@dataclass(frozen=True, eq=False)
class Var:
    name: str

    def __eq__(self, other):
        return self is other or (isinstance(other, Var) and self.name == other.name)

    def __hash__(self):
        return hash(self.name)

    def __str__(self):
        return self.name


@dataclass(frozen=True, eq=False)
class App:
    fun: str
    args: Tuple["Term", ...] = ()
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not isinstance(self.args, tuple):
            object.__setattr__(self, "args", tuple(self.args))
        object.__setattr__(self, "_hash", hash((self.fun, self.args)))

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, App) or self._hash != other._hash:
            return False
        return self.fun == other.fun and self.args == other.args

    def __hash__(self):
        return self._hash

    @property
    def symbol(self) -> Symbol:
        return Symbol(self.fun, len(self.args))

    def __str__(self):
        if not self.args:
            return self.fun
        return f"{self.fun}({','.join(str(a) for a in self.args)})"


Term = Union[Var, App]
Substitution = Dict[str, Term]


def subterm_at(t: Term, p: Position) -> Term:
    for i in p:
        if isinstance(t, Var) or not 1 <= i <= len(t.args):
            raise TermError(f"position {format_position(p)} is not valid in {t}")
        t = t.args[i - 1]
    return t


def replace_at(t: Term, p: Position, s: Term) -> Term:
    if not p:
        return s
    i = p[0]
    if isinstance(t, Var) or not 1 <= i <= len(t.args):
        raise TermError(f"position {format_position(p)} is not valid in {t}")
    args = list(t.args)
    args[i - 1] = replace_at(args[i - 1], p[1:], s)
    return App(t.fun, tuple(args))


def apply_subst(sigma: Mapping[str, Term], t: Term) -> Term:
    if not sigma:
        return t
    if isinstance(t, Var):
        return sigma.get(t.name, t)
    if not t.args:
        return t
    return App(t.fun, tuple(apply_subst(sigma, a) for a in t.args))


def _match_into(pattern: Term, subject: Term, sigma: Dict[str, Term]) -> bool:
    stack = [(pattern, subject)]
    while stack:
        p, s = stack.pop()
        if isinstance(p, Var):
            bound = sigma.get(p.name)
            if bound is None:
                sigma[p.name] = s
            elif bound != s:
                return False
        elif isinstance(s, App) and p.fun == s.fun and len(p.args) == len(s.args):
            stack.extend(zip(p.args, s.args))
        else:
            return False
    return True


def _drop_identities(sigma: Dict[str, Term]) -> Substitution:
    return {x: v for x, v in sigma.items() if not (isinstance(v, Var) and v.name == x)}


def match(pattern: Term, subject: Term) -> Optional[Substitution]:
    """Return the minimal sigma with pattern·sigma == subject, or None."""
    sigma: Dict[str, Term] = {}
    if not _match_into(pattern, subject, sigma):
        return None
    return _drop_identities(sigma)


def match_pairs(pairs) -> Optional[Substitution]:
    """Simultaneous matching of several (pattern, subject) pairs."""
    sigma: Dict[str, Term] = {}
    for pattern, subject in pairs:
        if not _match_into(pattern, subject, sigma):
            return None
    return _drop_identities(sigma)


def occurs(x: str, t: Term) -> bool:
    if isinstance(t, Var):
        return t.name == x
    return any(occurs(x, a) for a in t.args)


def unify(s: Term, t: Term) -> Optional[Substitution]:
    """Idempotent most general unifier, or None."""
    sigma: Substitution = {}
    todo = [(s, t)]
    while todo:
        a, b = todo.pop()
        a = apply_subst(sigma, a)
        b = apply_subst(sigma, b)
        if a == b:
            continue
        if isinstance(b, Var) and not isinstance(a, Var):
            a, b = b, a
        if isinstance(a, Var):
            if occurs(a.name, b):
                return None
            bind = {a.name: b}
            sigma = {x: apply_subst(bind, v) for x, v in sigma.items()}
            sigma[a.name] = b
        elif a.fun == b.fun and len(a.args) == len(b.args):
            todo.extend(reversed(list(zip(a.args, b.args))))
        else:
            return None
    return sigma


def rename_with_prefix(t: Term, prefix: str) -> Term:
    if isinstance(t, Var):
        return Var(prefix + t.name)
    if not t.args:
        return t
    return App(t.fun, tuple(rename_with_prefix(a, prefix) for a in t.args))


def variables(t: Term) -> set:
    return set(iter_vars(t))


def iter_vars(t: Term) -> Iterator[str]:
    """Variable names in left-to-right order of occurrence (with repeats)."""
    if isinstance(t, Var):
        yield t.name
    else:
        for a in t.args:
            yield from iter_vars(a)


def positions(t: Term) -> Iterator[Position]:
    """All positions of t in pre-order."""
    yield ()
    if isinstance(t, App):
        for i, a in enumerate(t.args, 1):
            for q in positions(a):
                yield (i,) + q


def function_positions(t: Term) -> Iterator[Position]:
    """Non-variable positions of t in pre-order."""
    if isinstance(t, App):
        yield ()
        for i, a in enumerate(t.args, 1):
            for q in function_positions(a):
                yield (i,) + q


def innermost_positions(t: Term) -> Iterator[Tuple[Position, Term]]:
    """(position, subterm) pairs in leftmost-innermost (post-)order."""
    if isinstance(t, App):
        for i, a in enumerate(t.args, 1):
            for q, s in innermost_positions(a):
                yield (i,) + q, s
    yield (), t


def symbols(t: Term) -> set:
    if isinstance(t, Var):
        return set()
    out = {t.symbol}
    for a in t.args:
        out |= symbols(a)
    return out


def depth(t: Term) -> int:
    if isinstance(t, Var) or not t.args:
        return 1
    return 1 + max(depth(a) for a in t.args)


def size(t: Term) -> int:
    if isinstance(t, Var):
        return 1
    return 1 + sum(size(a) for a in t.args)


def is_variant(s: Term, t: Term) -> bool:
    return match(s, t) is not None and match(t, s) is not None


def clean_renaming(terms) -> Dict[str, Term]:
    """Injective renaming that strips renaming prefixes from variable names.

    Names are assigned in order of first occurrence; a stripped name that is
    already taken gets a numeric suffix.
    """
    taken: set = set()
    renaming: Dict[str, Term] = {}
    for t in terms:
        for x in iter_vars(t):
            if x in renaming:
                continue
            base = x.rsplit(SEPARATOR, 1)[-1]
            name, k = base, 1
            while name in taken:
                name = f"{base}_{k}"
                k += 1
            taken.add(name)
            renaming[x] = Var(name)
    return renaming


def compose_subst(sigma: Mapping[str, Term], tau: Mapping[str, Term]) -> Substitution:
    """The substitution x ↦ (x·sigma)·tau, over dom(sigma) ∪ dom(tau)."""
    out = {x: apply_subst(tau, v) for x, v in sigma.items()}
    for x, v in tau.items():
        out.setdefault(x, v)
    return _drop_identities(out)


def format_position(p: Position) -> str:
    return "ε" if not p else ".".join(str(i) for i in p)


def fun(name: str, *args: Term) -> App:
    return App(name, tuple(args))
