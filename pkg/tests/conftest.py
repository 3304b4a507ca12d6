import random

import pytest
from hypothesis import strategies as st

from kbrec.completion import complete
from kbrec.corpus import CORPUS
from kbrec.order import Precedence
from kbrec.rewriting import TRS, Equation, Rule
from kbrec.syntax import parse_term
from kbrec.terms import App, Var

VARS = ("x", "y", "z", "u", "v", "w") + tuple(f"x{i}" for i in range(1, 7))


def T(text: str):
    """Parse a term, treating the usual variable names as variables."""
    return parse_term(text, VARS)


def E(index: int, text: str) -> Equation:
    lhs, rhs = text.split("=")
    return Equation(index, T(lhs), T(rhs))


def R(index: int, text: str) -> Rule:
    lhs, rhs = text.split("->")
    return Rule(index, T(lhs), T(rhs))


def trs(*texts: str) -> TRS:
    return TRS(R(i, t) for i, t in enumerate(texts, 1))


EX1_E0 = (E(1, "f(f(x)) = f(x)"), E(2, "g(g(f(x))) = g(x)"))
EX1_R = TRS((R(1, "f(f(x)) -> f(x)"), R(4, "g(f(x)) -> g(x)"), R(5, "g(g(x)) -> g(x)")))


@pytest.fixture(scope="session")
def ex1_run():
    return complete(EX1_E0, Precedence())


@pytest.fixture(scope="session")
def corpus_runs():
    return {name: complete(p.equations, p.precedence) for name, p in CORPUS.items()}


# Random terms ----------------------------------------------------------------

SIGNATURE = (("a", 0), ("b", 0), ("f", 1), ("g", 1), ("h", 2))
SMALL_VARS = ("x", "y", "z")


def terms(max_leaves: int = 8, sig=SIGNATURE, names=SMALL_VARS):
    leaves = st.sampled_from([Var(x) for x in names] + [App(f) for f, n in sig if n == 0])
    compound = [(f, n) for f, n in sig if n > 0]

    def extend(children):
        return st.one_of(
            *[st.tuples(*[children] * n).map(lambda args, f=f: App(f, args)) for f, n in compound]
        )

    return st.recursive(leaves, extend, max_leaves=max_leaves)


def ground_terms(max_leaves: int = 8):
    return terms(max_leaves, names=())


def random_term(rng: random.Random, depth: int, sig=SIGNATURE, names=SMALL_VARS):
    if depth <= 1 or rng.random() < 0.3:
        pool = [Var(x) for x in names] + [App(f) for f, n in sig if n == 0]
        return rng.choice(pool)
    f, n = rng.choice([s for s in sig if s[1] > 0])
    return App(f, tuple(random_term(rng, depth - 1, sig, names) for _ in range(n)))
