import random

import pytest

from kbrec.completion import EQ, TO, FROM, HistoryEntry, init
from kbrec.corpus import CORPUS
from kbrec.recall import RecallError, export_auxiliary, expand_step, join_steps, recall, rule_conversion
from kbrec.rewriting import EQUATION, LR, RL, Join, Step, check_conversion, check_step, joinable

from conftest import EX1_E0, EX1_R, T
from helpers import random_walk
from test_completion import EX1_HISTORY


def e0_only(conv):
    return all(st.kind == EQUATION and st.ref in (1, 2) for st in conv.steps)


class TestExpandStep:
    def test_rule_4_at_position_1(self):
        st = Step(T("f(g(f(x)))"), T("f(g(x))"), 4, pos=(1,), subst={})
        conv = expand_step(EX1_HISTORY, EX1_E0, st)
        assert [s.source for s in conv.steps] == [T("f(g(f(x)))"), T("f(g(g(f(x))))")]
        assert conv.end == T("f(g(x))")
        assert [(s.ref, s.dir) for s in conv.steps] == [(3, RL), (2, LR)]
        table = {3: EX1_HISTORY[3], 2: EX1_HISTORY[2]}
        eqs = {i: _entry_equation(h) for i, h in table.items()}
        for s in conv.steps:
            assert check_step((), eqs, s)

    def test_initial_equation_unchanged(self):
        st = Step(T("f(f(x))"), T("f(x)"), 1, pos=(), subst={})
        conv = expand_step(EX1_HISTORY, EX1_E0, st)
        assert len(conv.steps) == 1
        assert conv.steps[0].kind == EQUATION and conv.steps[0].ref == 1
        assert check_conversion(EX1_E0, conv, st.source, st.target)

    def test_reflexive_half_dropped(self):
        h = {1: EX1_HISTORY[1], 9: HistoryEntry(9, T("f(f(x))"), TO, 1, T("f(x)"), EQ, 0, T("f(x)"))}
        st = Step(T("f(f(a))"), T("f(a)"), 9, pos=(), subst={"x": T("a")})
        conv = expand_step(h, EX1_E0, st)
        assert len(conv.steps) == 1 and conv.steps[0].ref == 1

    def test_backward_step(self):
        st = Step(T("g(x)"), T("g(f(x))"), 4, EQUATION, RL, (), {})
        conv = expand_step(EX1_HISTORY, EX1_E0, st)
        assert conv.start == T("g(x)") and conv.end == T("g(f(x))")

    def test_mismatch(self):
        st = Step(T("f(x)"), T("g(x)"), 4, pos=(), subst={})
        with pytest.raises(RecallError):
            expand_step(EX1_HISTORY, EX1_E0, st)


def _entry_equation(h):
    from kbrec.rewriting import Equation

    return Equation(h.index, h.left, h.right)


class TestRecall:
    def test_example_join(self):
        join = joinable(EX1_R, T("f(g(f(x)))"), T("f(g(g(x)))"))
        conv = recall(EX1_HISTORY, EX1_E0, join)
        assert conv.start == T("f(g(f(x)))") and conv.end == T("f(g(g(x)))")
        assert e0_only(conv)
        assert check_conversion(EX1_E0, conv, T("f(g(f(x)))"), T("f(g(g(x)))"))

    def test_empty_join(self):
        conv = recall(EX1_HISTORY, EX1_E0, Join((), (), T("f(x)")))
        assert conv.steps == () and conv.start == T("f(x)")

    def test_single_initial_step(self):
        st = Step(T("f(f(x))"), T("f(x)"), 1, pos=(), subst={})
        conv = recall(EX1_HISTORY, EX1_E0, Join((st,), (), T("f(x)")))
        assert len(conv.steps) == 1 and check_conversion(EX1_E0, conv, T("f(f(x))"), T("f(x)"))

    def test_join_steps_order(self):
        join = joinable(EX1_R, T("f(g(f(x)))"), T("f(g(g(x)))"))
        steps = join_steps(join)
        assert steps[0].source == T("f(g(f(x)))") and steps[-1].target == T("f(g(g(x)))")

    def test_step_limit(self):
        join = joinable(EX1_R, T("f(g(f(x)))"), T("f(g(g(x)))"))
        with pytest.raises(RecallError):
            recall(EX1_HISTORY, EX1_E0, join, max_steps=2)

    def test_rule_conversions(self):
        for rule in EX1_R:
            conv = rule_conversion(EX1_HISTORY, EX1_E0, rule)
            assert e0_only(conv) and check_conversion(EX1_E0, conv, rule.lhs, rule.rhs)

    @pytest.mark.parametrize("name", sorted(CORPUS))
    def test_random_joins(self, name, corpus_runs):
        r = corpus_runs[name]
        rng = random.Random(name)
        for _ in range(10):
            e = rng.choice(r.e0)
            walk = random_walk(rng, r.e0, rng.choice([e.lhs, e.rhs]), rng.randint(0, 4))
            s, t = walk.start, walk.end
            join = joinable(r.rules, s, t)
            assert join is not None
            conv = recall(r.history, r.e0, join)
            assert conv.start == s and conv.end == t
            assert all(st.kind == EQUATION and st.ref in {x.index for x in r.e0} for st in conv.steps)
            assert check_conversion(r.e0, conv, s, t)

    def test_prefix_of_run(self):
        """Recall also works on joins over an unfinished run's rules."""
        from test_completion import manual_run

        st = manual_run()[5]
        join = joinable(st.rules, T("g(g(f(f(a))))"), T("g(f(g(f(a))))"))
        assert join is not None
        conv = recall(st.history, EX1_E0, join)
        assert check_conversion(EX1_E0, conv, T("g(g(f(f(a))))"), T("g(f(g(f(a))))"))


class TestExportAuxiliary:
    def test_table(self):
        records = export_auxiliary(EX1_HISTORY, EX1_E0)
        assert [r.index for r in records] == [1, 2, 3, 4, 5]
        table = {e.index: e for e in EX1_E0}
        for r in records:
            assert all(s.ref < r.index or s.ref in table for s in r.conversion.steps)
            assert check_conversion(table, r.conversion, r.equation.lhs, r.equation.rhs)
            table.setdefault(r.index, r.equation)

    def test_initial_history(self):
        records = export_auxiliary(init(EX1_E0).history, EX1_E0)
        assert len(records) == 2
        assert all(len(r.conversion.steps) == 1 for r in records)

    def test_forward_reference(self):
        h = dict(EX1_HISTORY)
        h[3] = HistoryEntry(3, T("g(g(f(x)))"), FROM, 4, T("g(g(f(f(x))))"), TO, 2, T("g(f(x))"))
        with pytest.raises(RecallError):
            export_auxiliary(h, EX1_E0)

    @pytest.mark.parametrize("name", sorted(CORPUS))
    def test_linear_size(self, name, corpus_runs):
        r = corpus_runs[name]
        assert len(export_auxiliary(r.history, r.e0)) == len(r.history)
