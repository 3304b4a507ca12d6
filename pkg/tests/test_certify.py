import dataclasses
import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kbrec.certificate import (
    DISPROOF,
    FORMAT_VERSION,
    PROOF,
    STYLE_HISTORY,
    CertificateFormatError,
    ConversionSpec,
    Justification,
    Record,
    parse_certificate,
    serialize_certificate,
    term_from_json,
    term_to_json,
    to_json,
)
from kbrec.certify import (
    replay,
    verify_certificate,
    verify_convergence,
    verify_E_subset_R,
    verify_R_subset_E,
)
from kbrec.completion import FROM, TO, HistoryEntry
from kbrec.corpus import CORPUS, rc_rules
from kbrec.order import Precedence
from kbrec.prover import completion_certificate, decide, justification
from kbrec.recall import export_auxiliary

from conftest import EX1_E0, EX1_R, E, T, terms, trs
from helpers import random_walk
from mutations import accepted, mutants
from test_completion import EX1_HISTORY

EMPTY = Precedence()


def history_justification(history, e0):
    records = tuple(
        Record(r.index, r.equation.lhs, r.equation.rhs, ConversionSpec.of(r.conversion))
        for r in export_auxiliary(history, e0)
    )
    return Justification(STYLE_HISTORY, records=records)


class TestConvergence:
    def test_example(self):
        assert verify_convergence(EX1_R, EMPTY)

    def test_rc(self):
        v = verify_convergence(rc_rules(), Precedence.parse("f > h > g > c"))
        # R_c is LPO-terminating with f above h and g; the failure is the critical pair
        assert not v and v.failure.check == "local-confluence"
        assert "rules 2 and 1" in v.failure.subject or "rules 1 and 2" in v.failure.subject

    def test_nonterminating(self):
        v = verify_convergence(trs("f(x) -> f(x)"), EMPTY)
        assert not v and v.failure.check == "termination"


class TestESubsetR:
    def test_example(self):
        assert verify_E_subset_R(EX1_E0, EX1_R)

    def test_extra_equation(self):
        v = verify_E_subset_R(EX1_E0 + (E(3, "f(x) = g(x)"),), EX1_R)
        assert not v and "f(x)" in v.failure.reason

    def test_empty(self):
        assert verify_E_subset_R((), EX1_R)


class TestRSubsetE:
    def test_table(self):
        assert verify_R_subset_E(EX1_R, EX1_E0, history_justification(EX1_HISTORY, EX1_E0))

    def test_unmirrored_entry(self):
        h = dict(EX1_HISTORY)
        h[4] = HistoryEntry(4, T("g(x)"), FROM, 2, T("g(g(f(x)))"), TO, 3, T("g(f(x))"))
        v = verify_R_subset_E(EX1_R, EX1_E0, history_justification(h, EX1_E0))
        assert not v and "rule 4" in v.failure.subject

    def test_reordered_records(self):
        j = history_justification(EX1_HISTORY, EX1_E0)
        recs = list(j.records)
        recs[2], recs[3] = recs[3], recs[2]
        assert not verify_R_subset_E(EX1_R, EX1_E0, dataclasses.replace(j, records=tuple(recs)))

    def test_forward_reference(self):
        j = history_justification(EX1_HISTORY, EX1_E0)
        recs = [r for r in j.records if r.index != 3]
        v = verify_R_subset_E(EX1_R, EX1_E0, dataclasses.replace(j, records=tuple(recs)))
        assert not v and "forward reference" in v.failure.reason

    def test_missing(self):
        assert not verify_R_subset_E(EX1_R, EX1_E0, None)


class TestCertificates:
    def test_example_proof_both_styles(self, ex1_run):
        for style in ("history", "conversion"):
            a = decide(ex1_run, T("f(g(f(x)))"), T("f(g(g(x)))"), style)
            assert a.holds
            assert verify_certificate(parse_certificate(serialize_certificate(a.certificate)))

    def test_example_disproof(self, ex1_run):
        a = decide(ex1_run, T("f(x)"), T("g(x)"))
        assert not a.holds and a.certificate.claim.kind == DISPROOF
        assert verify_certificate(a.certificate)

    def test_missing_rule(self, ex1_run):
        c = decide(ex1_run, T("f(g(f(x)))"), T("f(g(g(x)))")).certificate
        rules = tuple(r for r in c.claim.rules if r.index != 5)
        bad = dataclasses.replace(c, claim=dataclasses.replace(c.claim, rules=rules))
        assert not verify_certificate(bad)

    def test_resource_exhaustion_rejects(self, ex1_run):
        v = verify_certificate(completion_certificate(ex1_run), fuel=0)
        assert not v and v.failure.resource

    def test_conversion_only_proof(self, ex1_run):
        c = decide(ex1_run, T("f(g(f(x)))"), T("f(g(g(x)))"), "conversion").certificate
        bare = dataclasses.replace(
            c,
            claim=dataclasses.replace(c.claim, rules=None, precedence=None, join=None),
            justification=None,
        )
        assert verify_certificate(bare)

    def test_signature_checked(self, ex1_run):
        c = completion_certificate(ex1_run)
        assert not verify_certificate(dataclasses.replace(c, signature=c.signature[:1]))

    def test_replay_rejects_unknown_reference(self):
        from kbrec.certify import _Reject

        c = decide_example()
        with pytest.raises(_Reject):
            replay(T("f(f(x))"), c.claim.join.left, {}, {}, "test", "replay")

    @pytest.mark.parametrize("name", sorted(CORPUS))
    def test_proof_and_disproof_exclusive(self, name, corpus_runs):
        r = corpus_runs[name]
        rng = random.Random(name)
        e = r.e0[0]
        walk = random_walk(rng, r.e0, e.lhs, 3)
        goals = [(walk.start, walk.end), (e.lhs, T("fresh_constant"))]
        for s, t in goals:
            a = decide(r, s, t)
            flipped_kind = DISPROOF if a.holds else PROOF
            flipped = dataclasses.replace(
                a.certificate,
                claim=dataclasses.replace(a.certificate.claim, kind=flipped_kind, join=None, conversion=None),
            )
            assert verify_certificate(a.certificate)
            assert not verify_certificate(flipped)

    @pytest.mark.parametrize("name", ["example1", "group", "booleans", "peano_times"])
    def test_mutants_rejected(self, name, corpus_runs):
        r = corpus_runs[name]
        rng = random.Random(name)
        docs = [to_json(completion_certificate(r, s)) for s in ("history", "conversion")]
        e = r.e0[-1]
        walk = random_walk(rng, r.e0, e.lhs, 3)
        docs.append(to_json(decide(r, walk.start, walk.end, "conversion").certificate))
        for doc in docs:
            assert accepted(doc)
            for label, m in mutants(doc, rng):
                assert not accepted(m), label


def decide_example():
    from kbrec.completion import complete

    return decide(complete(EX1_E0), T("f(g(f(x)))"), T("f(g(g(x)))")).certificate


class TestFormat:
    def test_round_trip(self, ex1_run):
        for style in ("history", "conversion"):
            for c in (completion_certificate(ex1_run, style), decide(ex1_run, T("f(x)"), T("g(x)"), style).certificate):
                text = serialize_certificate(c)
                assert parse_certificate(text) == c
                assert serialize_certificate(parse_certificate(text)) == text

    def test_deterministic(self, ex1_run):
        a = serialize_certificate(completion_certificate(ex1_run))
        b = serialize_certificate(completion_certificate(ex1_run))
        assert a == b
        assert json.loads(a)["format_version"] == FORMAT_VERSION

    def test_truncated(self, ex1_run):
        text = serialize_certificate(completion_certificate(ex1_run))
        with pytest.raises(CertificateFormatError):
            parse_certificate(text[: len(text) // 2])

    def test_unknown_field(self, ex1_run):
        doc = to_json(completion_certificate(ex1_run))
        doc["claim"]["extra"] = 1
        with pytest.raises(CertificateFormatError) as e:
            parse_certificate(json.dumps(doc))
        assert e.value.path == "/claim"

    def test_pointer_paths(self, ex1_run):
        doc = to_json(decide(ex1_run, T("f(g(f(x)))"), T("f(g(g(x)))")).certificate)
        doc["claim"]["join"]["left"][0]["dir"] = "sideways"
        with pytest.raises(CertificateFormatError) as e:
            parse_certificate(json.dumps(doc))
        assert e.value.path == "/claim/join/left/0/dir"

    def test_step_fields(self, ex1_run):
        doc = to_json(decide(ex1_run, T("f(g(f(x)))"), T("f(g(g(x)))")).certificate)
        assert set(doc["claim"]["join"]["left"][0]) == {"ref", "kind", "dir", "pos", "subst"}

    def test_wrong_version(self, ex1_run):
        doc = to_json(completion_certificate(ex1_run))
        doc["format_version"] = "kbrec-0"
        with pytest.raises(CertificateFormatError):
            parse_certificate(json.dumps(doc))

    def test_bad_precedence(self, ex1_run):
        doc = to_json(completion_certificate(ex1_run))
        doc["claim"]["precedence"] = [["f", "g"], ["g", "f"]]
        with pytest.raises(CertificateFormatError) as e:
            parse_certificate(json.dumps(doc))
        assert e.value.path == "/claim/precedence"

    @settings(max_examples=200)
    @given(terms())
    def test_term_round_trip(self, t):
        assert term_from_json(json.loads(json.dumps(term_to_json(t)))) == t

    def test_justification_builder_rejects_unknown_style(self, ex1_run):
        with pytest.raises(ValueError):
            justification(ex1_run, "summary")


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(sorted(CORPUS)), st.sampled_from(["history", "conversion"]), st.integers(0, 10**6))
def test_generated_certificates_round_trip(name, style, seed):
    from kbrec.completion import complete

    p = CORPUS[name]
    r = complete(p.equations, p.precedence)
    rng = random.Random(seed)
    walk = random_walk(rng, r.e0, rng.choice(r.e0).lhs, 2)
    c = decide(r, walk.start, walk.end, style).certificate
    assert parse_certificate(serialize_certificate(c)) == c
