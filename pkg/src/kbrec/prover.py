"""Word problems via recording completion: complete, compare, recall."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .certificate import (
    COMPLETION,
    DISPROOF,
    PROOF,
    STYLE_CONVERSION,
    STYLE_HISTORY,
    Certificate,
    Claim,
    ConversionSpec,
    JoinSpec,
    Justification,
    Record,
    RuleConversion,
)
from .completion import RunResult
from .recall import export_auxiliary, recall, rule_conversion
from .rewriting import DEFAULT_FUEL, Join, joinable
from .terms import Term, symbols

STYLES = (STYLE_HISTORY, STYLE_CONVERSION)


def signature_of(result: RunResult, extra: Iterable[Term] = ()):
    sig = set()
    for e in result.e0:
        sig |= symbols(e.lhs) | symbols(e.rhs)
    for r in result.rules:
        sig |= symbols(r.lhs) | symbols(r.rhs)
    for t in extra:
        sig |= symbols(t)
    return tuple(sorted(sig, key=lambda s: (s.name, s.arity)))


def justification(result: RunResult, style: str = STYLE_HISTORY) -> Justification:
    if style == STYLE_HISTORY:
        records = tuple(
            Record(r.index, r.equation.lhs, r.equation.rhs, ConversionSpec.of(r.conversion))
            for r in export_auxiliary(result.history, result.e0)
        )
        return Justification(STYLE_HISTORY, records=records)
    if style == STYLE_CONVERSION:
        convs = tuple(
            RuleConversion(r.index, ConversionSpec.of(rule_conversion(result.history, result.e0, r)))
            for r in sorted(result.rules, key=lambda r: r.index)
        )
        return Justification(STYLE_CONVERSION, conversions=convs)
    raise ValueError(f"unknown certificate style {style!r}")


def _sorted_rules(result: RunResult):
    return tuple(sorted(result.rules, key=lambda r: r.index))


def completion_certificate(result: RunResult, style: str = STYLE_HISTORY) -> Certificate:
    if not result.success:
        raise ValueError(f"completion did not succeed: {result.reason}")
    claim = Claim(COMPLETION, rules=_sorted_rules(result), precedence=result.prec)
    return Certificate(signature_of(result), tuple(result.e0), claim, justification(result, style))


@dataclass(frozen=True)
class Answer:
    holds: bool
    join: Optional[Join]
    certificate: Certificate


def decide(result: RunResult, s: Term, t: Term, style: str = STYLE_HISTORY, fuel: int = DEFAULT_FUEL) -> Answer:
    """Compare phase (and recall, for the conversion style) on a completed system."""
    if not result.success:
        raise ValueError(f"completion did not succeed: {result.reason}")
    join = joinable(result.rules, s, t, fuel)
    sig = signature_of(result, (s, t))
    just = justification(result, style)
    if join is None:
        claim = Claim(DISPROOF, rules=_sorted_rules(result), precedence=result.prec, goal=(s, t))
        return Answer(False, None, Certificate(sig, tuple(result.e0), claim, just))
    conversion = None
    if style == STYLE_CONVERSION:
        conversion = ConversionSpec.of(recall(result.history, result.e0, join))
    claim = Claim(
        PROOF,
        rules=_sorted_rules(result),
        precedence=result.prec,
        goal=(s, t),
        join=JoinSpec.of(join),
        conversion=conversion,
    )
    return Answer(True, join, Certificate(sig, tuple(result.e0), claim, just))
