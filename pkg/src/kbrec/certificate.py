"""Certificate data model and its JSON encoding.

Certificates are self-contained: they carry the signature, the initial
equations, the claim, and the evidence. Steps are stored without their
endpoints; a checker replays them from the conversion's start term.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Dict, Mapping, Optional, Tuple

import jsonschema

from .order import Precedence, PrecedenceError
from .rewriting import Equation, Rule, Step
from .terms import App, Symbol, Term, Var

FORMAT_VERSION = "kbrec-1"

COMPLETION = "completion"
PROOF = "proof"
DISPROOF = "disproof"

STYLE_CONVERSION = "conversion"
STYLE_HISTORY = "history"


class CertificateFormatError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path or '/'}: {message}")
        self.path = path


@dataclass(frozen=True)
class StepSpec:
    ref: int
    kind: str
    dir: str
    pos: Tuple[int, ...]
    subst: Mapping[str, Term]

    @classmethod
    def of(cls, st: Step) -> "StepSpec":
        return cls(st.ref, st.kind, st.dir, tuple(st.pos), dict(st.subst))


@dataclass(frozen=True)
class ConversionSpec:
    start: Term
    steps: Tuple[StepSpec, ...] = ()

    @classmethod
    def of(cls, conv) -> "ConversionSpec":
        return cls(conv.start, tuple(StepSpec.of(s) for s in conv.steps))


@dataclass(frozen=True)
class JoinSpec:
    meet: Term
    left: Tuple[StepSpec, ...] = ()
    right: Tuple[StepSpec, ...] = ()

    @classmethod
    def of(cls, join) -> "JoinSpec":
        return cls(join.meet, tuple(map(StepSpec.of, join.left)), tuple(map(StepSpec.of, join.right)))


@dataclass(frozen=True)
class Record:
    """An auxiliary equation ``index: lhs = rhs`` with its proof."""

    index: int
    lhs: Term
    rhs: Term
    conversion: ConversionSpec


@dataclass(frozen=True)
class RuleConversion:
    rule: int
    conversion: ConversionSpec


@dataclass(frozen=True)
class Justification:
    style: str
    conversions: Tuple[RuleConversion, ...] = ()
    records: Tuple[Record, ...] = ()


@dataclass(frozen=True)
class Claim:
    kind: str
    rules: Optional[Tuple[Rule, ...]] = None
    precedence: Optional[Precedence] = None
    goal: Optional[Tuple[Term, Term]] = None
    join: Optional[JoinSpec] = None
    conversion: Optional[ConversionSpec] = None


@dataclass(frozen=True)
class Certificate:
    signature: Tuple[Symbol, ...]
    equations: Tuple[Equation, ...]
    claim: Claim
    justification: Optional[Justification] = None


# JSON schema ---------------------------------------------------------------

_TERM = {
    "oneOf": [
        {
            "type": "array",
            "prefixItems": [{"const": "var"}, {"type": "string", "minLength": 1}],
            "minItems": 2,
            "maxItems": 2,
        },
        {
            "type": "array",
            "prefixItems": [{"type": "string", "minLength": 1}, {"type": "array", "items": {"$ref": "#/$defs/term"}}],
            "minItems": 2,
            "maxItems": 2,
        },
    ]
}


def _obj(props: Dict[str, Any]) -> Dict[str, Any]:
    return {"type": "object", "properties": props, "required": sorted(props), "additionalProperties": False}


def _nullable(schema):
    return {"oneOf": [{"type": "null"}, schema]}


_INDEX = {"type": "integer", "minimum": 1}
_PAIR = _obj({"index": _INDEX, "lhs": {"$ref": "#/$defs/term"}, "rhs": {"$ref": "#/$defs/term"}})
_STEP = _obj(
    {
        "ref": _INDEX,
        "kind": {"enum": ["rule", "equation"]},
        "dir": {"enum": ["lr", "rl"]},
        "pos": {"type": "array", "items": {"type": "integer", "minimum": 1}},
        "subst": {"type": "object", "additionalProperties": {"$ref": "#/$defs/term"}},
    }
)
_STEPS = {"type": "array", "items": {"$ref": "#/$defs/step"}}
_CONVERSION = _obj({"start": {"$ref": "#/$defs/term"}, "steps": _STEPS})

SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "$defs": {"term": _TERM, "step": _STEP, "conversion": _CONVERSION, "pair": _PAIR},
    **_obj(
        {
            "format_version": {"const": FORMAT_VERSION},
            "signature": {
                "type": "array",
                "items": _obj({"name": {"type": "string", "minLength": 1}, "arity": {"type": "integer", "minimum": 0}}),
            },
            "equations": {"type": "array", "items": {"$ref": "#/$defs/pair"}},
            "claim": _obj(
                {
                    "kind": {"enum": [COMPLETION, PROOF, DISPROOF]},
                    "rules": _nullable({"type": "array", "items": {"$ref": "#/$defs/pair"}}),
                    "precedence": _nullable(
                        {
                            "type": "array",
                            "items": {
                                "type": "array",
                                "prefixItems": [{"type": "string"}, {"type": "string"}],
                                "minItems": 2,
                                "maxItems": 2,
                            },
                        }
                    ),
                    "goal": _nullable(_obj({"lhs": {"$ref": "#/$defs/term"}, "rhs": {"$ref": "#/$defs/term"}})),
                    "join": _nullable(_obj({"meet": {"$ref": "#/$defs/term"}, "left": _STEPS, "right": _STEPS})),
                    "conversion": _nullable({"$ref": "#/$defs/conversion"}),
                }
            ),
            "justification": _nullable(
                {
                    "oneOf": [
                        _obj(
                            {
                                "style": {"const": STYLE_CONVERSION},
                                "conversions": {
                                    "type": "array",
                                    "items": _obj({"rule": _INDEX, "conversion": {"$ref": "#/$defs/conversion"}}),
                                },
                            }
                        ),
                        _obj(
                            {
                                "style": {"const": STYLE_HISTORY},
                                "records": {
                                    "type": "array",
                                    "items": _obj(
                                        {
                                            "index": _INDEX,
                                            "lhs": {"$ref": "#/$defs/term"},
                                            "rhs": {"$ref": "#/$defs/term"},
                                            "conversion": {"$ref": "#/$defs/conversion"},
                                        }
                                    ),
                                },
                            }
                        ),
                    ]
                }
            ),
        }
    ),
}

_VALIDATOR = jsonschema.Draft202012Validator(SCHEMA)


# Encoding ------------------------------------------------------------------


def term_to_json(t: Term):
    if isinstance(t, Var):
        return ["var", t.name]
    return [t.fun, [term_to_json(a) for a in t.args]]


def term_from_json(data) -> Term:
    head, rest = data
    if isinstance(rest, str):
        return Var(rest)
    return App(head, tuple(term_from_json(a) for a in rest))


def _step_json(s: StepSpec):
    return {
        "ref": s.ref,
        "kind": s.kind,
        "dir": s.dir,
        "pos": list(s.pos),
        "subst": {x: term_to_json(v) for x, v in sorted(s.subst.items())},
    }


def _conversion_json(c: ConversionSpec):
    return {"start": term_to_json(c.start), "steps": [_step_json(s) for s in c.steps]}


def _pair_json(p):
    return {"index": p.index, "lhs": term_to_json(p.lhs), "rhs": term_to_json(p.rhs)}


def to_json(c: Certificate) -> Dict[str, Any]:
    cl = c.claim
    claim = {
        "kind": cl.kind,
        "rules": None if cl.rules is None else [_pair_json(r) for r in cl.rules],
        "precedence": None if cl.precedence is None else [list(p) for p in sorted(cl.precedence.pairs)],
        "goal": None if cl.goal is None else {"lhs": term_to_json(cl.goal[0]), "rhs": term_to_json(cl.goal[1])},
        "join": None
        if cl.join is None
        else {
            "meet": term_to_json(cl.join.meet),
            "left": [_step_json(s) for s in cl.join.left],
            "right": [_step_json(s) for s in cl.join.right],
        },
        "conversion": None if cl.conversion is None else _conversion_json(cl.conversion),
    }
    j = c.justification
    if j is None:
        just = None
    elif j.style == STYLE_CONVERSION:
        just = {
            "style": j.style,
            "conversions": [{"rule": rc.rule, "conversion": _conversion_json(rc.conversion)} for rc in j.conversions],
        }
    else:
        just = {
            "style": j.style,
            "records": [
                {
                    "index": r.index,
                    "lhs": term_to_json(r.lhs),
                    "rhs": term_to_json(r.rhs),
                    "conversion": _conversion_json(r.conversion),
                }
                for r in j.records
            ],
        }
    return {
        "format_version": FORMAT_VERSION,
        "signature": [{"name": s.name, "arity": s.arity} for s in c.signature],
        "equations": [_pair_json(e) for e in c.equations],
        "claim": claim,
        "justification": just,
    }


def serialize_certificate(c: Certificate) -> str:
    return json.dumps(to_json(c), sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n"


# Decoding ------------------------------------------------------------------


def _pointer(path) -> str:
    return "".join(f"/{p}" for p in path)


def _step(d) -> StepSpec:
    return StepSpec(
        d["ref"], d["kind"], d["dir"], tuple(d["pos"]), {x: term_from_json(v) for x, v in d["subst"].items()}
    )


def _conversion(d) -> ConversionSpec:
    return ConversionSpec(term_from_json(d["start"]), tuple(_step(s) for s in d["steps"]))


def from_json(doc) -> Certificate:
    errors = sorted(_VALIDATOR.iter_errors(doc), key=lambda e: (len(e.absolute_path), list(map(str, e.absolute_path))))
    if errors:
        err = jsonschema.exceptions.best_match(errors)
        raise CertificateFormatError(_pointer(err.absolute_path), err.message)
    cl = doc["claim"]
    precedence = None
    if cl["precedence"] is not None:
        try:
            precedence = Precedence.from_pairs(tuple(p) for p in cl["precedence"])
        except PrecedenceError as e:
            raise CertificateFormatError("/claim/precedence", str(e)) from None
    claim = Claim(
        kind=cl["kind"],
        rules=None
        if cl["rules"] is None
        else tuple(Rule(r["index"], term_from_json(r["lhs"]), term_from_json(r["rhs"])) for r in cl["rules"]),
        precedence=precedence,
        goal=None if cl["goal"] is None else (term_from_json(cl["goal"]["lhs"]), term_from_json(cl["goal"]["rhs"])),
        join=None
        if cl["join"] is None
        else JoinSpec(
            term_from_json(cl["join"]["meet"]),
            tuple(map(_step, cl["join"]["left"])),
            tuple(map(_step, cl["join"]["right"])),
        ),
        conversion=None if cl["conversion"] is None else _conversion(cl["conversion"]),
    )
    j = doc["justification"]
    if j is None:
        just = None
    elif j["style"] == STYLE_CONVERSION:
        just = Justification(
            STYLE_CONVERSION, conversions=tuple(RuleConversion(c["rule"], _conversion(c["conversion"])) for c in j["conversions"])
        )
    else:
        just = Justification(
            STYLE_HISTORY,
            records=tuple(
                Record(r["index"], term_from_json(r["lhs"]), term_from_json(r["rhs"]), _conversion(r["conversion"]))
                for r in j["records"]
            ),
        )
    return Certificate(
        signature=tuple(Symbol(s["name"], s["arity"]) for s in doc["signature"]),
        equations=tuple(Equation(e["index"], term_from_json(e["lhs"]), term_from_json(e["rhs"])) for e in doc["equations"]),
        claim=claim,
        justification=just,
    )


def parse_certificate(text: str) -> Certificate:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise CertificateFormatError("", f"invalid JSON: {e}") from None
    return from_json(doc)
