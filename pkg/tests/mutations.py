"""Single-field mutations of certificate JSON documents."""

import copy
import random
from typing import Any, Iterator, List, Tuple

from kbrec.certificate import CertificateFormatError, from_json
from kbrec.certify import verify_certificate

Path = Tuple[Any, ...]


def _get(doc, path: Path):
    for k in path:
        doc = doc[k]
    return doc


def _steps(doc) -> Iterator[Path]:
    claim = doc["claim"]
    if claim["join"] is not None:
        for side in ("left", "right"):
            for n in range(len(claim["join"][side])):
                yield ("claim", "join", side, n)
    if claim["conversion"] is not None:
        for n in range(len(claim["conversion"]["steps"])):
            yield ("claim", "conversion", "steps", n)
    j = doc["justification"]
    if j is not None:
        key = "records" if j["style"] == "history" else "conversions"
        for i, item in enumerate(j[key]):
            for n in range(len(item["conversion"]["steps"])):
                yield ("justification", key, i, "conversion", "steps", n)


def _some_symbol(doc, arity: int):
    names = [s["name"] for s in doc["signature"] if s["arity"] == arity]
    return names[0] if names else None


def _other_term(doc, v):
    """A different well-formed term over the certificate's signature."""
    unary = _some_symbol(doc, 1)
    if unary is not None:
        return [unary, [v]]
    binary = _some_symbol(doc, 2)
    if binary is not None:
        return [binary, [v, v]]
    const = _some_symbol(doc, 0)
    if const is not None and v != [const, []]:
        return [const, []]
    return ["var", "fresh_variable"]


def _flip(doc, path):
    st = _get(doc, path)
    st["dir"] = "rl" if st["dir"] == "lr" else "lr"
    return "flip direction"


def _shift(doc, path):
    st = _get(doc, path)
    st["pos"] = st["pos"][:-1] if st["pos"] else [1]
    return "shift position"


def _alter_subst(doc, path):
    st = _get(doc, path)
    if st["subst"]:
        x = sorted(st["subst"])[0]
        st["subst"][x] = _other_term(doc, st["subst"][x])
        return "alter substitution"
    st["subst"]["fresh_variable"] = ["var", "x"]
    return "extend substitution"


def _retarget(doc, path):
    st = _get(doc, path)
    st["ref"] = st["ref"] + 1000
    return "change reference"


STEP_MUTATIONS = (_flip, _shift, _alter_subst, _retarget)


def mutants(doc, rng: random.Random, per_kind: int = 2) -> List[Tuple[str, dict]]:
    """Single-field mutants of a certificate document, sampled per kind."""
    out = []
    step_paths = list(_steps(doc))
    for mutate in STEP_MUTATIONS:
        for path in rng.sample(step_paths, min(per_kind, len(step_paths))):
            m = copy.deepcopy(doc)
            label = mutate(m, path)
            out.append((f"{label} at /{'/'.join(map(str, path))}", m))
    claim = doc["claim"]
    if claim["rules"]:
        for i in rng.sample(range(len(claim["rules"])), min(per_kind, len(claim["rules"]))):
            m = copy.deepcopy(doc)
            del m["claim"]["rules"][i]
            out.append((f"drop rule {claim['rules'][i]['index']}", m))
    j = doc["justification"]
    if j is not None and j["style"] == "history" and len(j["records"]) >= 2:
        for i in rng.sample(range(len(j["records"]) - 1), min(per_kind, len(j["records"]) - 1)):
            m = copy.deepcopy(doc)
            recs = m["justification"]["records"]
            recs[i], recs[i + 1] = recs[i + 1], recs[i]
            out.append((f"swap records {i},{i + 1}", m))
    if j is not None and j["style"] == "conversion" and j["conversions"]:
        m = copy.deepcopy(doc)
        del m["justification"]["conversions"][0]
        out.append(("drop rule conversion", m))
    if claim["goal"] is not None:
        m = copy.deepcopy(doc)
        m["claim"]["goal"]["rhs"] = _other_term(doc, m["claim"]["goal"]["rhs"])
        out.append(("alter goal", m))
    if claim["rules"]:
        m = copy.deepcopy(doc)
        rule = m["claim"]["rules"][0]
        rule["lhs"], rule["rhs"] = rule["rhs"], rule["lhs"]
        out.append(("reverse rule", m))
    return out


def accepted(doc) -> bool:
    try:
        cert = from_json(doc)
    except CertificateFormatError:
        return False
    return verify_certificate(cert).accepted
