"""Command-line interface: complete, prove, check, cps, normalize.

Exit codes: 0 proved / completed / accepted, 1 disproved / rejected,
2 errors, resource exhaustion and unorientable equations.
"""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional

from .certificate import STYLE_HISTORY, CertificateFormatError, parse_certificate, serialize_certificate
from .certify import verify_certificate
from .completion import DEFAULT_MAX_INFERENCES, complete
from .critical_pairs import critical_pairs
from .order import Precedence, PrecedenceError
from .prover import STYLES, completion_certificate, decide
from .rewriting import DEFAULT_FUEL, TRS, FuelExhausted, Rule, normalize
from .syntax import ParseError, ProblemFile, parse_equation, parse_problem, parse_term

OK, NEGATIVE, ERROR = 0, 1, 2


class _Fail(Exception):
    pass


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise _Fail(f"cannot read {path}: {e.strerror}") from None


def _load(args) -> ProblemFile:
    prob = parse_problem(_read(args.file))
    if args.prec is not None:
        prob.precedence = Precedence.parse(args.prec)
    return prob


def _emit(text: str, out: Optional[str]):
    if out is None:
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as e:
        raise _Fail(f"cannot write {out}: {e.strerror}") from None


def _run_completion(prob: ProblemFile, args):
    if not prob.equations:
        raise _Fail("the problem file has no equations to complete")
    result = complete(prob.equations, prob.precedence, args.max_steps, args.fuel)
    if not result.success:
        print(f"MAYBE ({result.reason})")
        return None
    return result


def cmd_complete(args) -> int:
    prob = _load(args)
    result = _run_completion(prob, args)
    if result is None:
        return ERROR
    print("YES")
    for line in result.trace_lines():
        print(f"  {line}")
    print("rules:")
    for r in sorted(result.rules, key=lambda r: r.index):
        print(f"  {r}")
    print("history:")
    for i in sorted(result.history):
        print(f"  {result.history[i]}")
    _emit(serialize_certificate(completion_certificate(result, args.style)), args.out)
    return OK


def cmd_prove(args) -> int:
    prob = _load(args)
    if args.goal is not None:
        s, t = parse_equation(args.goal, prob.variables, prob.arities)
    elif prob.goal is not None:
        s, t = prob.goal
    else:
        raise _Fail("no goal: pass --goal or add a GOAL section")
    result = _run_completion(prob, args)
    if result is None:
        return ERROR
    answer = decide(result, s, t, args.style, args.fuel)
    print("YES" if answer.holds else "NO")
    _emit(serialize_certificate(answer.certificate), args.out)
    return OK if answer.holds else NEGATIVE


def cmd_check(args) -> int:
    cert = parse_certificate(_read(args.file))
    verdict = verify_certificate(cert, args.fuel)
    print(verdict)
    if verdict.accepted:
        return OK
    return ERROR if verdict.failure.resource else NEGATIVE


def _rules_of(prob: ProblemFile) -> TRS:
    if prob.rules:
        return TRS(prob.rules)
    return TRS(tuple(Rule(e.index, e.lhs, e.rhs) for e in prob.equations))


def cmd_cps(args) -> int:
    trs = _rules_of(_load(args))
    for cp in critical_pairs(trs):
        print(cp)
    return OK


def cmd_normalize(args) -> int:
    prob = _load(args)
    term = parse_term(args.term, prob.variables, prob.arities)
    if prob.rules:
        trs = TRS(prob.rules)
    else:
        result = _run_completion(prob, args)
        if result is None:
            return ERROR
        trs = result.rules
    nf, trace = normalize(trs, term, args.fuel)
    for st in trace:
        print(f"  {st.source} ->{st.ref} {st.target}")
    print(nf)
    return OK


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--prec", help="precedence, e.g. 'f > g > h, a > b' (overrides the file)")
    shared.add_argument("--fuel", type=int, default=DEFAULT_FUEL, help="rewrite steps per normalization")
    shared.add_argument("--max-steps", type=int, default=DEFAULT_MAX_INFERENCES, help="completion inference limit")
    shared.add_argument("--style", choices=STYLES, default=STYLE_HISTORY, help="certificate justification style")
    shared.add_argument("--out", help="write the certificate here instead of stdout")

    parser = argparse.ArgumentParser(prog="kbrec", description="Recording completion with certificates.")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("complete", parents=[shared], help="complete an equational system")
    p.add_argument("file")
    p.set_defaults(func=cmd_complete)
    p = sub.add_parser("prove", parents=[shared], help="decide an equation and emit a certificate")
    p.add_argument("file")
    p.add_argument("--goal", help="equation 's = t' (defaults to the file's GOAL)")
    p.set_defaults(func=cmd_prove)
    p = sub.add_parser("check", parents=[shared], help="check a certificate")
    p.add_argument("file")
    p.set_defaults(func=cmd_check)
    p = sub.add_parser("cps", parents=[shared], help="list critical pairs of the rules")
    p.add_argument("file")
    p.set_defaults(func=cmd_cps)
    p = sub.add_parser("normalize", parents=[shared], help="normalize a term")
    p.add_argument("file")
    p.add_argument("--term", required=True)
    p.set_defaults(func=cmd_normalize)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return OK if e.code == 0 else ERROR
    try:
        return args.func(args)
    except (_Fail, ParseError, PrecedenceError, CertificateFormatError) as e:
        print(f"error: {e}", file=sys.stderr)
    except FuelExhausted as e:
        print(f"MAYBE (resource limit: {e})", file=sys.stderr)
    except RecursionError:
        print("error: term too deep", file=sys.stderr)
    return ERROR


if __name__ == "__main__":
    sys.exit(main())
