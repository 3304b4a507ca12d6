"""Term rewriting with recording Knuth-Bendix completion and a certificate checker."""

from .certificate import parse_certificate, serialize_certificate
from .certify import Verdict, verify_certificate
from .completion import RunResult, complete
from .critical_pairs import all_cps_joinable, critical_pairs
from .order import Precedence, lpo_gt
from .prover import decide
from .recall import recall
from .rewriting import TRS, Equation, Rule, joinable, normal_form
from .syntax import parse_problem, parse_term
from .terms import App, Var, unify

__all__ = [
    "App",
    "Equation",
    "Precedence",
    "Rule",
    "RunResult",
    "TRS",
    "Var",
    "Verdict",
    "all_cps_joinable",
    "complete",
    "critical_pairs",
    "decide",
    "joinable",
    "lpo_gt",
    "normal_form",
    "parse_certificate",
    "parse_problem",
    "parse_term",
    "recall",
    "serialize_certificate",
    "unify",
    "verify_certificate",
]
