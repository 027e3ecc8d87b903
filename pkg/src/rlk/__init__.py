"""Local inference relations for Horn-clause rule sets."""

from .terms import App, Atom, Clause, RuleSet, Var
from .syntax import ParseError, parse_atom, parse_clause, parse_facts, parse_rules, parse_term

__all__ = [
    "App", "Atom", "Clause", "RuleSet", "Var",
    "ParseError", "parse_atom", "parse_clause", "parse_facts", "parse_rules", "parse_term",
]
__version__ = "0.1.0"
