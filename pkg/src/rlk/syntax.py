"""Reading and writing terms, atoms, rule files, fact files and signatures.

Syntax::

    term   := VAR | ident | ident '(' term (',' term)* ')'
    atom   := ident | ident '(' term (',' term)* ')'
    clause := [atom (',' atom)* '->'] atom '.'

Variables start with an uppercase letter or underscore.  ``#`` starts a
comment that runs to the end of the line.
"""

from __future__ import annotations

import re
from typing import Iterable, Optional

from .terms import App, Atom, Clause, RuleSet, SignatureError, Var, canonical_rename, clause_key

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>#[^\n]*)"
    r"|(?P<var>[A-Z_][A-Za-z0-9_]*)|(?P<ident>[a-z][A-Za-z0-9_]*)"
    r"|(?P<arrow>->)|(?P<punct>[(),./])|(?P<int>[0-9]+)"
)


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int, source: str = "<input>"):
        super().__init__(f"{source}:{line}:{column}: {message}")
        self.line = line
        self.column = column
        self.source = source


class _Lexer:
    def __init__(self, text: str, source: str):
        self.source = source
        self.tokens: list[tuple[str, str, int, int]] = []
        line, line_start, pos = 1, 0, 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None:
                raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1, source)
            kind = m.lastgroup
            if kind == "nl":
                line += 1
                line_start = m.end()
            elif kind not in ("ws", "comment"):
                value = m.group()
                if kind in ("arrow", "punct"):
                    kind = value
                self.tokens.append((kind, value, line, pos - line_start + 1))
            pos = m.end()
        self.end = ("eof", "", line, pos - line_start + 1)
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else self.end

    def next(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, kind: str):
        tok = self.next()
        if tok[0] != kind:
            self.fail(f"expected {kind!r}, found {tok[1] or 'end of input'!r}", tok)
        return tok

    def fail(self, message: str, tok=None):
        tok = tok or self.peek()
        raise ParseError(message, tok[2], tok[3], self.source)

    def at_end(self) -> bool:
        return self.i >= len(self.tokens)


def _term(lx: _Lexer):
    tok = lx.next()
    if tok[0] == "var":
        return Var(tok[1])
    if tok[0] != "ident":
        lx.fail(f"expected a term, found {tok[1] or 'end of input'!r}", tok)
    return App(tok[1], _arglist(lx))


def _arglist(lx: _Lexer) -> list:
    if lx.peek()[0] != "(":
        return []
    lx.next()
    args = [_term(lx)]
    while lx.peek()[0] == ",":
        lx.next()
        args.append(_term(lx))
    lx.expect(")")
    return args


def _atom(lx: _Lexer) -> Atom:
    tok = lx.next()
    if tok[0] != "ident":
        lx.fail(f"expected a predicate, found {tok[1] or 'end of input'!r}", tok)
    return Atom(tok[1], _arglist(lx))


def _clause(lx: _Lexer) -> Clause:
    atoms = [_atom(lx)]
    while lx.peek()[0] == ",":
        lx.next()
        atoms.append(_atom(lx))
    if lx.peek()[0] == "->":
        lx.next()
        conclusion = _atom(lx)
        lx.expect(".")
        return Clause(tuple(atoms), conclusion)
    if len(atoms) > 1:
        lx.fail("expected '->' after antecedents")
    lx.expect(".")
    return Clause((), atoms[0])


def _whole(text: str, source: str, parse):
    lx = _Lexer(text, source)
    value = parse(lx)
    if not lx.at_end():
        lx.fail(f"unexpected {lx.peek()[1]!r}")
    return value


def parse_term(text: str, source: str = "<term>"):
    return _whole(text, source, _term)


def parse_atom(text: str, source: str = "<atom>") -> Atom:
    return _whole(text, source, _atom)


def parse_clause(text: str, source: str = "<clause>") -> Clause:
    return _whole(text, source, _clause)


def parse_clauses(text: str, source: str = "<rules>") -> list[Clause]:
    lx = _Lexer(text, source)
    clauses = []
    while not lx.at_end():
        clauses.append(_clause(lx))
    return clauses


def parse_rules(text: str, name: str = "rules", source: Optional[str] = None) -> RuleSet:
    source = source or name
    clauses = parse_clauses(text, source)
    try:
        return RuleSet.build(name, clauses)
    except SignatureError as exc:
        raise ParseError(str(exc), 1, 1, source) from None


def parse_facts(text: str, source: str = "<facts>") -> list[Atom]:
    """One ground atom per clause, each terminated by ``.``."""
    lx = _Lexer(text, source)
    facts = []
    while not lx.at_end():
        tok = lx.peek()
        atom = _atom(lx)
        lx.expect(".")
        if not atom.is_ground:
            raise ParseError(f"fact {atom} is not ground", tok[2], tok[3], source)
        facts.append(atom)
    return facts


def parse_signature(text: str, source: str = "<signature>") -> dict[str, int]:
    """Lines of ``name/arity``."""
    lx = _Lexer(text, source)
    sig: dict[str, int] = {}
    while not lx.at_end():
        tok = lx.expect("ident")
        lx.expect("/")
        arity = int(lx.expect("int")[1])
        if sig.setdefault(tok[1], arity) != arity:
            raise ParseError(f"symbol {tok[1]} declared twice", tok[2], tok[3], source)
    return sig


# -- printing --------------------------------------------------------------

def format_clause(clause: Clause) -> str:
    return str(clause)


def format_rules(rules: RuleSet, canonical: bool = True) -> str:
    """Rule-file text; with ``canonical`` the clauses are renamed and sorted."""
    clauses: Iterable[Clause] = rules.clauses
    if canonical:
        clauses = sorted((canonical_rename(c) for c in clauses), key=clause_key)
    return "".join(f"{c}\n" for c in clauses)


def format_facts(atoms: Iterable[Atom]) -> str:
    return "".join(f"{a}.\n" for a in sorted(atoms))
