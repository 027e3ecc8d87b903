"""Context-free recognition as bounded inference over sentence terms."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

from .engine import EvalStats, proves_local
from .syntax import ParseError
from .terms import App, Atom, Clause, RuleSet, Var

NIL = App("nil", ())
ACCEPT = "p"

_LINE = re.compile(r"^\s*(\S+)\s*->\s*(.*?)\s*$")
_NONTERMINAL = re.compile(r"^[A-Z_][A-Za-z0-9_]*$")
_TERMINAL = re.compile(r"^[a-z][A-Za-z0-9_]*$")


@dataclass(frozen=True)
class Grammar:
    start: str
    binary: tuple[tuple[str, str, str], ...]
    lexical: tuple[tuple[str, str], ...]

    @property
    def nonterminals(self) -> frozenset[str]:
        out = {self.start}
        for a, b, c in self.binary:
            out |= {a, b, c}
        out |= {a for a, _ in self.lexical}
        return frozenset(out)

    @property
    def terminals(self) -> frozenset[str]:
        return frozenset(w for _, w in self.lexical)


def pred_name(nonterminal: str) -> str:
    return "pa_" + nonterminal.lower()


def parse_grammar(text: str, source: str = "<grammar>") -> Grammar:
    """One production per line; ``#`` comments; the first left-hand side is the start symbol."""
    start = None
    binary, lexical = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        m = _LINE.match(line)
        if m is None:
            raise ParseError("expected 'A -> B C' or 'A -> c'", lineno, 1, source)
        lhs, rhs = m.group(1), m.group(2).split()
        col = line.index("->") + 3
        if not _NONTERMINAL.match(lhs):
            raise ParseError(f"left-hand side {lhs!r} is not a nonterminal", lineno, line.index(lhs) + 1, source)
        if not rhs:
            raise ParseError("empty productions are not supported", lineno, col, source)
        if len(rhs) == 1 and _TERMINAL.match(rhs[0]):
            lexical.append((lhs, rhs[0]))
        elif len(rhs) == 1 and _NONTERMINAL.match(rhs[0]):
            raise ParseError("unit productions are not supported", lineno, col, source)
        elif len(rhs) == 2 and all(_NONTERMINAL.match(s) for s in rhs):
            binary.append((lhs, rhs[0], rhs[1]))
        else:
            raise ParseError(f"unsupported right-hand side {' '.join(rhs)!r}", lineno, col, source)
        if start is None:
            start = lhs
    if start is None:
        raise ParseError("grammar has no productions", 1, 1, source)
    # distinct nonterminals must not collide once lowercased
    seen: dict[str, str] = {}
    g = Grammar(start, tuple(binary), tuple(lexical))
    for n in sorted(g.nonterminals):
        other = seen.setdefault(pred_name(n), n)
        if other != n:
            raise ParseError(f"nonterminals {other} and {n} map to the same predicate", 1, 1, source)
    return g


def encode(words: Sequence[str]) -> App:
    t = NIL
    for w in reversed(list(words)):
        t = App("cons", (App(w, ()), t))
    return t


def compile(g: Grammar) -> RuleSet:
    X, Y, Z = Var("X"), Var("Y"), Var("Z")
    out = []
    for a, b, c in g.binary:
        out.append(Clause((Atom(pred_name(b), (X, Y)), Atom(pred_name(c), (Y, Z))),
                          Atom(pred_name(a), (X, Z))))
    for a, w in g.lexical:
        out.append(Clause((), Atom(pred_name(a), (App("cons", (App(w, ()), X)), X))))
    out.append(Clause((Atom(pred_name(g.start), (X, NIL)),), Atom(ACCEPT, (X,))))
    functions = {"cons": 2, "nil": 0}
    functions.update({w: 0 for w in g.terminals})
    return RuleSet.build("grammar", out, functions=functions)


def recognize(g: Grammar, words: Sequence[str]) -> tuple[bool, EvalStats]:
    words = list(words)
    if any(w not in g.terminals for w in words):
        return False, EvalStats(0, 0, 0)
    d, stats = proves_local(compile(g), [], Atom(ACCEPT, (encode(words),)), with_stats=True)
    return d is not None, stats


def cyk_oracle(g: Grammar, words: Sequence[str]) -> bool:
    n = len(words)
    if n == 0:
        return False
    chart = [[set() for _ in range(n + 1)] for _ in range(n + 1)]
    for i, w in enumerate(words):
        chart[i][i + 1] = {a for a, t in g.lexical if t == w}
    for span in range(2, n + 1):
        for i in range(n - span + 1):
            k = i + span
            cell = chart[i][k]
            for j in range(i + 1, k):
                left, right = chart[i][j], chart[j][k]
                if left and right:
                    cell.update(a for a, b, c in g.binary if b in left and c in right)
    return g.start in chart[0][n]
