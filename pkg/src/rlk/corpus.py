"""Built-in rule sets, addressable as ``corpus:<key>`` wherever a rule file is expected.

The infix operators of the originals are written in prefix form:
``x <= y`` is ``le(x,y)``, ``x v y`` is ``join(x,y)`` and ``x ^ y`` is ``meet(x,y)``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .syntax import parse_rules
from .terms import RuleSet

_TRANS_MONO = """
le(X,Y), le(Y,Z) -> le(X,Z).
le(X,Y) -> le(f(X),f(Y)).
"""

_SATURATION_EXTRA = """
le(X,Z), le(Y,f(X)) -> le(Y,f(Z)).
le(Z,X), le(f(X),Y) -> le(f(Z),Y).
"""

_MONOTONE_F = """
le(X,X).
le(X,Y), le(Y,Z) -> le(X,Z).
le(X,Y) -> le(f(X),f(Y)).
"""

_MONOTONE_F_SUPERFICIAL = """
m(f(X)) -> m(X).
le(X,Y) -> m(X).
le(X,Y) -> m(Y).
m(X) -> le(X,X).
m(X), m(Y), m(Z), le(X,Y), le(Y,Z) -> le(X,Z).
m(f(X)), m(f(Y)), le(X,Y) -> le(f(X),f(Y)).
"""

_LATTICE = """
le(X,X).
le(X,Y), le(Y,Z) -> le(X,Z).
le(X,join(X,Y)).
le(Y,join(X,Y)).
le(X,Z), le(Y,Z) -> le(join(X,Y),Z).
le(meet(X,Y),X).
le(meet(X,Y),Y).
le(Z,X), le(Z,Y) -> le(Z,meet(X,Y)).
"""

_EQUALITY = """
eq(X,X).
eq(X,Y) -> eq(Y,X).
eq(X,Y), eq(Y,Z) -> eq(X,Z).
eq(X,Y) -> eq(f(X),f(Y)).
eq(X1,Y1), eq(X2,Y2) -> eq(g(X1,X2),g(Y1,Y2)).
"""

_NONLOCAL_DEMO = """
q(X) -> p(f(X)).
p(f(X)) -> r(X).
"""


@dataclass(frozen=True)
class CorpusEntry:
    key: str
    rules: RuleSet
    notes: str


_SOURCES = {
    "trans-mono": (_TRANS_MONO, "transitivity plus monotonicity of f; local"),
    "trans-mono-saturated": (
        _TRANS_MONO + _SATURATION_EXTRA,
        "trans-mono with two shortcut clauses obtained by composing its rules"),
    "monotone-f": (_MONOTONE_F, "reflexive, transitive order with a monotone f; bounded-local"),
    "monotone-f-superficial": (
        _MONOTONE_F_SUPERFICIAL,
        "monotone-f after the mention transformation, mention predicate m"),
    "lattice": (_LATTICE, "Horn rules complete for lattices; local, not bounded-local"),
    "equality": (
        _EQUALITY,
        "reflexivity, symmetry, transitivity and congruence for f/1 and g/2"),
    "nonlocal-demo": (
        _NONLOCAL_DEMO,
        "r(c) follows from q(c) only through the unmentioned term f(c)"),
}

KEYS = tuple(_SOURCES)


def corpus(key: str) -> CorpusEntry:
    if key not in _SOURCES:
        raise KeyError(f"unknown corpus key {key!r}; choose from {', '.join(KEYS)}")
    text, notes = _SOURCES[key]
    return CorpusEntry(key, parse_rules(text, name=key, source=f"corpus:{key}"), notes)


def corpus_text(key: str) -> str:
    return _SOURCES[key][0].lstrip("\n")
