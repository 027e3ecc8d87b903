import pytest
from hypothesis import given
from hypothesis import strategies as st

from rlk.corpus import KEYS, corpus
from rlk.syntax import (
    ParseError, format_facts, format_rules, parse_atom, parse_facts, parse_rules,
    parse_signature, parse_term,
)
from rlk.terms import App, Atom, Var, canonical_rename, clause_key


def _canon(rules):
    return sorted((canonical_rename(c) for c in rules.clauses), key=clause_key)


@pytest.mark.parametrize("key", KEYS)
def test_corpus_round_trip(key):
    rules = corpus(key).rules
    again = parse_rules(format_rules(rules))
    assert _canon(again) == _canon(rules)


def test_term_shapes():
    t = parse_term("f(X, g(a))")
    assert t == App("f", [Var("X"), App("g", [App("a")])])
    assert not t.is_ground
    assert parse_term("_Tmp") == Var("_Tmp")


def test_nullary_atom():
    assert parse_atom("accept") == Atom("accept", ())


def test_comments_and_blank_lines():
    rules = parse_rules("# header\n\nle(X,Y) -> le(Y,X).  # symmetric\n")
    assert len(rules) == 1


def test_facts_must_be_ground():
    with pytest.raises(ParseError) as exc:
        parse_facts("le(a,b).\nle(X,b).\n")
    assert (exc.value.line, exc.value.column) == (2, 1)


@pytest.mark.parametrize("text, line, column", [
    ("le(a,b)", 1, 8),
    ("le(a,,b).", 1, 6),
    ("p(X) -> .", 1, 9),
    ("p(a).\nq(a), r(a).", 2, 11),
    ("p(a) $", 1, 6),
])
def test_error_positions(text, line, column):
    with pytest.raises(ParseError) as exc:
        parse_rules(text)
    assert (exc.value.line, exc.value.column) == (line, column)
    assert f":{line}:{column}:" in str(exc.value)


def test_arity_clash_is_a_parse_error():
    with pytest.raises(ParseError):
        parse_rules("p(X) -> p(X,X).")


def test_signature():
    assert parse_signature("a/0\nf/2\n") == {"a": 0, "f": 2}
    with pytest.raises(ParseError):
        parse_signature("f/2\nf/1\n")
    with pytest.raises(ParseError):
        parse_signature("f 2")


names = st.sampled_from(["a", "b", "c"])
facts = st.lists(st.builds(lambda p, x, y: Atom(p, [App(x), App("f", [App(y)])]),
                           st.sampled_from(["p", "q"]), names, names), max_size=8)


@given(facts)
def test_fact_round_trip(atoms):
    assert parse_facts(format_facts(atoms)) == sorted(atoms)
