from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rlk.engine import check_superficial, saturate_bounded
from rlk.scaffold import relation, scaffold_rules, successor_facts, traversal_oracle
from rlk.syntax import format_clause, format_rules, parse_rules, parse_term
from rlk.terms import App, Atom, RuleSet, subterm_closure

from gen import is_subterm

GOLDEN = Path(__file__).parent / "golden"
T = parse_term


def expected(t, pred):
    """Direct recursive definitions of the four relations."""
    subs = sorted(subterm_closure([t]))
    if pred == "su":
        return {Atom("su", (u, v)) for u in subs for v in subs if is_subterm(u, v)}
    if pred == "ne":
        return {Atom("ne", (u, v)) for u in subs for v in subs if u != v}
    if pred == "ni":
        return {Atom("ni", (u, v)) for u in subs for v in subs if not is_subterm(u, v)}
    order = traversal_oracle(t)
    return {Atom("s", (u, v)) for u, v in zip(order, order[1:])}


def terms_over(sig):
    leaves = st.sampled_from([App(f) for f, n in sig.items() if n == 0])
    comps = [(f, n) for f, n in sig.items() if n > 0]

    def extend(kids):
        return st.one_of(*[st.builds(lambda *xs, f=f: App(f, xs), *([kids] * n)) for f, n in comps])

    return st.recursive(leaves, extend, max_leaves=10)


def test_base_rules_present():
    text = format_rules(scaffold_rules({"a": 0, "b": 0, "f": 2}), canonical=False)
    for line in ["input(X) -> m(X).", "m(f(X1,X2)) -> m(X1).", "m(f(X1,X2)) -> m(X2).",
                 "m(X) -> su(X,X)."]:
        assert line in text.splitlines()


def test_single_constant():
    rules = scaffold_rules({"a": 0})
    lines = format_rules(rules, canonical=False).splitlines()
    assert "ne(Z,a) -> ni(Z,a)." in lines
    assert not any(line.endswith("-> ne(a,a).") for line in lines)


def test_golden_text():
    rules = scaffold_rules({"a": 0, "b": 0, "f": 2})
    assert format_rules(rules, canonical=False) == (GOLDEN / "scaffold_ab_f2.rules").read_text()


def test_superficiality_offenders():
    rules = scaffold_rules({"a": 0, "b": 0, "f": 2})
    offenders = []
    remaining = list(rules.clauses)
    while True:
        hit = check_superficial(RuleSet.build("r", remaining))
        if hit is None:
            break
        ci, term = hit
        offenders.append(f"{format_clause(remaining[ci])}\t{term}\n")
        del remaining[ci]
    assert "".join(offenders) == (GOLDEN / "scaffold_offenders.txt").read_text()


@pytest.mark.parametrize("sig", [{}, {"f": 1}])
def test_bad_signature(sig):
    with pytest.raises(ValueError):
        scaffold_rules(sig)


@pytest.mark.parametrize("text, order", [
    ("f(a,b)", ["f(a,b)", "a", "b"]),
    ("f(a,a)", ["f(a,a)", "a"]),
    ("f(g(a),a)", ["f(g(a),a)", "g(a)", "a"]),
])
def test_traversal_oracle(text, order):
    assert traversal_oracle(T(text)) == [T(x) for x in order]


SIG = {"a": 0, "b": 0, "f": 2, "g": 1}


@pytest.mark.parametrize("text, pairs", [
    ("a", []),
    ("f(a,b)", [("f(a,b)", "a"), ("a", "b")]),
    ("f(a,a)", [("f(a,a)", "a")]),
    ("f(f(a,b),f(b,a))", [("f(f(a,b),f(b,a))", "f(a,b)"), ("f(a,b)", "a"), ("a", "b"),
                          ("b", "f(b,a)")]),
])
def test_successor_examples(text, pairs):
    assert successor_facts(SIG, T(text)) == {Atom("s", (T(u), T(v))) for u, v in pairs}


@settings(max_examples=40, deadline=None)
@given(terms_over(SIG), st.sampled_from(["s", "su", "ne", "ni"]))
def test_relations_match_oracles(t, pred):
    assert relation(SIG, t, pred) == expected(t, pred)


WIDE = {"a": 0, "b": 0, "h": 3, "g": 1}


@settings(max_examples=25, deadline=None)
@given(terms_over(WIDE))
def test_ternary_generalisation(t):
    for pred in ("s", "su", "ni"):
        assert relation(WIDE, t, pred) == expected(t, pred)


def test_clause_order_is_irrelevant():
    rules = scaffold_rules(SIG)
    again = parse_rules(format_rules(rules))
    t = T("f(g(a),f(b,g(a)))")
    f1, _ = saturate_bounded(rules, [Atom("input", [t])], subterm_closure([t]))
    f2, _ = saturate_bounded(again, [Atom("input", [t])], subterm_closure([t]))
    assert set(f1) == set(f2)
