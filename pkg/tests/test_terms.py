import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rlk.syntax import parse_atom, parse_clause, parse_term
from rlk.terms import (
    App, Atom, Clause, RuleSet, SignatureError, Var, apply, canonical_rename, compose,
    dag_size, is_label_formula, match_atom, subterm_closure, textual_size, unify,
)

from gen import random_term

T = parse_term
A = parse_atom


def ground_terms(max_leaves=12):
    leaf = st.sampled_from([App("a"), App("b")])
    return st.recursive(
        leaf,
        lambda kids: st.one_of(
            st.builds(lambda x: App("g", [x]), kids),
            st.builds(lambda x, y: App("f", [x, y]), kids, kids),
        ),
        max_leaves=max_leaves,
    )


class TestSubtermClosure:
    @pytest.mark.parametrize("terms, expected", [
        (["f(g(a),a)"], {"f(g(a),a)", "g(a)", "a"}),
        (["a"], {"a"}),
        (["f(a,b)", "g(a)"], {"f(a,b)", "g(a)", "a", "b"}),
    ])
    def test_examples(self, terms, expected):
        assert subterm_closure(T(t) for t in terms) == {T(e) for e in expected}

    def test_rejects_variables(self):
        with pytest.raises(ValueError):
            subterm_closure([T("f(X)")])

    @given(ground_terms())
    def test_closed_and_idempotent(self, t):
        u = subterm_closure([t])
        assert t in u
        assert all(a in u for s in u for a in s.args)
        assert subterm_closure(u) == u


@pytest.mark.parametrize("text, size", [("f(a,a)", 2), ("a", 1), ("f(g(a),g(a))", 3)])
def test_dag_size(text, size):
    assert dag_size(T(text)) == size


@given(ground_terms())
def test_dag_size_never_exceeds_textual_size(t):
    assert 1 <= dag_size(t) <= textual_size(t)


class TestUnify:
    def test_binds(self):
        s = unify(A("le(X,f(Y))"), A("le(a,f(b))"))
        assert s == {Var("X"): T("a"), Var("Y"): T("b")}

    def test_occurs_check(self):
        assert unify(A("p(X)"), A("p(f(X))")) is None

    def test_predicate_clash(self):
        assert unify(A("p(a)"), A("q(a)")) is None

    def test_chained_bindings_resolved(self):
        s = unify(A("p(X,Y,Z)"), A("p(Y,Z,f(a))"))
        assert apply(s, A("p(X,Y,Z)")) == A("p(f(a),f(a),f(a))")

    @settings(max_examples=200)
    @given(st.integers(0, 10 ** 6))
    def test_unifier_equalizes(self, seed):
        rng = random.Random(seed)
        fns = [("a", 0), ("b", 0), ("f", 2), ("g", 1)]
        vs = [Var("X"), Var("Y"), Var("Z")]
        a = Atom("p", [random_term(rng, fns, 2, vs) for _ in range(2)])
        b = Atom("p", [random_term(rng, fns, 2, vs) for _ in range(2)])
        s = unify(a, b)
        if s is not None:
            assert apply(s, a) == apply(s, b)


class TestApply:
    def test_ground_instance(self):
        assert apply({Var("X"): T("a")}, A("le(X,X)")) == A("le(a,a)")

    def test_identity(self):
        c = parse_clause("q(X), r(Y) -> p(f(X,Y)).")
        assert apply({}, c) == c

    def test_composition(self):
        s = compose({Var("X"): T("f(Y)")}, {Var("Y"): T("b")})
        assert apply(s, A("p(X)")) == A("p(f(b))")


class TestLabelFormula:
    def test_inside(self):
        assert is_label_formula(A("le(a,b)"), {T("a"), T("b")})

    def test_outside(self):
        assert not is_label_formula(A("le(f(a),b)"), {T("a"), T("b")})

    def test_nullary(self):
        assert is_label_formula(Atom("accept", ()), frozenset())


class TestCanonicalRename:
    def test_numbering(self):
        assert str(canonical_rename(parse_clause("p(B,A)."))) == "p(V0,V1)."

    def test_alpha_equivalence(self):
        a = canonical_rename(parse_clause("q(Z) -> p(Z)."))
        b = canonical_rename(parse_clause("q(W) -> p(W)."))
        assert a == b

    def test_idempotent(self):
        c = parse_clause("p(V0).")
        assert canonical_rename(c) == c


def test_match_is_one_way():
    assert match_atom(A("p(X,X)"), A("p(a,a)")) == {Var("X"): T("a")}
    assert match_atom(A("p(X,X)"), A("p(a,b)")) is None
    assert match_atom(A("p(a)"), A("p(X)")) is None


def test_ruleset_signature_conflict():
    with pytest.raises(SignatureError):
        RuleSet.build("bad", [Clause((A("p(f(X))"),), A("p(f(X,X))"))])


def test_term_order_is_total_and_consistent():
    terms = sorted({T(x) for x in ["a", "b", "f(a,b)", "g(a)", "X", "f(X,a)"]})
    for x, y in zip(terms, terms[1:]):
        assert x < y and not y < x
