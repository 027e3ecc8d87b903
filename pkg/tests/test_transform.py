import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rlk.corpus import KEYS, corpus
from rlk.engine import check_superficial, proves_local, saturate_free
from rlk.syntax import format_rules, parse_atom, parse_clause, parse_rules
from rlk.terms import Atom, atom_terms, canonical_rename, clause_key, subterm_closure
from rlk.transform import (
    TransformError, bounded_query_via_mention, maximal_terms, mentionize, prime_transform,
)

from gen import grown_universe, random_atom, random_rules, random_superficial

A = parse_atom


def clause_set(rules):
    return {clause_key(canonical_rename(c)) for c in rules.clauses}


class TestMentionize:
    def test_monotone_f(self):
        assert clause_set(mentionize(corpus("monotone-f").rules, "m")) == \
            clause_set(corpus("monotone-f-superficial").rules)

    def test_transitivity(self):
        out = mentionize(parse_rules("le(X,Y), le(Y,Z) -> le(X,Z)."), "m")
        assert format_rules(out) == (
            "le(V0,V1) -> m(V0).\n"
            "le(V0,V1) -> m(V1).\n"
            "m(V0), m(V1), m(V2), le(V0,V1), le(V1,V2) -> le(V0,V2).\n"
        )

    @pytest.mark.parametrize("key", KEYS)
    def test_always_superficial(self, key):
        assert check_superficial(mentionize(corpus(key).rules)) is None

    def test_collision(self):
        with pytest.raises(TransformError):
            mentionize(parse_rules("m(X) -> p(X)."), "m")

    def test_maximal_terms(self):
        c = parse_clause("le(X,Y) -> le(f(X),f(Y)).")
        assert [str(t) for t in maximal_terms(c)] == ["f(X)", "f(Y)"]


class TestBoundedQuery:
    def test_monotone(self):
        rules = corpus("trans-mono").rules
        assert bounded_query_via_mention(rules, [A("le(a,b)")], A("le(f(a),f(b))"))

    def test_nonlocal_demo(self):
        assert not bounded_query_via_mention(corpus("nonlocal-demo").rules, [A("q(c)")], A("r(c)"))

    def test_goal_in_sigma(self):
        assert bounded_query_via_mention(parse_rules("p(X) -> q(X)."), [A("r(a)")], A("r(a)"))

    @settings(max_examples=80, deadline=None)
    @given(st.integers(0, 10 ** 6))
    def test_agrees_with_engine(self, seed):
        rng = random.Random(seed)
        preds = [("p", 1), ("q", 2)]
        fns = [("a", 0), ("b", 0), ("f", 1)]
        rules = random_rules(rng, preds, fns, max_clauses=3, depth=1)
        u = sorted(grown_universe(rng, fns, rng.randint(2, 5)))
        sigma = [Atom(p, [rng.choice(u) for _ in range(n)])
                 for p, n in (rng.choice(preds) for _ in range(rng.randint(0, 3)))]
        p, n = rng.choice(preds)
        goal = Atom(p, [rng.choice(u) for _ in range(n)])
        assert bounded_query_via_mention(rules, sigma, goal) == \
            (proves_local(rules, sigma, goal) is not None)


SIMPLE = parse_rules("input(X) -> p(X).\np(X) -> accept.")


class TestPrime:
    def test_shape(self):
        out = prime_transform(SIMPLE, 1, "input", "accept", "q")
        assert clause_set(out) == clause_set(parse_rules(
            "input__p(X,X).\n"
            "input__p(W,X) -> p__p(W,X).\n"
            "p__p(W,X) -> accept__p(W).\n"
            "accept__p(X) -> q(X).\n"))

    def test_derivability(self):
        out = prime_transform(SIMPLE, 1, "input", "accept", "q")
        assert proves_local(out, [], A("q(a)")) is not None

    @pytest.mark.parametrize("kwargs", [
        dict(k=2, input="input", accept="accept", goal="q"),
        dict(k=1, input="input", accept="p", goal="q"),
        dict(k=1, input="input", accept="accept", goal="p"),
    ])
    def test_errors(self, kwargs):
        with pytest.raises(TransformError):
            prime_transform(SIMPLE, **kwargs)

    def test_requires_superficial(self):
        with pytest.raises(TransformError):
            prime_transform(parse_rules("input(X) -> p(f(X)).\np(X) -> accept."),
                            1, "input", "accept", "q")

    def test_primed_name_collision(self):
        rules = parse_rules("input(X), p(X), p__p(X) -> accept.")
        with pytest.raises(TransformError):
            prime_transform(rules, 1, "input", "accept", "q")

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 10 ** 6), st.integers(1, 2))
    def test_agrees_with_source(self, seed, k):
        rng = random.Random(seed)
        rules = random_superficial(rng, k)
        out = prime_transform(rules, k, "input", "accept", "goal")
        fns = [("a", 0), ("b", 0), ("f", 1), ("g", 2)]
        ts = [random_atom(rng, [("t", 1)], fns, 2).args[0] for _ in range(k)]
        facts, _, done = saturate_free(rules, [Atom("input", ts)], max_rounds=None)
        assert done and set(atom_terms(facts)) <= subterm_closure(ts)
        d = proves_local(out, [], Atom("goal", ts))
        assert (d is not None) == (Atom("accept", ()) in facts)
        if d is not None:
            assert all(list(s.atom.args[:k]) == ts for s in d.steps)
