"""Random generators and brute-force oracles shared by the tests."""

from __future__ import annotations

import random
from itertools import product

from rlk.terms import App, Atom, Clause, RuleSet, Var, apply, iter_subterms, subterm_closure, term_vars

VARS = [Var("X"), Var("Y"), Var("Z")]


def random_term(rng: random.Random, functions, depth: int, variables=()):
    """``functions`` is a list of (name, arity); constants have arity 0."""
    consts = [f for f, n in functions if n == 0]
    comps = [(f, n) for f, n in functions if n > 0]
    if depth > 0 and comps and rng.random() < 0.45:
        f, n = rng.choice(comps)
        return App(f, [random_term(rng, functions, depth - 1, variables) for _ in range(n)])
    if variables and rng.random() < 0.7:
        return rng.choice(list(variables))
    return App(rng.choice(consts), ())


def random_atom(rng, predicates, functions, depth, variables=()):
    p, n = rng.choice(predicates)
    return Atom(p, [random_term(rng, functions, depth, variables) for _ in range(n)])


def random_rules(rng, predicates, functions, max_clauses=3, depth=1, max_body=2, allow_facts=True):
    clauses = []
    for _ in range(rng.randint(1, max_clauses)):
        body = tuple(random_atom(rng, predicates, functions, depth, VARS)
                     for _ in range(rng.randint(0 if allow_facts else 1, max_body)))
        head = random_atom(rng, predicates, functions, depth, VARS)
        clauses.append(Clause(body, head))
    return RuleSet.build("random", clauses, functions=dict(functions),
                         predicates=dict(predicates))


def brute_bounded(rules: RuleSet, sigma, universe) -> set:
    """Naive closure over every ground instance with variables ranging over
    ``universe``; an independent reading of bounded derivability."""
    universe = sorted(universe)
    label = set(universe)

    def ok(a):
        return all(t in label for t in a.args)

    facts = set(sigma)
    usable = {a for a in facts if ok(a)}
    changed = True
    while changed:
        changed = False
        for c in rules.clauses:
            vs = c.variables()
            for values in product(universe, repeat=len(vs)):
                s = dict(zip(vs, values))
                head = apply(s, c.conclusion)
                if head in facts or not ok(head):
                    continue
                if all(apply(s, a) in usable for a in c.antecedents):
                    facts.add(head)
                    usable.add(head)
                    changed = True
    return facts


def ground_atoms_over(predicates, terms):
    out = []
    for p, n in predicates:
        for args in product(sorted(terms), repeat=n):
            out.append(Atom(p, args))
    return out


def random_ground_term(rng, functions, max_depth):
    return random_term(rng, functions, max_depth)


def small_universe(rng, functions, cap=6, depth=2, tries=200):
    for _ in range(tries):
        u = subterm_closure([random_ground_term(rng, functions, depth) for _ in range(rng.randint(1, 2))])
        if len(u) <= cap:
            return u
    return subterm_closure([App(next(f for f, n in functions if n == 0), ())])


def is_subterm(u, v) -> bool:
    return u == v or any(is_subterm(u, a) for a in v.args)


def vars_of(atom):
    out = set()
    for t in atom.args:
        out.update(term_vars(t))
    return out


def grown_universe(rng, functions, size: int) -> frozenset:
    """A subterm-closed set of exactly ``size`` ground terms, grown by
    applying random symbols to members already present."""
    consts = [App(f, ()) for f, n in functions if n == 0]
    comps = [(f, n) for f, n in functions if n > 0]
    members = [rng.choice(consts)]
    seen = set(members)
    stall = 0
    while len(members) < size and stall < 200:
        if not comps or rng.random() < 0.25:
            t = rng.choice(consts)
        else:
            f, n = rng.choice(comps)
            t = App(f, [rng.choice(members) for _ in range(n)])
        if t in seen:
            stall += 1
            continue
        seen.add(t)
        members.append(t)
    return frozenset(members)


def random_superficial(rng, k: int, functions=(("a", 0), ("b", 0), ("f", 1), ("g", 2))):
    """A small superficial rule set over ``input/k``, ``accept/0``, ``p/1`` and ``q/2``.

    Conclusion arguments are drawn from subterms of the antecedent arguments,
    so forward chaining never builds a new term.
    """
    functions = list(functions)
    preds = [("input", k), ("p", 1), ("q", 2)]
    clauses = []
    for i in range(rng.randint(2, 5)):
        body = [random_atom(rng, preds, functions, rng.choice((0, 0, 1)), VARS)
                for _ in range(rng.randint(1, 2))]
        if i == 0:
            body[0] = random_atom(rng, preds[:1], functions, 0, VARS)
        pool = sorted({s for a in body for t in a.args for s in iter_subterms(t)})
        if rng.random() < 0.35 or not pool:
            head = Atom("accept", ())
        else:
            p, n = rng.choice([("p", 1), ("q", 2)])
            head = Atom(p, [rng.choice(pool) for _ in range(n)])
        clauses.append(Clause(tuple(body), head))
    return RuleSet.build("superficial", clauses, functions=dict(functions),
                         predicates={"input": k, "accept": 0, "p": 1, "q": 2})


def random_grammar(rng, max_nonterminals=4, max_productions=8, terminals=("a", "b", "c")):
    from rlk.grammar import Grammar

    nts = ["S", "A", "B", "C"][:rng.randint(1, max_nonterminals)]
    binary, lexical = set(), set()
    lexical.add((rng.choice(nts), rng.choice(terminals)))
    for _ in range(rng.randint(1, max_productions) - 1):
        if rng.random() < 0.6:
            binary.add((rng.choice(nts), rng.choice(nts), rng.choice(nts)))
        else:
            lexical.add((rng.choice(nts), rng.choice(terminals)))
    return Grammar("S", tuple(sorted(binary)), tuple(sorted(lexical)))
