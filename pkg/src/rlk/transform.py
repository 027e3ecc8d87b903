"""Source-to-source rule set transformations.

``mentionize`` gates every clause on a unary "mentioned" predicate so that
forward chaining never leaves the terms of the query; ``prime_transform``
threads the input terms through every predicate of a superficial rule set,
giving a rule set whose unrestricted and restricted consequences agree.
"""

from __future__ import annotations

from typing import Iterable

from .engine import check_superficial, saturate_free
from .terms import (
    App, Atom, Clause, RuleSet, Var, atom_terms, canonical_rename, clause_key,
    is_proper_subterm,
)

DEFAULT_MENTION = "m__"
DEFAULT_PRIME_SUFFIX = "__p"


class TransformError(ValueError):
    pass


def _canonical(name: str, clauses: Iterable[Clause], **sig) -> RuleSet:
    unique = {}
    for c in clauses:
        c = canonical_rename(c)
        unique.setdefault(clause_key(c), c)
    return RuleSet.build(name, [unique[k] for k in sorted(unique)], **sig)


def _vars(prefix: str, n: int) -> list[Var]:
    return [Var(f"{prefix}{i}") for i in range(1, n + 1)]


def maximal_terms(clause: Clause) -> list:
    """Distinct clause terms that are not proper subterms of another clause term,
    in first-occurrence order."""
    args = []
    for atom in clause.atoms:
        for t in atom.args:
            if t not in args:
                args.append(t)
    return [t for t in args if not any(is_proper_subterm(t, u) for u in args if u is not t)]


def mentionize(rules: RuleSet, mention: str = DEFAULT_MENTION) -> RuleSet:
    """Superficial rule set computing the bounded relation of ``rules``."""
    if mention in rules.predicate_arity:
        raise TransformError(f"mention predicate {mention!r} already occurs in {rules.name}")
    out = []
    for f, n in rules.functions:
        xs = _vars("X", n)
        for x in xs:
            out.append(Clause((Atom(mention, [App(f, xs)]),), Atom(mention, [x])))
    for p, n in rules.predicates:
        xs = _vars("X", n)
        for x in xs:
            out.append(Clause((Atom(p, xs),), Atom(mention, [x])))
    for clause in rules.clauses:
        gates = tuple(Atom(mention, [t]) for t in maximal_terms(clause))
        out.append(Clause(gates + clause.antecedents, clause.conclusion))
    preds = dict(rules.predicates)
    preds[mention] = 1
    return _canonical(f"{rules.name}-mention", out,
                      functions=rules.function_arity, predicates=preds)


def bounded_query_via_mention(rules: RuleSet, sigma: Iterable[Atom], goal: Atom,
                              mention: str = DEFAULT_MENTION) -> bool:
    """Decide the restricted relation by plain forward chaining on ``mentionize(rules)``."""
    if not goal.is_ground:
        raise ValueError(f"goal {goal} is not ground")
    sigma = list(sigma)
    if goal in sigma:
        return True
    gated = mentionize(rules, mention)
    seeds = {Atom(mention, [t]) for t in atom_terms(sigma + [goal])}
    facts, _, done = saturate_free(gated, sigma + sorted(seeds), max_rounds=None)
    assert done
    return goal in facts


def prime_transform(rules: RuleSet, k: int, input: str, accept: str, goal: str,
                    suffix: str = DEFAULT_PRIME_SUFFIX) -> RuleSet:
    """Thread ``k`` input terms through every predicate of a superficial rule set.

    The result derives ``goal(t1..tk)`` from no facts exactly when the
    source derives ``accept`` from ``input(t1..tk)``.
    """
    preds = rules.predicate_arity
    if preds.get(input, k) != k:
        raise TransformError(f"{input} has arity {preds[input]}, expected {k}")
    if preds.get(accept, 0) != 0:
        raise TransformError(f"{accept} has arity {preds[accept]}, expected 0")
    if goal in preds:
        raise TransformError(f"goal predicate {goal!r} is not fresh")
    offender = check_superficial(rules)
    if offender is not None:
        ci, term = offender
        raise TransformError(f"clause {ci} is not superficial (conclusion term {term})")
    preds = {**preds, input: k, accept: 0}
    primed = {p: p + suffix for p in preds}
    taken = set(preds) | {goal}
    for p, q in primed.items():
        if q in taken:
            raise TransformError(f"primed name {q!r} collides with an existing predicate")

    def prime(atom: Atom, prefix) -> Atom:
        return Atom(primed[atom.pred], list(prefix) + list(atom.args))

    xs = _vars("K", k)
    out = [
        Clause((), Atom(primed[input], xs + xs)),
        Clause((Atom(primed[accept], xs),), Atom(goal, xs)),
    ]
    for clause in rules.clauses:
        used = {v.name for v in clause.variables()}
        prefix = []
        i = 0
        while len(prefix) < k:
            i += 1
            if f"K{i}" not in used:
                prefix.append(Var(f"K{i}"))
        out.append(Clause(tuple(prime(a, prefix) for a in clause.antecedents),
                          prime(clause.conclusion, prefix)))
    out_preds = {primed[p]: n + k for p, n in preds.items()}
    out_preds[goal] = k
    return _canonical(f"{rules.name}-prime", out,
                      functions=rules.function_arity, predicates=out_preds)
