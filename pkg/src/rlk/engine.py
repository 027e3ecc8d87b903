"""Bottom-up evaluation of Horn-clause rule sets.

Two modes share one semi-naive loop:

* bounded: every atom of every fired clause instance must be a label
  formula of a fixed universe (a subterm-closed set of ground terms), so
  evaluation always terminates;
* free: new terms may be built; evaluation runs for a bounded number of
  rounds.

Each derived atom keeps the first justification found for it, from which a
:class:`Derivation` can be rebuilt and checked independently.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .terms import (
    Atom, Clause, RuleSet, Var, apply, atom_terms, is_label_formula,
    match_atom, match_term, occurs_in, subterm_closure, term_vars,
)


@dataclass(frozen=True)
class EvalStats:
    rounds: int = 0
    firings: int = 0
    facts: int = 0


@dataclass(frozen=True)
class Provenance:
    clause: int
    substitution: tuple[tuple[Var, object], ...]
    antecedents: tuple[Atom, ...]


class FactBase:
    """Deduplicated ground atoms in derivation order, indexed by predicate.

    Atoms that came from the input set carry no provenance.
    """

    def __init__(self, atoms: Sequence[Atom], provenance: dict, sigma: Iterable[Atom]):
        self._atoms = tuple(atoms)
        self._order = {a: i for i, a in enumerate(self._atoms)}
        self._provenance = dict(provenance)
        self.sigma = frozenset(sigma)
        by_pred: dict[str, list[Atom]] = {}
        for a in self._atoms:
            by_pred.setdefault(a.pred, []).append(a)
        self._by_pred = {p: tuple(sorted(v)) for p, v in by_pred.items()}

    @classmethod
    def of(cls, atoms: Iterable[Atom]) -> "FactBase":
        atoms = sorted(set(atoms))
        return cls(atoms, {}, atoms)

    def __contains__(self, atom) -> bool:
        return atom in self._order

    def __iter__(self):
        return iter(self._atoms)

    def __len__(self):
        return len(self._atoms)

    def predicate(self, pred: str) -> tuple[Atom, ...]:
        return self._by_pred.get(pred, ())

    def provenance(self, atom: Atom) -> Optional[Provenance]:
        return self._provenance.get(atom)

    def derived(self) -> list[Atom]:
        return [a for a in self._atoms if a not in self.sigma]

    def sorted(self) -> list[Atom]:
        return sorted(self._atoms)


@dataclass(frozen=True)
class DerivationStep:
    atom: Atom
    clause: int
    substitution: tuple[tuple[Var, object], ...]
    # one entry per clause antecedent: index of an earlier step, or None for a member of sigma
    sources: tuple[Optional[int], ...]


@dataclass(frozen=True)
class Derivation:
    goal: Atom
    steps: tuple[DerivationStep, ...] = field(default_factory=tuple)

    @property
    def atoms(self) -> list[Atom]:
        return [s.atom for s in self.steps]

    def __len__(self):
        return len(self.steps)


class FreeModeError(ValueError):
    pass


def fact_bound(rules: RuleSet, sigma_size: int, universe_size: int) -> int:
    """Maximum fact count of a bounded saturation: |sigma| + sum_P |U|^arity(P)."""
    return sigma_size + sum(universe_size ** k for _, k in rules.predicates)


# -- the evaluation loop ---------------------------------------------------

class _Index:
    def __init__(self):
        self.rounds: dict[Atom, int] = {}
        self.by_pred: dict[str, list[Atom]] = {}
        self.by_arg: dict[tuple, list[Atom]] = {}

    def add(self, atom: Atom, rnd: int) -> None:
        self.rounds[atom] = rnd
        self.by_pred.setdefault(atom.pred, []).append(atom)
        for i, t in enumerate(atom.args):
            self.by_arg.setdefault((atom.pred, i, t), []).append(atom)

    def candidates(self, pattern: Atom, binding: dict, max_round: int):
        bucket = None
        for i, p in enumerate(pattern.args):
            if p.is_ground:
                bucket = self.by_arg.get((pattern.pred, i, p), ())
                break
            if type(p) is Var and p in binding:
                bucket = self.by_arg.get((pattern.pred, i, binding[p]), ())
                break
        if bucket is None:
            bucket = self.by_pred.get(pattern.pred, ())
        rounds = self.rounds
        for atom in bucket:
            if rounds[atom] > max_round:
                break
            yield atom


def _conclusion_instances(conclusion: Atom, binding: dict, universe_list):
    """Bind conclusion-only variables so that every argument lies in the universe."""
    open_args = [i for i, a in enumerate(conclusion.args)
                 if not a.is_ground and any(v not in binding for v in term_vars(a))]
    if not open_args:
        yield binding
        return

    def extend(k, b):
        if k == len(open_args):
            yield b
            return
        pattern = conclusion.args[open_args[k]]
        for t in universe_list:
            nb = dict(b)
            if match_term(pattern, t, nb):
                yield from extend(k + 1, nb)

    yield from extend(0, binding)


def _evaluate(rules: RuleSet, sigma: Iterable[Atom], label_universe, enum_universe,
              max_rounds: Optional[int]):
    """Semi-naive rounds.  ``label_universe`` restricts every fired instance
    (bounded mode); ``enum_universe`` supplies values for conclusion-only
    variables."""
    sigma_atoms = sorted(set(sigma))
    bounded = label_universe is not None
    universe_list = sorted(enum_universe) if enum_universe is not None else None

    if universe_list is None:
        for clause in rules.clauses:
            body_vars = {v for a in clause.antecedents for v in term_vars_of(a)}
            if any(v not in body_vars for v in term_vars_of(clause.conclusion)):
                raise FreeModeError(
                    f"clause {clause} has conclusion-only variables; free evaluation needs a universe")

    index = _Index()
    order: list[Atom] = []
    provenance: dict[Atom, Provenance] = {}
    delta: dict[str, list[Atom]] = {}
    for a in sigma_atoms:
        order.append(a)
        if not bounded or is_label_formula(a, label_universe):
            index.add(a, 0)
            delta.setdefault(a.pred, []).append(a)
    known = set(sigma_atoms)

    firings = 0
    rnd = 0
    exhausted = False
    while max_rounds is None or rnd < max_rounds:
        rnd += 1
        new: dict[Atom, Provenance] = {}

        def fire(ci: int, clause: Clause, binding: dict):
            nonlocal firings
            for full in _conclusion_instances(clause.conclusion, binding, universe_list):
                head = apply(full, clause.conclusion)
                if bounded and not is_label_formula(head, label_universe):
                    continue
                firings += 1
                if head in known or head in new:
                    continue
                new[head] = Provenance(
                    ci, tuple(sorted(full.items(), key=lambda kv: kv[0].name)),
                    tuple(apply(full, a) for a in clause.antecedents))

        for ci, clause in enumerate(rules.clauses):
            body = clause.antecedents
            if not body:
                if rnd == 1:
                    fire(ci, clause, {})
                continue
            for i, pivot in enumerate(body):
                rest = [(j, body[j]) for j in range(len(body)) if j != i]
                for fact in delta.get(pivot.pred, ()):
                    b = match_atom(pivot, fact)
                    if b is not None:
                        for full in _join(index, rest, i, b, rnd):
                            fire(ci, clause, full)

        if not new:
            exhausted = True
            break
        delta = {}
        for atom in sorted(new):
            provenance[atom] = new[atom]
            order.append(atom)
            known.add(atom)
            index.add(atom, rnd)
            delta.setdefault(atom.pred, []).append(atom)

    return order, provenance, sigma_atoms, EvalStats(rnd, firings, len(order)), exhausted


def term_vars_of(atom: Atom):
    for a in atom.args:
        yield from term_vars(a)


def _join(index: _Index, rest, pivot: int, binding: dict, rnd: int):
    if not rest:
        yield binding
        return
    (j, pattern), tail = rest[0], rest[1:]
    # antecedents before the pivot must come from strictly older rounds
    limit = rnd - 2 if j < pivot else rnd - 1
    if limit < 0:
        return
    for fact in index.candidates(pattern, binding, limit):
        b = match_atom(pattern, fact, binding)
        if b is not None:
            yield from _join(index, tail, pivot, b, rnd)


# -- public operations -----------------------------------------------------

def saturate_bounded(rules: RuleSet, sigma: Iterable[Atom], universe) -> tuple[FactBase, EvalStats]:
    """Least fixed point of the clause instances that are label formulas of ``universe``.

    Members of ``sigma`` that are not label formulas are kept in the result
    but never used as antecedents.
    """
    universe = frozenset(universe)
    order, prov, sigma_atoms, stats, _ = _evaluate(rules, sigma, universe, universe, None)
    bound = fact_bound(rules, len(sigma_atoms), len(universe))
    if len(order) > bound:
        raise AssertionError(f"{len(order)} facts exceed the polynomial bound {bound}")
    return FactBase(order, prov, sigma_atoms), stats


def saturate_free(rules: RuleSet, sigma: Iterable[Atom], max_rounds: Optional[int] = 1000,
                  universe=None) -> tuple[FactBase, EvalStats, bool]:
    """Breadth-first unrestricted evaluation for at most ``max_rounds`` rounds.

    Returns ``exhausted=True`` iff a fixed point was reached within the
    limit.  ``max_rounds=None`` runs until a fixed point (only safe for
    rule sets that cannot build new terms).  A ``universe`` is used solely
    to instantiate conclusion-only variables.
    """
    if max_rounds is not None and max_rounds < 0:
        raise ValueError("max_rounds must be non-negative")
    order, prov, sigma_atoms, stats, done = _evaluate(rules, sigma, None, universe, max_rounds)
    return FactBase(order, prov, sigma_atoms), stats, done


def proves_local(rules: RuleSet, sigma: Iterable[Atom], goal: Atom, with_stats: bool = False):
    """Decide the restricted relation: derivable using only terms of sigma and the goal.

    Returns a Derivation or None; with ``with_stats`` a pair (result, EvalStats).
    """
    if not goal.is_ground:
        raise ValueError(f"goal {goal} is not ground")
    sigma = list(sigma)
    universe = subterm_closure(atom_terms(sigma + [goal]))
    facts, stats = saturate_bounded(rules, sigma, universe)
    d = extract_derivation(facts, goal) if goal in facts else None
    return (d, stats) if with_stats else d


def extract_derivation(facts: FactBase, goal: Atom) -> Derivation:
    """Rebuild a derivation of ``goal`` from the provenance stored in ``facts``."""
    if goal not in facts:
        raise KeyError(goal)
    needed: set[Atom] = set()
    stack = [goal]
    while stack:
        a = stack.pop()
        if a in needed or a in facts.sigma:
            continue
        needed.add(a)
        stack.extend(facts.provenance(a).antecedents)
    ordered = sorted(needed, key=lambda a: facts._order[a])
    position = {a: i for i, a in enumerate(ordered)}
    steps = []
    for a in ordered:
        p = facts.provenance(a)
        sources = tuple(None if b in facts.sigma else position[b] for b in p.antecedents)
        steps.append(DerivationStep(a, p.clause, p.substitution, sources))
    return Derivation(goal, tuple(steps))


def validate_derivation(rules: RuleSet, sigma: Iterable[Atom], d: Derivation, universe=None) -> bool:
    """Independent check of a derivation against the rule set.

    Every step must be a ground instance of the cited clause whose
    antecedents are members of sigma or atoms of earlier steps.  With a
    universe, every atom involved must also be a label formula of it.
    """
    sigma = set(sigma)
    if not d.steps:
        return d.goal in sigma
    if d.steps[-1].atom != d.goal:
        return False
    for i, step in enumerate(d.steps):
        if not 0 <= step.clause < len(rules.clauses):
            return False
        clause = rules.clauses[step.clause]
        s = dict(step.substitution)
        if any(v not in s or not s[v].is_ground for v in clause.variables()):
            return False
        if apply(s, clause.conclusion) != step.atom:
            return False
        if len(step.sources) != len(clause.antecedents):
            return False
        if universe is not None and not is_label_formula(step.atom, universe):
            return False
        for pattern, src in zip(clause.antecedents, step.sources):
            inst = apply(s, pattern)
            if src is None:
                if inst not in sigma:
                    return False
            elif not (isinstance(src, int) and 0 <= src < i and d.steps[src].atom == inst):
                return False
            if universe is not None and not is_label_formula(inst, universe):
                return False
    return True


def check_superficial(rules: RuleSet) -> Optional[tuple[int, object]]:
    """``None`` if every conclusion term occurs in some antecedent, else the first offender."""
    for ci, clause in enumerate(rules.clauses):
        for arg in clause.conclusion.args:
            if not any(occurs_in(arg, t) for a in clause.antecedents for t in a.args):
                return ci, arg
    return None
