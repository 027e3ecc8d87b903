"""Exhaustive ground template enumeration over a small universe.

This is the reference the lifted checker is tested against.  The bounding
set Y ranges over the subterm-closed subsets of the universe and α over the
universe members that are one-step extensions of Y.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable, Optional

from ..engine import saturate_bounded
from ..terms import App, Atom, RuleSet, Var, apply, iter_subterms, match_atom, subterm_closure
from .schema import ALPHA, TemplateSchema

MAX_UNIVERSE = 8


@dataclass(frozen=True)
class GroundTemplate:
    sigma: frozenset
    gamma: tuple[Atom, ...]
    phi: Atom
    y: frozenset
    alpha: App

    @property
    def critical(self) -> bool:
        return not self.gamma


@dataclass(frozen=True)
class GroundResult:
    levels: tuple[frozenset, ...]      # levels[d] is B^d[T0] restricted to the universe
    events: frozenset

    @property
    def templates(self) -> frozenset:
        return self.levels[-1]


def bounding_subsets(universe) -> list[frozenset]:
    """All subterm-closed subsets, smallest first."""
    u = sorted(universe)
    out = []
    for k in range(len(u) + 1):
        for combo in combinations(u, k):
            s = frozenset(combo)
            if all(x in s for t in s for x in t.args):
                out.append(s)
    return out


def _clause_instances(clause, domain, fixed: Optional[dict] = None):
    fixed = fixed or {}
    free = [v for v in clause.variables() if v not in fixed]
    for values in product(domain, repeat=len(free)):
        s = dict(fixed)
        s.update(zip(free, values))
        yield apply(s, clause)


def _label(atom: Atom, y) -> bool:
    return all(t in y for t in atom.args)


def _initial(rules: RuleSet, ys, universe) -> set:
    out = set()
    for y in ys:
        for alpha in universe:
            if alpha in y or any(a not in y for a in alpha.args):
                continue
            domain = sorted(y | {alpha})
            wide = y | {alpha}
            for clause in rules.clauses:
                for inst in _clause_instances(clause, domain):
                    atoms = inst.atoms
                    if not all(_label(a, wide) for a in atoms):
                        continue
                    terms = {s for a in atoms for t in a.args for s in iter_subterms(t)}
                    if alpha not in terms:
                        continue
                    if any(alpha in set(iter_subterms(t)) for t in inst.conclusion.args):
                        continue
                    if any(alpha != t and alpha in set(iter_subterms(t)) for t in terms):
                        continue
                    if not (terms - {alpha}) <= y:
                        continue
                    sigma = frozenset(a for a in inst.antecedents if alpha not in a.args)
                    gamma = tuple(sorted(a for a in inst.antecedents if alpha in a.args))
                    out.add(GroundTemplate(sigma, gamma, inst.conclusion, y, alpha))
    return out


def _backchain(t: GroundTemplate, rules: RuleSet) -> set:
    out = set()
    wide = t.y | {t.alpha}
    domain = sorted(wide)
    for i, theta in enumerate(t.gamma):
        if theta in t.gamma[:i]:
            continue
        rest = t.gamma[:i] + t.gamma[i + 1:]
        for clause in rules.clauses:
            s = match_atom(clause.conclusion, theta)
            if s is None:
                continue
            for inst in _clause_instances(clause, domain, s):
                if not all(_label(a, wide) for a in inst.antecedents):
                    continue
                new_sigma = t.sigma | {a for a in inst.antecedents if t.alpha not in a.args}
                new_gamma = tuple(sorted(rest + tuple(a for a in inst.antecedents if t.alpha in a.args)))
                out.add(GroundTemplate(new_sigma, new_gamma, t.phi, t.y, t.alpha))
    return out


def ground_templates(rules: RuleSet, universe: Iterable, depth: int) -> GroundResult:
    universe = subterm_closure(universe)
    if len(universe) > MAX_UNIVERSE:
        raise ValueError("universe too large for ground oracle")
    ys = bounding_subsets(universe)
    level = frozenset(_initial(rules, ys, universe))
    levels = [level]
    frontier = set(level)
    for _ in range(depth):
        grown = set(level)
        nxt = set()
        for t in frontier:
            for r in _backchain(t, rules):
                if r not in grown:
                    grown.add(r)
                    nxt.add(r)
        level = frozenset(grown)
        levels.append(level)
        frontier = nxt
    events = set()
    for t in level:
        if t.critical:
            facts, _ = saturate_bounded(rules, t.sigma, t.y)
            if t.phi not in facts:
                events.add(t)
    return GroundResult(tuple(levels), frozenset(events))


# -- lifting check ------------------------------------------------------------

def _cover(pats, targets, theta, y, alpha, need_all: bool):
    """Map every pattern atom into ``targets``; with ``need_all`` the images
    must also cover every target (set semantics)."""
    def go(k, theta, hit):
        if k == len(pats):
            if not need_all or len(hit) == len(targets):
                yield theta
            return
        for j, t in enumerate(targets):
            m = match_atom(pats[k], t, theta)
            if m is None or not _ok(m, y, alpha):
                continue
            yield from go(k + 1, m, hit | {j})
    yield from go(0, theta, frozenset())


def _bijective(pats, targets, theta, y, alpha):
    if len(pats) != len(targets):
        return
    def go(k, theta, used):
        if k == len(pats):
            yield theta
            return
        for j, t in enumerate(targets):
            if j in used or (j > 0 and t == targets[j - 1] and j - 1 not in used):
                continue
            m = match_atom(pats[k], t, theta)
            if m is not None and _ok(m, y, alpha):
                yield from go(k + 1, m, used | {j})
    yield from go(0, theta, frozenset())


_A = Var("$alpha")


def _ok(theta, y, alpha) -> bool:
    return all(v == _A or (val in y) for v, val in theta.items()) and theta.get(_A, alpha) == alpha


def _open(a: Atom) -> Atom:
    return Atom(a.pred, [_A if t == ALPHA else t for t in a.args])


def is_instance(g: GroundTemplate, s: TemplateSchema) -> bool:
    """Is ``g`` a ground instance of ``s`` (Σ as a set, Γ as a multiset)?"""
    theta: dict = {_A: g.alpha}
    if s.alpha is not None:
        m = match_atom(Atom("$s", (s.alpha,)), Atom("$s", (g.alpha,)), theta)
        if m is None or not _ok(m, g.y, g.alpha):
            return False
        theta = m
    theta = match_atom(s.phi, g.phi, theta)
    if theta is None or not _ok(theta, g.y, g.alpha):
        return False
    targets_g = list(g.gamma)
    support = [Atom("$y", (t,)) for t in s.support]
    in_y = [Atom("$y", (t,)) for t in sorted(g.y)]
    for th in _bijective([_open(a) for a in s.gamma], targets_g, theta, g.y, g.alpha):
        for th2 in _cover(list(s.sigma), sorted(g.sigma), th, g.y, g.alpha, True):
            for _ in _cover(support, in_y, th2, g.y, g.alpha, False):
                return True
    return False
