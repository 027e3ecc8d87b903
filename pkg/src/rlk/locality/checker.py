"""Feedback events, justification and the inductive-locality semi-decision loop."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Optional

from ..engine import saturate_bounded
from ..terms import App, Atom, RuleSet, Var, apply, match_term, subterm_closure
from .lifted import b_step, cached_backchain, gamma_positions, generate_initial
from .schema import ALPHA, TemplateSchema

DEPTH_EXHAUSTED = "depth-exhausted"
FIXPOINT = "fixpoint-without-justification"


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class FeedbackEvent:
    sigma: tuple[Atom, ...]
    phi: Atom
    y: frozenset
    alpha: App

    def verify(self, rules: RuleSet) -> bool:
        """Both entailment conditions, plus the side conditions on Y and α."""
        terms = [t for a in self.sigma + (self.phi,) for t in a.args]
        if not set(subterm_closure(terms)) <= self.y or subterm_closure(self.y) != self.y:
            return False
        if self.alpha in self.y or any(a not in self.y for a in self.alpha.args):
            return False
        wide, _ = saturate_bounded(rules, self.sigma, self.y | {self.alpha})
        narrow, _ = saturate_bounded(rules, self.sigma, self.y)
        return self.phi in wide and self.phi not in narrow


@dataclass(frozen=True)
class Verdict:
    kind: str                      # inductively-local | not-local | inconclusive
    depth: int
    event: Optional[FeedbackEvent] = None
    reason: Optional[str] = None
    schemas_per_level: tuple[int, ...] = ()

    @property
    def local(self) -> bool:
        return self.kind == "inductively-local"

    def __str__(self) -> str:
        if self.kind == "inductively-local":
            return f"inductively-local n={self.depth}"
        if self.kind == "not-local":
            return "not-local"
        return f"inconclusive {self.reason}"


def InductivelyLocal(depth: int, levels=()) -> Verdict:
    return Verdict("inductively-local", depth, schemas_per_level=tuple(levels))


def NotLocal(event: FeedbackEvent, depth: int, levels=()) -> Verdict:
    return Verdict("not-local", depth, event=event, schemas_per_level=tuple(levels))


def Inconclusive(reason: str, depth: int, levels=()) -> Verdict:
    return Verdict("inconclusive", depth, reason=reason, schemas_per_level=tuple(levels))


# -- freezing ------------------------------------------------------------------

@dataclass(frozen=True)
class Frozen:
    sigma: tuple[Atom, ...]
    gamma: tuple[Atom, ...]
    phi: Atom
    y: frozenset
    alpha: App
    mapping: dict = field(compare=False, hash=False)

    def ground(self, atom: Atom) -> Atom:
        return apply(self.mapping, atom)


def _reserved(rules: Optional[RuleSet]) -> set[str]:
    if rules is None:
        return set()
    return {f for f, _ in rules.functions}


def freeze(s: TemplateSchema, rules: Optional[RuleSet] = None) -> Frozen:
    """Ground ``s`` with fresh constants; α-free terms span the bounding set."""
    taken = _reserved(rules)
    names = (f"c{i}" for i in range(10 ** 9))
    mapping: dict = {}
    for v in s.variables():
        name = next(names)
        while name in taken:
            name = next(names)
        mapping[v] = App(name, ())
    if s.alpha is None:
        name = "calpha"
        while name in taken:
            name += "_"
        alpha = App(name, ())
    else:
        alpha = apply(mapping, s.alpha)
    mapping[ALPHA] = alpha

    def g(atom: Atom) -> Atom:
        return Atom(atom.pred, [alpha if t == ALPHA else apply(mapping, t) for t in atom.args])

    free_terms = [apply(mapping, t) for a in (s.phi,) + s.sigma for t in a.args]
    free_terms += [apply(mapping, t) for a in s.gamma for t in a.args if t != ALPHA]
    free_terms += [apply(mapping, t) for t in s.support]
    if s.alpha is not None:
        free_terms += list(alpha.args)
    fr = Frozen(tuple(g(a) for a in s.sigma), tuple(g(a) for a in s.gamma), g(s.phi),
                subterm_closure(free_terms), alpha, {})
    object.__setattr__(fr, "mapping", mapping)
    return fr


def is_feedback_event(s: TemplateSchema, rules: RuleSet) -> Optional[FeedbackEvent]:
    if s.gamma:
        return None
    fr = freeze(s, rules)
    facts, _ = saturate_bounded(rules, fr.sigma, fr.y)
    if fr.phi in facts:
        return None
    event = FeedbackEvent(fr.sigma, fr.phi, fr.y, fr.alpha)
    if not event.verify(rules):
        raise AssertionError(f"schema {s} froze to an invalid feedback event")
    return event


# -- justification -----------------------------------------------------------

class _Budget:
    __slots__ = ("left",)

    def __init__(self, n: Optional[int]):
        self.left = n

    def tick(self, n: int = 1) -> None:
        if self.left is None:
            return
        self.left -= n
        if self.left < 0:
            raise BudgetExceeded("justification search budget exhausted")


def _extend(pattern: Atom, target: Atom, theta: dict) -> Optional[dict]:
    if pattern.pred != target.pred or len(pattern.args) != len(target.args):
        return None
    out = dict(theta)
    for p, t in zip(pattern.args, target.args):
        if not match_term(p, t, out):
            return None
    # template variables range over the bounding set, never over α
    if any(val == ALPHA for val in out.values()):
        return None
    return out


def _matches(ti: TemplateSchema, target: TemplateSchema, budget: _Budget):
    """Substitutions placing ti's Σ inside target's Σ and ti's Γ inside
    target's Γ (as a sub-multiset), with α sent to α."""
    theta: dict = {}
    if ti.alpha is not None:
        if target.alpha is None:
            return
        if not match_term(ti.alpha, target.alpha, theta):
            return
        if any(val == ALPHA for val in theta.values()):
            return

    gam, sig = list(ti.gamma), list(ti.sigma)

    def gamma_step(k, theta, used):
        if k == len(gam):
            yield from sigma_step(0, theta)
            return
        for i, t in enumerate(target.gamma):
            if i in used:
                continue
            budget.tick()
            m = _extend(gam[k], t, theta)
            if m is not None:
                yield from gamma_step(k + 1, m, used | {i})

    def sigma_step(k, theta):
        if k == len(sig):
            yield theta
            return
        for t in target.sigma:
            budget.tick()
            m = _extend(sig[k], t, theta)
            if m is not None:
                yield from sigma_step(k + 1, m)

    yield from gamma_step(0, theta, frozenset())


def _inside(terms, y, theta: dict, budget: _Budget):
    """Extensions of ``theta`` placing every term of ``terms`` in ``y``."""
    if not terms:
        yield theta
        return
    first, rest = terms[0], terms[1:]
    for t in sorted(y):
        budget.tick()
        m = dict(theta)
        if match_term(first, t, m):
            yield from _inside(rest, y, m, budget)


class _Profile:
    """Predicate counts used to skip hopeless matches quickly."""
    __slots__ = ("gamma", "sigma")

    def __init__(self, s: TemplateSchema):
        self.gamma = Counter(a.pred for a in s.gamma)
        self.sigma = {a.pred for a in s.sigma}

    def fits(self, other: "_Profile") -> bool:
        return self.sigma <= other.sigma and all(other.gamma[p] >= n for p, n in self.gamma.items())


def _var_set(atom: Atom) -> set:
    out: set = set()
    stack = list(atom.args)
    while stack:
        t = stack.pop()
        if type(t) is Var:
            out.add(t)
        else:
            stack.extend(t.args)
    return out


class Justifier:
    """Entailment of backchaining results by a fixed template set."""

    def __init__(self, t: Iterable[TemplateSchema], rules: RuleSet, budget: Optional[int] = None,
                 backchain_cache: Optional[dict] = None):
        self.rules = rules
        self.templates = [(s, _Profile(s), _var_set(s.phi)) for s in t]
        self.budget = _Budget(budget)
        self.cache = backchain_cache if backchain_cache is not None else {}

    def entailed(self, s: TemplateSchema) -> bool:
        """Does the template set, used as hypotheses, give Σ ∪ {Ψi} ⊢_Y Φ for ``s``?"""
        fr = freeze(s, self.rules)
        self.budget.tick()
        facts, _ = saturate_bounded(self.rules, fr.sigma, fr.y)
        if fr.phi in facts:
            return True
        prof = _Profile(s)
        extra = set()
        for ti, tp, phi_vars in self.templates:
            if not tp.fits(prof) or len(ti.gamma) > len(s.gamma):
                continue
            for theta in _matches(ti, s, self.budget):
                ground = {v: apply(fr.mapping, t) for v, t in theta.items()}
                for g in _inside(ti.support, fr.y, ground, self.budget):
                    loose = sorted(phi_vars - g.keys())
                    # unconstrained conclusion variables may take any value in Y
                    self.budget.tick(len(fr.y) ** len(loose))
                    for values in product(sorted(fr.y), repeat=len(loose)):
                        extra.add(apply({**g, **dict(zip(loose, values))}, ti.phi))
        extra -= set(fr.sigma)
        if not extra:
            return False
        facts, _ = saturate_bounded(self.rules, list(fr.sigma) + sorted(extra), fr.y)
        return fr.phi in facts

    def justifies(self, s: TemplateSchema) -> bool:
        for i in gamma_positions(s):
            if all(self.entailed(r) for r in cached_backchain(s, i, self.rules, self.cache)):
                return True
        return False


def justifies(t: Iterable[TemplateSchema], s: TemplateSchema, rules: RuleSet,
              budget: Optional[int] = None) -> bool:
    return Justifier(t, rules, budget).justifies(s)


def self_justifying(t: Iterable[TemplateSchema], rules: RuleSet, budget: Optional[int] = None) -> bool:
    t = list(t)
    if any(is_feedback_event(s, rules) for s in t if s.critical):
        return False
    j = Justifier(t, rules, budget)
    return all(s.critical or j.justifies(s) for s in t)


def check_locality(rules: RuleSet, max_depth: int = 10, budget: Optional[int] = 10 ** 6) -> Verdict:
    """Search B^0[T0], B^1[T0], ... for a feedback event or a self-justifying level."""
    if max_depth < 0:
        raise ValueError("max_depth must be non-negative")
    cache: dict = {}
    justified: set = set()
    checked: set = set()
    levels: list[int] = []
    t = generate_initial(rules)
    for depth in range(max_depth + 1):
        levels.append(len(t))
        for s in t:
            if s.critical and s not in checked:
                checked.add(s)
                event = is_feedback_event(s, rules)
                if event is not None:
                    return NotLocal(event, depth, levels)
        j = Justifier(t, rules, budget, cache)
        try:
            ok = True
            # T only grows, so a schema justified at a lower level stays justified
            pending = [s for s in t if not s.critical and s not in justified]
            for s in pending:
                if j.justifies(s):
                    justified.add(s)
                else:
                    ok = False
                    break
        except BudgetExceeded:
            return Inconclusive(DEPTH_EXHAUSTED, depth, levels)
        if ok:
            return InductivelyLocal(depth, levels)
        if depth == max_depth:
            break
        nxt = b_step(t, rules, cache)
        if len(nxt) == len(t):
            return Inconclusive(FIXPOINT, depth, levels)
        t = nxt
    return Inconclusive(DEPTH_EXHAUSTED, max_depth, levels)
