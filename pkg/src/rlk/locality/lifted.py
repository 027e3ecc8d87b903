"""Lifted template generation and backchaining.

During unification α is the variable ``$A``; binding it to an application
fixes α's shape.  Each top-level argument of a fresh antecedent is either
designated α (unified with ``$A``) or left in the bounding set, and a final
check rejects any bounding-set position that mentions α.
"""

from __future__ import annotations

from typing import Iterator, Optional, Sequence

from ..terms import App, Atom, RuleSet, Var, apply, occurs_in, rename_apart, resolve, unify_terms
from .schema import ALPHA, SchemaSet, TemplateSchema

A = Var("$A")


def _to_var(t):
    if t == ALPHA:
        return A
    return t


def _open(atom: Atom) -> Atom:
    """Replace α by the unification variable."""
    return Atom(atom.pred, [_to_var(t) for t in atom.args])


def _alpha_slots(atom: Atom) -> frozenset[int]:
    return frozenset(i for i, t in enumerate(atom.args) if t == ALPHA)


def _designations(atoms: Sequence[Atom], s: dict, slots=None) -> Iterator[tuple[dict, list[frozenset]]]:
    """Every way of marking each top-level argument as α or bounding-set."""
    flat = [(i, j) for i, a in enumerate(atoms) for j in range(len(a.args))]
    chosen: list[set] = [set() for _ in atoms]

    def go(k, s):
        if k == len(flat):
            yield s, [frozenset(c) for c in chosen]
            return
        i, j = flat[k]
        arg = atoms[i].args[j]
        yield from go(k + 1, s)
        u = unify_terms([(arg, A)], s)
        if u is not None:
            chosen[i].add(j)
            yield from go(k + 1, u)
            chosen[i].discard(j)

    yield from go(0, s)


def _close(s: dict, parts) -> Optional[tuple[list, Optional[App]]]:
    """Apply ``s`` and enforce the α discipline.

    ``parts`` holds (atom, α-slots) pairs; returns the closed atoms with α
    written as :data:`ALPHA`, plus the shape, or ``None`` if the branch is
    not a template.
    """
    full = resolve(s)
    alpha = apply(full, A)
    out = []
    for atom, slots in parts:
        args = []
        for j, t in enumerate(atom.args):
            t = apply(full, t)
            if j in slots:
                if t != alpha:
                    return None
                args.append(ALPHA)
            else:
                if occurs_in(alpha, t):
                    return None
                args.append(t)
        out.append(Atom(atom.pred, args))
    shape = alpha if type(alpha) is App else None
    return out, shape


def generate_initial(rules: RuleSet) -> SchemaSet:
    """Lifted template generation: one schema per clause and choice of α."""
    out = SchemaSet()
    for clause in rules.clauses:
        c = rename_apart(clause, "_g")
        for s, slots in _designations(c.antecedents, {}):
            if not any(slots):
                continue
            parts = list(zip(c.antecedents, slots)) + [(c.conclusion, frozenset())]
            closed = _close(s, parts)
            if closed is None:
                continue
            atoms, shape = closed
            ants, phi = atoms[:-1], atoms[-1]
            out.add(TemplateSchema.make(
                [a for a, sl in zip(ants, slots) if not sl],
                [a for a, sl in zip(ants, slots) if sl], phi, shape))
    return out


def _fresh_suffix(s: TemplateSchema) -> str:
    names = {v.name for v in s.variables()}
    k = 0
    while any(n.endswith(f"_b{k}") for n in names):
        k += 1
    return f"_b{k}"


def backchain_raw(s: TemplateSchema, target: int, rules: RuleSet) -> list[TemplateSchema]:
    """Backchaining results with Γ kept in order: the untouched Γ atoms first,
    then the new α-carrying antecedents."""
    theta = _open(s.gamma[target])
    start: dict = {} if s.alpha is None else {A: s.alpha}
    kept = [(a, _alpha_slots(a)) for k, a in enumerate(s.gamma) if k != target]
    fixed = [(a, frozenset()) for a in s.sigma] + [(s.phi, frozenset())]
    # α positions of kept atoms must be reopened before unification
    kept = [(_open(a), sl) for a, sl in kept]
    # the consumed atom and earlier support keep their terms inside Y
    consumed = [(theta, _alpha_slots(s.gamma[target])), (Atom("$y", s.support), frozenset())]
    suffix = _fresh_suffix(s)
    results = []
    for clause in rules.clauses:
        if clause.conclusion.pred != theta.pred:
            continue
        c = rename_apart(clause, suffix)
        u = unify_terms(zip(c.conclusion.args, theta.args), start)
        if u is None:
            continue
        for s2, slots in _designations(c.antecedents, u):
            parts = fixed + kept + consumed + list(zip(c.antecedents, slots))
            closed = _close(s2, parts)
            if closed is None:
                continue
            atoms, shape = closed
            gone, old_support = atoms[len(fixed) + len(kept): len(fixed) + len(kept) + 2]
            del atoms[len(fixed) + len(kept): len(fixed) + len(kept) + 2]
            nf = len(fixed)
            sigma, phi = atoms[: nf - 1], atoms[nf - 1]
            old_gamma = atoms[nf: nf + len(kept)]
            new = atoms[nf + len(kept):]
            sigma = sigma + [a for a, sl in zip(new, slots) if not sl]
            gamma = old_gamma + [a for a, sl in zip(new, slots) if sl]
            support = _support(sigma, gamma, phi, shape,
                               [t for t in gone.args if t != ALPHA] + list(old_support.args))
            results.append(TemplateSchema(tuple(dict.fromkeys(sigma)), tuple(gamma), phi, shape, support))
    return results


def _support(sigma, gamma, phi, shape, candidates) -> tuple:
    """The candidate terms not already forced into Y by a visible term."""
    visible = [t for a in [phi, *sigma, *gamma] for t in a.args if t != ALPHA]
    if shape is not None:
        visible += list(shape.args)
    out: list = []
    for t in dict.fromkeys(candidates):
        if not any(occurs_in(t, v) for v in visible):
            out.append(t)
    return tuple(sorted(t for t in out if not any(u != t and occurs_in(t, u) for u in out)))


def backchain(s: TemplateSchema, target: int, rules: RuleSet) -> SchemaSet:
    return SchemaSet(backchain_raw(s, target, rules))


def gamma_positions(s: TemplateSchema) -> list[int]:
    """One position per distinct Γ atom."""
    seen = {}
    for i, a in enumerate(s.gamma):
        seen.setdefault(a, i)
    return list(seen.values())


def b_step(t: SchemaSet, rules: RuleSet, cache: Optional[dict] = None) -> SchemaSet:
    """``t`` plus every one-step backchaining result from its members."""
    out = t.copy() if isinstance(t, SchemaSet) else SchemaSet(t)
    for s in list(t):
        for i in gamma_positions(s):
            for r in cached_backchain(s, i, rules, cache):
                out.add(r)
    return out


def cached_backchain(s: TemplateSchema, i: int, rules: RuleSet, cache: Optional[dict]) -> list[TemplateSchema]:
    if cache is None:
        return list(backchain(s, i, rules))
    key = (s, s.gamma[i])
    hit = cache.get(key)
    if hit is None:
        hit = cache[key] = list(backchain(s, i, rules))
    return hit
