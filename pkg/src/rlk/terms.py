"""First-order terms, atoms, Horn clauses and the substitution machinery.

Terms are immutable and carry a cached hash, so sets of terms and atoms are
cheap to build even when the same subterm is shared by many parents.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional, Union


class Var:
    __slots__ = ("name", "_hash")

    def __init__(self, name: str):
        self.name = name
        self._hash = hash(("var", name))

    def __eq__(self, other):
        return self is other or (type(other) is Var and other.name == self.name)

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return term_key(self) < term_key(other)

    def __repr__(self):
        return f"Var({self.name!r})"

    def __str__(self):
        return self.name

    @property
    def is_ground(self) -> bool:
        return False


class App:
    """Application of a function symbol; constants have no arguments."""

    __slots__ = ("fn", "args", "_hash", "_ground", "_key")

    def __init__(self, fn: str, args: Iterable["Term"] = ()):
        self.fn = fn
        self.args = tuple(args)
        self._hash = hash((fn, self.args))
        self._ground = all(a.is_ground for a in self.args)
        self._key = None

    def __eq__(self, other):
        if self is other:
            return True
        if type(other) is not App or other._hash != self._hash:
            return False
        return other.fn == self.fn and other.args == self.args

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return term_key(self) < term_key(other)

    def __repr__(self):
        return f"App({self.fn!r}, {self.args!r})"

    def __str__(self):
        if not self.args:
            return self.fn
        return f"{self.fn}({','.join(str(a) for a in self.args)})"

    @property
    def arity(self) -> int:
        return len(self.args)

    @property
    def is_ground(self) -> bool:
        return self._ground


Term = Union[Var, App]


def const(name: str) -> App:
    return App(name, ())


def term_key(t: Term) -> tuple:
    """Total order key: variables first, then name, arity, arguments."""
    if type(t) is Var:
        return (0, t.name)
    if t._key is None:
        t._key = (1, t.fn, len(t.args), tuple(term_key(a) for a in t.args))
    return t._key


class Atom:
    __slots__ = ("pred", "args", "_hash", "_ground")

    def __init__(self, pred: str, args: Iterable[Term] = ()):
        self.pred = pred
        self.args = tuple(args)
        self._hash = hash(("atom", pred, self.args))
        self._ground = all(a.is_ground for a in self.args)

    def __eq__(self, other):
        if self is other:
            return True
        if type(other) is not Atom or other._hash != self._hash:
            return False
        return other.pred == self.pred and other.args == self.args

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return atom_key(self) < atom_key(other)

    def __repr__(self):
        return f"Atom({self.pred!r}, {self.args!r})"

    def __str__(self):
        if not self.args:
            return self.pred
        return f"{self.pred}({','.join(str(a) for a in self.args)})"

    @property
    def arity(self) -> int:
        return len(self.args)

    @property
    def is_ground(self) -> bool:
        return self._ground


def atom_key(a: Atom) -> tuple:
    return (a.pred, len(a.args), tuple(term_key(t) for t in a.args))


@dataclass(frozen=True)
class Clause:
    antecedents: tuple[Atom, ...]
    conclusion: Atom

    def __post_init__(self):
        object.__setattr__(self, "antecedents", tuple(self.antecedents))

    def __str__(self):
        if not self.antecedents:
            return f"{self.conclusion}."
        return f"{', '.join(str(a) for a in self.antecedents)} -> {self.conclusion}."

    @property
    def atoms(self) -> tuple[Atom, ...]:
        return self.antecedents + (self.conclusion,)

    def variables(self) -> list[Var]:
        return ordered_vars(self.atoms)


class SignatureError(ValueError):
    pass


@dataclass(frozen=True)
class RuleSet:
    """A named, finite collection of Horn clauses over a frozen signature.

    ``functions`` and ``predicates`` are sorted ``(name, arity)`` tuples.
    Use :meth:`build` to infer them from the clauses.
    """

    name: str
    functions: tuple[tuple[str, int], ...]
    predicates: tuple[tuple[str, int], ...]
    clauses: tuple[Clause, ...]

    @classmethod
    def build(cls, name: str, clauses: Iterable[Clause],
              functions: Optional[Mapping[str, int]] = None,
              predicates: Optional[Mapping[str, int]] = None) -> "RuleSet":
        clauses = tuple(clauses)
        fns = dict(functions or {})
        preds = dict(predicates or {})
        for clause in clauses:
            for atom in clause.atoms:
                _declare(preds, atom.pred, atom.arity, "predicate")
                for t in atom.args:
                    for s in iter_subterms(t):
                        if type(s) is App:
                            _declare(fns, s.fn, s.arity, "function")
        return cls(name, tuple(sorted(fns.items())), tuple(sorted(preds.items())), clauses)

    @property
    def function_arity(self) -> dict[str, int]:
        return dict(self.functions)

    @property
    def predicate_arity(self) -> dict[str, int]:
        return dict(self.predicates)

    def __len__(self):
        return len(self.clauses)

    def __iter__(self):
        return iter(self.clauses)


def _declare(table: dict, name: str, arity: int, kind: str) -> None:
    known = table.setdefault(name, arity)
    if known != arity:
        raise SignatureError(f"{kind} {name} used with arities {known} and {arity}")


# -- traversal -------------------------------------------------------------

def iter_subterms(t: Term) -> Iterator[Term]:
    """Preorder walk over every subterm occurrence, ``t`` included."""
    stack = [t]
    while stack:
        s = stack.pop()
        yield s
        if type(s) is App:
            stack.extend(reversed(s.args))


def term_vars(t: Term) -> Iterator[Var]:
    for s in iter_subterms(t):
        if type(s) is Var:
            yield s


def ordered_vars(atoms: Iterable[Atom]) -> list[Var]:
    seen: dict[Var, None] = {}
    for atom in atoms:
        for arg in atom.args:
            for v in term_vars(arg):
                seen.setdefault(v, None)
    return list(seen)


def occurs_in(sub: Term, t: Term) -> bool:
    return any(s == sub for s in iter_subterms(t))


def is_proper_subterm(sub: Term, t: Term) -> bool:
    return type(t) is App and any(occurs_in(sub, a) for a in t.args)


def textual_size(t: Term) -> int:
    return sum(1 for _ in iter_subterms(t))


# -- bounding sets ---------------------------------------------------------

def subterm_closure(terms: Iterable[Term]) -> frozenset:
    """Least subterm-closed superset of ``terms``.

    Shared subterms are visited once, so the cost is linear in DAG size.
    """
    closed: set = set()
    stack = []
    for t in terms:
        if not t.is_ground:
            raise ValueError(f"non-ground term: {t}")
        stack.append(t)
    while stack:
        t = stack.pop()
        if t in closed:
            continue
        closed.add(t)
        stack.extend(t.args)
    return frozenset(closed)


def dag_size(t: Term) -> int:
    return len(subterm_closure([t]))


def atom_terms(atoms: Iterable[Atom]) -> Iterator[Term]:
    for atom in atoms:
        yield from atom.args


def is_label_formula(atom: Atom, universe) -> bool:
    """True iff every argument of the ground ``atom`` lies in ``universe``.

    The universe is subterm-closed, so checking the top-level arguments
    is enough.
    """
    if not atom.is_ground:
        raise ValueError(f"non-ground atom: {atom}")
    return all(a in universe for a in atom.args)


# -- substitutions ---------------------------------------------------------

Substitution = Mapping[Var, Term]


def apply(s: Substitution, x):
    """Apply ``s`` homomorphically to a term, atom or clause."""
    if not s:
        return x
    if type(x) is Var:
        return s.get(x, x)
    if type(x) is App:
        if x.is_ground:
            return x
        return App(x.fn, [apply(s, a) for a in x.args])
    if type(x) is Atom:
        if x.is_ground:
            return x
        return Atom(x.pred, [apply(s, a) for a in x.args])
    if isinstance(x, Clause):
        return Clause(tuple(apply(s, a) for a in x.antecedents), apply(s, x.conclusion))
    raise TypeError(f"cannot apply a substitution to {type(x).__name__}")


def compose(first: Substitution, second: Substitution) -> dict[Var, Term]:
    """Substitution equivalent to applying ``first`` and then ``second``."""
    out = {v: apply(second, t) for v, t in first.items()}
    for v, t in second.items():
        out.setdefault(v, t)
    return {v: t for v, t in out.items() if t != v}


def _walk(t: Term, s: dict) -> Term:
    while type(t) is Var and t in s:
        t = s[t]
    return t


def _occurs(v: Var, t: Term, s: dict) -> bool:
    stack = [t]
    while stack:
        u = _walk(stack.pop(), s)
        if u == v:
            return True
        if type(u) is App:
            stack.extend(u.args)
    return False


def unify_terms(pairs: Iterable[tuple[Term, Term]], s: Optional[dict] = None) -> Optional[dict]:
    """Most general unifier of the term pairs, with occurs check.

    Returns a triangular binding dict (resolve with :func:`resolve`) or
    ``None`` when the pairs do not unify.
    """
    s = dict(s or {})
    stack = list(pairs)
    while stack:
        a, b = stack.pop()
        a, b = _walk(a, s), _walk(b, s)
        if a == b:
            continue
        if type(a) is Var:
            if _occurs(a, b, s):
                return None
            s[a] = b
        elif type(b) is Var:
            if _occurs(b, a, s):
                return None
            s[b] = a
        elif a.fn != b.fn or len(a.args) != len(b.args):
            return None
        else:
            stack.extend(zip(a.args, b.args))
    return s


def resolve(s: dict) -> dict[Var, Term]:
    """Turn a triangular binding dict into an idempotent substitution."""
    def full(t):
        t = _walk(t, s)
        if type(t) is App and not t.is_ground:
            return App(t.fn, [full(a) for a in t.args])
        return t
    return {v: full(v) for v in s}


def unify(a: Atom, b: Atom) -> Optional[dict[Var, Term]]:
    """Most general unifier of two atoms, or ``None`` on clash/occurs failure."""
    if a.pred != b.pred or len(a.args) != len(b.args):
        return None
    s = unify_terms(zip(a.args, b.args))
    return None if s is None else resolve(s)


def match_term(pattern: Term, t: Term, s: dict) -> bool:
    """One-way matching of ``pattern`` onto ``t``, extending ``s`` in place.

    On failure ``s`` may hold partial bindings; callers pass a copy.
    """
    stack = [(pattern, t)]
    while stack:
        p, u = stack.pop()
        if type(p) is Var:
            bound = s.get(p)
            if bound is None:
                s[p] = u
            elif bound != u:
                return False
        elif type(u) is not App or p.fn != u.fn or len(p.args) != len(u.args):
            return False
        elif p.is_ground:
            if p != u:
                return False
        else:
            stack.extend(zip(p.args, u.args))
    return True


def match_atom(pattern: Atom, atom: Atom, s: Optional[dict] = None) -> Optional[dict]:
    if pattern.pred != atom.pred or len(pattern.args) != len(atom.args):
        return None
    out = dict(s or {})
    for p, u in zip(pattern.args, atom.args):
        if not match_term(p, u, out):
            return None
    return out


# -- renaming --------------------------------------------------------------

def rename_apart(clause: Clause, suffix: str) -> Clause:
    return apply({v: Var(f"{v.name}{suffix}") for v in clause.variables()}, clause)


def canonical_rename(clause: Clause) -> Clause:
    """Rename variables to ``V0, V1, ...`` in left-to-right first-occurrence order."""
    mapping = {v: Var(f"V{i}") for i, v in enumerate(clause.variables())}
    return apply(mapping, clause)


def clause_key(clause: Clause) -> tuple:
    c = canonical_rename(clause)
    return (tuple(atom_key(a) for a in c.antecedents), atom_key(c.conclusion))
