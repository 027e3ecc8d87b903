"""Template schemas: lifted feedback templates with an implicit bounding set.

Every variable of a schema stands for a member of the bounding set Y.  The
distinguished term α is written as the reserved constant :data:`ALPHA` and
only ever occurs as a whole argument; ``alpha`` records its shape when the
schema fixes one (``None`` leaves it opaque).  ``support`` lists α-free
terms that must also lie in Y although no remaining atom mentions them;
they come from Γ atoms consumed by antecedent-free clauses.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

from ..terms import App, Atom, Var, apply, atom_key, term_key

ALPHA = App("$alpha", ())


def _atom_str(a: Atom) -> str:
    return str(a).replace("$alpha", "α")


@dataclass(frozen=True)
class TemplateSchema:
    sigma: tuple[Atom, ...]
    gamma: tuple[Atom, ...]
    phi: Atom
    alpha: Optional[App] = None
    support: tuple = ()

    @classmethod
    def make(cls, sigma: Iterable[Atom], gamma: Iterable[Atom], phi: Atom,
             alpha: Optional[App] = None, support: Iterable = ()) -> "TemplateSchema":
        return cls(tuple(sorted(set(sigma))), tuple(sorted(gamma)), phi, alpha,
                   tuple(sorted(set(support))))

    @property
    def critical(self) -> bool:
        return not self.gamma

    @property
    def opaque(self) -> bool:
        return self.alpha is None

    def atoms(self) -> Iterator[Atom]:
        yield self.phi
        if self.alpha is not None:
            yield Atom("$shape", (self.alpha,))
        yield from self.sigma
        yield from self.gamma
        for t in self.support:
            yield Atom("$y", (t,))

    def variables(self) -> list[Var]:
        seen: dict[Var, None] = {}
        for a in self.atoms():
            for t in a.args:
                _collect(t, seen)
        return list(seen)

    def substitute(self, s: dict) -> "TemplateSchema":
        return TemplateSchema.make(
            (apply(s, a) for a in self.sigma), (apply(s, a) for a in self.gamma),
            apply(s, self.phi), None if self.alpha is None else apply(s, self.alpha),
            (apply(s, t) for t in self.support))

    def __str__(self) -> str:
        sig = ", ".join(map(_atom_str, self.sigma))
        gam = ", ".join(map(_atom_str, self.gamma))
        shape = "α opaque" if self.alpha is None else f"α = {self.alpha}"
        extra = "".join(f"; {t} in Y" for t in self.support)
        return f"{{{sig}}}, [{gam}] => {_atom_str(self.phi)}  ({shape}{extra})"


def _collect(t, seen: dict) -> None:
    if type(t) is Var:
        seen.setdefault(t, None)
    else:
        for a in t.args:
            _collect(a, seen)


# -- invariants used for bucketing ------------------------------------------

def _erased(a: Atom) -> tuple:
    local: dict[Var, Var] = {}
    for v in _ordered(a):
        local.setdefault(v, Var(f"_{len(local)}"))
    return atom_key(apply(local, a))


def _ordered(a: Atom) -> list[Var]:
    seen: dict[Var, None] = {}
    for t in a.args:
        _collect(t, seen)
    return list(seen)


def signature(s: TemplateSchema) -> tuple:
    """Key that is invariant under variable renaming and atom reordering."""
    shape = None if s.alpha is None else _erased(Atom("$shape", (s.alpha,)))
    return (_erased(s.phi), shape,
            tuple(sorted(Counter(map(_erased, s.sigma)).items())),
            tuple(sorted(Counter(map(_erased, s.gamma)).items())),
            tuple(sorted(Counter(_erased(a) for a in _support_atoms(s)).items())),
            len(s.variables()))


def _support_atoms(s: TemplateSchema) -> list[Atom]:
    return [Atom("$y", (t,)) for t in s.support]


# -- variant check -----------------------------------------------------------

def _match_bij(p, t, fwd: dict, bwd: dict) -> bool:
    stack = [(p, t)]
    while stack:
        x, y = stack.pop()
        if type(x) is Var:
            if type(y) is not Var:
                return False
            if fwd.get(x, y) != y or bwd.get(y, x) != x:
                return False
            fwd[x] = y
            bwd[y] = x
        elif type(y) is Var or x.fn != y.fn or len(x.args) != len(y.args):
            return False
        else:
            stack.extend(zip(x.args, y.args))
    return True


def _match_atom_bij(p: Atom, t: Atom, fwd: dict, bwd: dict):
    if p.pred != t.pred or len(p.args) != len(t.args):
        return None
    f, b = dict(fwd), dict(bwd)
    for x, y in zip(p.args, t.args):
        if not _match_bij(x, y, f, b):
            return None
    return f, b


def _bijections(ps, ts, fwd, bwd):
    if not ps:
        yield fwd, bwd
        return
    p, rest = ps[0], ps[1:]
    key = _erased(p)
    tried = set()
    for i, t in enumerate(ts):
        if t in tried or _erased(t) != key:
            continue
        tried.add(t)
        m = _match_atom_bij(p, t, fwd, bwd)
        if m is not None:
            yield from _bijections(rest, ts[:i] + ts[i + 1:], *m)


def is_variant(a: TemplateSchema, b: TemplateSchema) -> bool:
    """True when the schemas differ only by a renaming of variables."""
    if len(a.sigma) != len(b.sigma) or len(a.gamma) != len(b.gamma):
        return False
    if len(a.support) != len(b.support):
        return False
    if (a.alpha is None) != (b.alpha is None):
        return False
    m = _match_atom_bij(a.phi, b.phi, {}, {})
    if m is None:
        return False
    if a.alpha is not None:
        m = _match_atom_bij(Atom("$s", (a.alpha,)), Atom("$s", (b.alpha,)), *m)
        if m is None:
            return False
    for f, bw in _bijections(list(a.gamma), list(b.gamma), *m):
        for f2, bw2 in _bijections(list(a.sigma), list(b.sigma), f, bw):
            for _ in _bijections(_support_atoms(a), _support_atoms(b), f2, bw2):
                return True
    return False


def canonical_schema(s: TemplateSchema) -> TemplateSchema:
    """Rename variables to ``V0, V1, ...`` and sort; variants usually coincide."""
    cur = s
    for _ in range(4):
        order: dict[Var, None] = {}
        for a in [cur.phi] + ([Atom("$s", (cur.alpha,))] if cur.alpha is not None else []):
            for t in a.args:
                _collect(t, order)
        for group in (cur.sigma, cur.gamma, _support_atoms(cur)):
            for a in sorted(group, key=lambda a: (_erased(a), atom_key(a))):
                for t in a.args:
                    _collect(t, order)
        nxt = cur.substitute({v: Var(f"V{i}") for i, v in enumerate(order)})
        if nxt == cur:
            break
        cur = nxt
    return cur


class SchemaSet:
    """Insertion-ordered set of schemas, deduplicated up to variable renaming."""

    __slots__ = ("_buckets", "_items")

    def __init__(self, items: Iterable[TemplateSchema] = ()):
        self._buckets: dict[tuple, list[TemplateSchema]] = {}
        self._items: list[TemplateSchema] = []
        for s in items:
            self.add(s)

    def find(self, s: TemplateSchema) -> Optional[TemplateSchema]:
        for other in self._buckets.get(signature(s), ()):
            if is_variant(other, s):
                return other
        return None

    def add(self, s: TemplateSchema) -> bool:
        s = canonical_schema(s)
        bucket = self._buckets.setdefault(signature(s), [])
        for other in bucket:
            if other == s or is_variant(other, s):
                return False
        bucket.append(s)
        self._items.append(s)
        return True

    def __contains__(self, s) -> bool:
        return self.find(canonical_schema(s)) is not None

    def __iter__(self) -> Iterator[TemplateSchema]:
        return iter(list(self._items))

    def __len__(self) -> int:
        return len(self._items)

    def copy(self) -> "SchemaSet":
        out = SchemaSet()
        out._buckets = {k: list(v) for k, v in self._buckets.items()}
        out._items = list(self._items)
        return out

    def sorted(self) -> list[TemplateSchema]:
        return sorted(self._items, key=schema_key)


def schema_key(s: TemplateSchema) -> tuple:
    return (len(s.gamma), len(s.sigma), atom_key(s.phi),
            () if s.alpha is None else term_key(s.alpha),
            tuple(map(atom_key, s.sigma)), tuple(map(atom_key, s.gamma)),
            tuple(map(term_key, s.support)))
