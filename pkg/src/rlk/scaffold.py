"""Support rules that let superficial rules see the structure of an input term.

Given ``input(t)`` the generated rules derive, over the subterms of ``t``:

=========  ================================================================
``m(s)``   s is a subterm of t
``pf_f``   one database fact per subterm f(s1..sn): ``pf_f(f(s1..sn), s1, .., sn)``
``su(u,v)``  u is a subterm of v
``ne(u,v)``  u and v are distinct
``ni(u,v)``  u is not a subterm of v
``w(u,v,z)`` v follows u in the duplicate-free preorder traversal of z
``l(u,z)``   u is the last term of that traversal
``s(u,v)``   successor relation of the traversal of t itself
=========  ================================================================

Binary symbols get the walk rules exactly as the classical construction
prints them; unary symbols and symbols of arity three or more use a
left-to-right generalisation that walks one argument at a time.
"""

from __future__ import annotations

from typing import Iterable, Mapping

from .engine import saturate_bounded
from .terms import App, Atom, Clause, RuleSet, Var, iter_subterms, subterm_closure


def _a(pred: str, *args) -> Atom:
    return Atom(pred, args)


def _rule(body: Iterable[Atom], head: Atom) -> Clause:
    return Clause(tuple(body), head)


def _check_signature(sig: Mapping[str, int]) -> None:
    if not sig:
        raise ValueError("empty signature")
    if not any(n == 0 for n in sig.values()):
        raise ValueError("signature has no constant, so there are no ground terms")


def _walk_binary(f: str) -> list[Clause]:
    X, Y, U, V, W, S = (Var(n) for n in ("X", "Y", "U", "V", "W", "S"))
    YL, XL, FL = Var("YLast"), Var("XLast"), Var("FLast")
    F = App(f, [X, Y])
    mf = _a("m", F)
    return [
        _rule([mf, _a("l", YL, Y), _a("ni", YL, X)], _a("l", YL, F)),
        _rule([mf, _a("su", Y, X), _a("l", XL, X)], _a("l", XL, F)),
        _rule([_a("l", YL, Y), _a("su", YL, X), _a("ni", Y, X),
               _a("wp", FL, YL, F), _a("ni", FL, X)], _a("l", FL, F)),
        _rule([mf], _a("w", F, X, F)),
        _rule([mf, _a("w", U, V, X)], _a("w", U, V, F)),
        _rule([mf, _a("ni", Y, X), _a("l", S, X)], _a("w", S, Y, F)),
        _rule([mf, _a("w", U, V, Y)], _a("wp", U, V, F)),
        _rule([_a("wp", U, V, F), _a("ni", U, X), _a("ni", V, X)], _a("w", U, V, F)),
        _rule([_a("wp", U, V, F), _a("wp", V, W, F), _a("su", V, X)], _a("wp", U, W, F)),
    ]


def _walk_unary(f: str) -> list[Clause]:
    X, U, V, S = (Var(n) for n in ("X", "U", "V", "S"))
    F = App(f, [X])
    mf = _a("m", F)
    return [
        _rule([mf], _a("w", F, X, F)),
        _rule([mf, _a("w", U, V, X)], _a("w", U, V, F)),
        _rule([mf, _a("l", S, X)], _a("l", S, F)),
    ]


def _walk_nary(f: str, n: int) -> list[Clause]:
    # w_f_i / l_f_i / wp_f_i describe the traversal of the first i arguments
    # taken together, with later duplicates removed.
    xs = [Var(f"X{i}") for i in range(1, n + 1)]
    U, V, W, S = (Var(n_) for n_ in ("U", "V", "W", "S"))
    YL, FL = Var("YLast"), Var("FLast")
    F = App(f, xs)
    mf = _a("m", F)
    wi = lambda i: f"w_{f}_{i}"
    li = lambda i: f"l_{f}_{i}"
    wpi = lambda i: f"wp_{f}_{i}"
    out = [
        _rule([mf], _a("w", F, xs[0], F)),
        _rule([mf, _a("w", U, V, xs[0])], _a(wi(1), U, V, F)),
        _rule([mf, _a("l", S, xs[0])], _a(li(1), S, F)),
    ]
    for i in range(2, n + 1):
        xi, prev = xs[i - 1], xs[: i - 1]
        fresh = lambda z: [_a("ni", z, x) for x in prev]
        out += [
            _rule([_a(wi(i - 1), U, V, F)], _a(wi(i), U, V, F)),
            _rule([_a(li(i - 1), S, F)] + fresh(xi), _a(wi(i), S, xi, F)),
            _rule([mf, _a("w", U, V, xi)], _a(wpi(i), U, V, F)),
            _rule([_a(wpi(i), U, V, F)] + fresh(U) + fresh(V), _a(wi(i), U, V, F)),
            _rule([mf, _a("l", YL, xi)] + fresh(YL), _a(li(i), YL, F)),
        ]
        for xj in prev:
            out += [
                _rule([_a(wpi(i), U, V, F), _a(wpi(i), V, W, F), _a("su", V, xj)],
                      _a(wpi(i), U, W, F)),
                _rule([_a(li(i - 1), S, F), _a("su", xi, xj)], _a(li(i), S, F)),
                _rule([_a("l", YL, xi), _a("su", YL, xj)] + fresh(xi)
                      + [_a(wpi(i), FL, YL, F)] + fresh(FL), _a(li(i), FL, F)),
            ]
    out += [
        _rule([_a(wi(n), U, V, F)], _a("w", U, V, F)),
        _rule([_a(li(n), S, F)], _a("l", S, F)),
    ]
    return out


def scaffold_rules(sig: Mapping[str, int], name: str = "scaffold") -> RuleSet:
    """Instantiate every support-rule schema for the function symbols of ``sig``."""
    _check_signature(sig)
    symbols = sorted(sig.items())
    X, Y, Z = Var("X"), Var("Y"), Var("Z")
    out = [
        _rule([_a("input", X)], _a("m", X)),
        _rule([_a("m", X)], _a("su", X, X)),
        _rule([_a("input", Z), _a("w", X, Y, Z)], _a("s", X, Y)),
    ]

    def pattern(f, n, prefix):
        return App(f, [Var(f"{prefix}{i}") for i in range(1, n + 1)])

    for f, n in symbols:
        F = pattern(f, n, "X")
        xs = F.args
        out.append(_rule([_a("m", F)], Atom(f"pf_{f}", (F,) + xs)))
        for x in xs:
            out.append(_rule([_a("m", F)], _a("m", x)))
            out.append(_rule([_a("m", F), _a("su", Y, x)], _a("su", Y, F)))
        # distinct symbols head distinct terms
        for g, k in symbols:
            if g != f:
                G = pattern(g, k, "Y")
                out.append(_rule([_a("m", F), _a("m", G)], _a("ne", F, G)))
        # same symbol: terms differ if some argument position differs
        G = pattern(f, n, "Y")
        for x, y in zip(F.args, G.args):
            out.append(_rule([_a("m", F), _a("m", G), _a("ne", x, y)], _a("ne", F, G)))
        if n == 0:
            out.append(_rule([_a("ne", Z, F)], _a("ni", Z, F)))
            out.append(_rule([], _a("l", F, F)))
        else:
            out.append(_rule([_a("ne", Z, F)] + [_a("ni", Z, x) for x in xs], _a("ni", Z, F)))
        if n == 1:
            out += _walk_unary(f)
        elif n == 2:
            out += _walk_binary(f)
        elif n > 2:
            out += _walk_nary(f, n)
    return RuleSet.build(name, out, functions=dict(sig))


def traversal_oracle(t) -> list:
    """Preorder list of the subterms of ``t``, keeping only first occurrences."""
    seen = set()
    out = []
    for s in iter_subterms(t):
        if s not in seen:
            seen.add(s)
            out.append(s)
    return out


def scaffold_facts(sig: Mapping[str, int], t):
    if not t.is_ground:
        raise ValueError(f"non-ground term: {t}")
    facts, _ = saturate_bounded(scaffold_rules(sig), [Atom("input", [t])], subterm_closure([t]))
    return facts


def relation(sig: Mapping[str, int], t, pred: str) -> set[Atom]:
    return set(scaffold_facts(sig, t).predicate(pred))


def successor_facts(sig: Mapping[str, int], t) -> set[Atom]:
    return relation(sig, t, "s")
