"""The ``rlk`` command line.

Exit codes: 0 success / derivable / local / accepted, 1 the negative
answer, 2 inconclusive, 64 usage error, 65 malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import corpus as corpus_mod
from .engine import FreeModeError, extract_derivation, proves_local, saturate_bounded, saturate_free
from .grammar import parse_grammar, recognize
from .locality import check_locality
from .scaffold import relation
from .syntax import ParseError, format_facts, format_rules, parse_atom, parse_facts, parse_rules, parse_signature, parse_term
from .terms import atom_terms, subterm_closure
from .transform import TransformError, mentionize, prime_transform

EX_OK, EX_NO, EX_UNKNOWN, EX_USAGE, EX_DATAERR = 0, 1, 2, 64, 65


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def load_rules(ref: str):
    if ref.startswith("corpus:"):
        key = ref[len("corpus:"):]
        try:
            return corpus_mod.corpus(key).rules
        except KeyError as exc:
            raise UsageError(exc.args[0]) from None
    return parse_rules(_read(ref), name=Path(ref).stem, source=ref)


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _json(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True))


def _stats(st) -> dict:
    return {"rounds": st.rounds, "firings": st.firings, "facts": st.facts}


# -- subcommands -------------------------------------------------------------

def cmd_derive(a) -> int:
    rules = load_rules(a.rules)
    sigma = parse_facts(_read(a.facts), source=a.facts)
    query = parse_atom(a.query, source="--query") if a.query else None
    if query is not None and not query.is_ground:
        raise UsageError("--query must be a ground atom")
    exhausted = True
    derivation = None
    if a.mode == "bounded":
        if query is not None:
            derivation, st = proves_local(rules, sigma, query, with_stats=True)
            facts = None
        else:
            fb, st = saturate_bounded(rules, sigma, subterm_closure(atom_terms(sigma)))
            facts = fb.sorted()
    else:
        try:
            fb, st, exhausted = saturate_free(rules, sigma, max_rounds=a.max_rounds)
        except FreeModeError as exc:
            raise UsageError(str(exc)) from None
        facts = fb.sorted()
    if query is None:
        code = EX_OK if exhausted else EX_UNKNOWN
        found = None
    else:
        found = derivation is not None if a.mode == "bounded" else query in facts
        if found and derivation is None:
            derivation = extract_derivation(fb, query)
        code = EX_OK if found else (EX_NO if exhausted else EX_UNKNOWN)
    if a.json:
        out = {"mode": a.mode, "stats": _stats(st), "exhausted": exhausted}
        if query is not None:
            out.update(query=str(query), derivable=found)
        if facts is not None and query is None:
            out["facts"] = [str(x) for x in facts]
        if derivation is not None:
            out["derivation"] = [str(step.atom) for step in derivation.steps]
        _json(out)
        return code
    if query is None:
        sys.stdout.write(format_facts(facts))
    elif found:
        print("derivable")
        for i, step in enumerate(derivation.steps if derivation else ()):
            print(f"  {i}: {step.atom}.")
    else:
        print("not derivable" if exhausted else "unknown (round limit reached)")
    if a.stats:
        print(f"rounds={st.rounds} firings={st.firings} facts={st.facts}", file=sys.stderr)
    return code


def cmd_check(a) -> int:
    rules = load_rules(a.rules)
    if a.max_depth < 0:
        raise UsageError("--max-depth must be non-negative")
    v = check_locality(rules, max_depth=a.max_depth, budget=a.budget)
    code = {"inductively-local": EX_OK, "not-local": EX_NO}.get(v.kind, EX_UNKNOWN)
    if a.json:
        ev = None
        if v.event is not None:
            e = v.event
            ev = {"sigma": [str(x) for x in sorted(e.sigma)], "phi": str(e.phi),
                  "y": [str(t) for t in sorted(e.y)], "alpha": str(e.alpha)}
        _json({"verdict": v.kind, "depth": v.depth, "reason": v.reason, "event": ev,
               "stats": {"schemas_per_level": list(v.schemas_per_level)}})
        return code
    print(v)
    if v.event is not None:
        e = v.event
        print("sigma:")
        for x in sorted(e.sigma):
            print(f"  {x}.")
        print(f"phi:\n  {e.phi}.")
        print("y:")
        for t in sorted(e.y):
            print(f"  {t}")
        print(f"alpha:\n  {e.alpha}")
    return code


def cmd_transform(a) -> int:
    rules = load_rules(a.rules)
    try:
        if a.kind == "mention":
            out = mentionize(rules, a.mention)
        else:
            out = prime_transform(rules, a.arity, a.input, a.accept, a.goal)
    except TransformError as exc:
        raise UsageError(str(exc)) from None
    _emit(format_rules(out), a.output)
    return EX_OK


def cmd_scaffold(a) -> int:
    sig = parse_signature(_read(a.signature), source=a.signature)
    term = parse_term(a.term, source="--term")
    if not term.is_ground:
        raise UsageError("--term must be ground")
    for t in subterm_closure([term]):
        if sig.get(t.fn) != len(t.args):
            raise UsageError(f"symbol {t.fn}/{len(t.args)} is not in the signature")
    try:
        facts = relation(sig, term, a.relation)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if a.json:
        _json({"relation": a.relation, "facts": [str(x) for x in sorted(facts)]})
    else:
        sys.stdout.write(format_facts(facts))
    return EX_OK


def cmd_grammar(a) -> int:
    g = parse_grammar(_read(a.grammar), source=a.grammar)
    words = a.sentence.split()
    ok, st = recognize(g, words)
    if a.json:
        _json({"accepted": ok, "words": words, "stats": _stats(st)})
    else:
        print("accept" if ok else "reject")
        if a.stats:
            print(f"rounds={st.rounds} firings={st.firings} facts={st.facts}")
    return EX_OK if ok else EX_NO


def cmd_corpus(a) -> int:
    if a.action == "list":
        for key in corpus_mod.KEYS:
            print(f"{key}\t{corpus_mod.corpus(key).notes}")
        return EX_OK
    if not a.key:
        raise UsageError("corpus show needs a KEY")
    if a.key not in corpus_mod.KEYS:
        raise UsageError(f"unknown corpus key {a.key!r}")
    sys.stdout.write(corpus_mod.corpus_text(a.key))
    return EX_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="rlk", description="Local inference relations for Horn-clause rule sets.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    d = sub.add_parser("derive", help="bottom-up evaluation")
    d.add_argument("--rules", required=True)
    d.add_argument("--facts", required=True)
    d.add_argument("--query")
    d.add_argument("--mode", choices=("bounded", "free"), default="bounded")
    d.add_argument("--max-rounds", type=int, default=1000)
    d.add_argument("--stats", action="store_true")
    d.add_argument("--json", action="store_true")
    d.set_defaults(run=cmd_derive)

    c = sub.add_parser("check", help="inductive-locality check")
    c.add_argument("--rules", required=True)
    c.add_argument("--max-depth", type=int, default=10)
    c.add_argument("--budget", type=int, default=10 ** 6)
    c.add_argument("--json", action="store_true")
    c.set_defaults(run=cmd_check)

    t = sub.add_parser("transform", help="rule set transformations")
    tsub = t.add_subparsers(dest="kind", parser_class=_Parser)
    tsub.required = True
    m = tsub.add_parser("mention")
    m.add_argument("--rules", required=True)
    m.add_argument("--mention", default="m__")
    m.add_argument("-o", "--output")
    pr = tsub.add_parser("prime")
    pr.add_argument("--rules", required=True)
    pr.add_argument("--arity", type=int, required=True)
    pr.add_argument("--input", required=True)
    pr.add_argument("--accept", required=True)
    pr.add_argument("--goal", required=True)
    pr.add_argument("-o", "--output")
    t.set_defaults(run=cmd_transform)

    s = sub.add_parser("scaffold", help="term-structure support relations")
    s.add_argument("--signature", required=True)
    s.add_argument("--term", required=True)
    s.add_argument("--relation", choices=("s", "su", "ne", "ni"), default="s")
    s.add_argument("--json", action="store_true")
    s.set_defaults(run=cmd_scaffold)

    g = sub.add_parser("grammar", help="recognize a sentence")
    g.add_argument("--grammar", required=True)
    g.add_argument("--sentence", required=True)
    g.add_argument("--stats", action="store_true")
    g.add_argument("--json", action="store_true")
    g.set_defaults(run=cmd_grammar)

    k = sub.add_parser("corpus", help="built-in rule sets")
    k.add_argument("action", choices=("list", "show"))
    k.add_argument("key", nargs="?")
    k.set_defaults(run=cmd_corpus)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.run(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EX_USAGE
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EX_DATAERR


def entry() -> None:
    sys.exit(main())
