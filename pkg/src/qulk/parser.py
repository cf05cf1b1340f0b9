"""Parsing by bounded exhaustive search over engine operations.

Two independent searches share the engine's operations:

* ``chart_search`` builds a memoized chart of subtrees, combining any two
  whose item counts fit inside the numeration.  ``parse`` uses it.
* ``enumerate_all`` walks whole workspaces state by state, trying every
  operation on every root (and every ordered pair of roots).  It is slower
  and serves as the oracle the chart is checked against.

Both record, for each tree, one operation that produced it, so any result
can be replayed into a ``DerivationTrace`` with fresh occurrence indices.
"""
from __future__ import annotations

import itertools
from collections import Counter, deque
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

from .engine import (
    DerivationError,
    DerivationTrace,
    Leaf,
    Recorder,
    SyntacticObject,
    agree,
    check_convergence,
    head_move,
    internal_merge,
    is_dead,
    label,
    merge_directed,
)
from .features import SELECTOR, Lexicon
from .grammar import GrammarFragment
from .pf import PFError, SurfaceForm, spell_out


class ParseError(Exception):
    pass


class SegmentationError(ParseError):
    """Some token has no analysis in the lexicon."""


class NoParseError(ParseError):
    """Segmentation succeeded but no convergent derivation spells out the input."""


class BoundsExceeded(ParseError):
    pass


@dataclass(frozen=True)
class SearchBounds:
    max_steps: int = 40
    max_null_items: int = 10
    max_numerations: int = 10000

    def __post_init__(self):
        for name in ("max_steps", "max_null_items", "max_numerations"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")


@dataclass
class EnumerationResult:
    traces: dict[SyntacticObject, DerivationTrace]
    complete: bool = True
    explored: int = 0

    def trees(self) -> set[SyntacticObject]:
        return set(self.traces)


# how each tree was first built: (op, children)
Made = dict


def _unary(so: SyntacticObject) -> Iterable[tuple[str, SyntacticObject]]:
    for op, fn in (("headmove", head_move), ("agree", lambda t: agree(t)[0]), ("move", internal_merge)):
        try:
            yield op, fn(so)
        except DerivationError:
            pass


def _merge(a: SyntacticObject, b: SyntacticObject) -> SyntacticObject | None:
    try:
        return merge_directed(a, b)
    except DerivationError:
        return None


def realize(tree: SyntacticObject, made: Made, numeration: Mapping[str, int], lexicon: Lexicon,
            start: str | None = None) -> DerivationTrace:
    """Replay the recorded construction of ``tree`` as a derivation."""
    rec = Recorder(numeration, lexicon, start)

    def build(t) -> int:
        op, kids = made[t]
        if op == "select":
            return rec.select(t.item.id)
        if op == "merge":
            h = build(kids[0])
            a = build(kids[1])
            rec.merge(h, a)
            return h
        h = build(kids[0])
        {"move": rec.move, "agree": rec.agree, "headmove": rec.head_move}[op](h)
        return h

    build(tree)
    trace = rec.trace()
    assert trace.result == tree, "replay diverged from the searched tree"
    return trace


def _wants(so: SyntacticObject) -> set[str]:
    """Categories the head of ``so`` can select next."""
    h = label(so)
    if h.hm_pending:
        return set()
    return {lab for _, f in h.options() if f.kind == SELECTOR for lab in f.labels}


def _offers(so: SyntacticObject) -> str | None:
    """Category ``so`` can be selected as, if it is ready for selection."""
    h = label(so)
    if h.hm_pending or h.unvalued or not h.is_exposed:
        return None
    return h.category


def _vector(counts: Mapping[str, int], ids: list[str]) -> tuple[int, ...]:
    return tuple(counts.get(i, 0) for i in ids)


def chart_search(numeration: Mapping[str, int], lexicon: Lexicon,
                 bounds: SearchBounds = SearchBounds(), start: str | None = None) -> EnumerationResult:
    """All convergent derivations over exactly ``numeration`` (chart closure).

    ``start`` restricts results to roots of that category.
    """
    ids = sorted(numeration)
    cap = _vector(numeration, ids)
    made: Made = {}
    info: dict[SyntacticObject, tuple[tuple[int, ...], int]] = {}
    agenda: deque = deque()
    complete = True

    def add(tree, op, kids, vec, steps):
        nonlocal complete
        if tree in made:
            return
        if steps > bounds.max_steps:
            complete = False
            return
        if is_dead(tree):
            return
        made[tree] = (op, kids)
        info[tree] = (vec, steps)
        agenda.append(tree)

    for k, item_id in enumerate(ids):
        vec = tuple(1 if j == k else 0 for j in range(len(ids)))
        add(Leaf(lexicon[item_id]), "select", (), vec, 1)

    # items indexed by the category they can select and the one they offer
    heads: dict[str, list[SyntacticObject]] = {}
    args: dict[str, list[SyntacticObject]] = {}

    def combine(h, a):
        (vh, sh), (va, sa) = info[h], info[a]
        vec = tuple(p + q for p, q in zip(vh, va))
        if any(v > c for v, c in zip(vec, cap)):
            return
        z = _merge(h, a)
        if z is not None:
            add(z, "merge", (h, a), vec, sh + sa + 1)

    while agenda:
        x = agenda.popleft()
        vx, sx = info[x]
        for op, y in _unary(x):
            add(y, op, (x,), vx, sx + 1)
        wanted, offered = _wants(x), _offers(x)
        for cat in wanted:
            heads.setdefault(cat, []).append(x)
        if offered is not None:
            args.setdefault(offered, []).append(x)
        for cat in wanted:
            for y in list(args.get(cat, ())):
                combine(x, y)
        if offered is not None:
            for h in list(heads.get(offered, ())):
                if h is not x:
                    combine(h, x)

    traces = {}
    for tree, (vec, _) in info.items():
        if vec == cap and check_convergence(tree, start).converged:
            traces[tree] = realize(tree, made, numeration, lexicon, start)
    return EnumerationResult(traces, complete, len(made))


def enumerate_all(numeration: Mapping[str, int], lexicon: Lexicon,
                  bounds: SearchBounds = SearchBounds(), start: str | None = None,
                  max_states: int = 2_000_000) -> EnumerationResult:
    """Brute-force oracle: explore every reachable workspace.

    The search starts after every item has been selected and tries each
    operation on each root and External Merge on each ordered pair of
    roots, deduplicating workspaces as multisets of trees.
    """
    leaves = []
    for item_id, n in sorted(numeration.items()):
        leaves += [Leaf(lexicon[item_id])] * n
    n_items = len(leaves)
    made: Made = {leaf: ("select", ()) for leaf in leaves}

    def key(roots):
        return frozenset(Counter(roots).items())

    initial = tuple(leaves)
    seen = {key(initial)}
    queue = deque([(initial, n_items)])
    finals: set[SyntacticObject] = set()
    complete = True
    while queue:
        roots, steps = queue.popleft()
        if len(roots) == 1:
            if check_convergence(roots[0], start).converged:
                finals.add(roots[0])
        succ = []
        for i, r in enumerate(roots):
            rest = roots[:i] + roots[i + 1:]
            for op, y in _unary(r):
                made.setdefault(y, (op, (r,)))
                succ.append(rest + (y,))
            for j, s in enumerate(roots):
                if i == j:
                    continue
                z = _merge(r, s)
                if z is not None:
                    made.setdefault(z, ("merge", (r, s)))
                    succ.append(tuple(t for k, t in enumerate(roots) if k not in (i, j)) + (z,))
        for nxt in succ:
            if steps + 1 > bounds.max_steps:
                complete = False
                continue
            if any(is_dead(t) for t in nxt):
                continue
            k = key(nxt)
            if k in seen:
                continue
            if len(seen) >= max_states:
                complete = False
                continue
            seen.add(k)
            queue.append((nxt, steps + 1))
    traces = {t: realize(t, made, numeration, lexicon, start) for t in finals}
    return EnumerationResult(traces, complete, len(seen))


# -- segmentation ---------------------------------------------------------------

def _token_analyses(token: str, lexicon: Lexicon) -> list[tuple[str, ...]]:
    free = [it for it in lexicon if it.morph_class == "free"]
    suffixes = [it for it in lexicon if it.morph_class == "suffix"]
    prefixes = [it for it in lexicon if it.morph_class == "prefix"]

    def forms(affix, strip):
        return {affix.phon, affix.phon.strip("-")} if strip else {affix.phon}

    def analyse(s: str) -> list[tuple[str, ...]]:
        out = [(it.id,) for it in free if it.phon == s]
        for suf in suffixes:
            for f in forms(suf, True):
                if s.endswith(f) and len(s) > len(f):
                    out += [a + (suf.id,) for a in analyse(s[:-len(f)])]
        for pre in prefixes:
            for f in forms(pre, True):
                if s.startswith(f) and len(s) > len(f):
                    out += [(pre.id,) + a for a in analyse(s[len(f):])]
        return out

    return sorted(set(analyse(token)))


def segment(surface: str, lexicon: Lexicon) -> list[tuple[tuple[str, ...], ...]]:
    """Every way of reading each token as lexicon morphemes."""
    tokens = surface.split()
    per_token = []
    for tok in tokens:
        analyses = _token_analyses(tok, lexicon)
        if not analyses:
            raise SegmentationError(f"no lexical analysis for {tok!r}")
        per_token.append(analyses)
    return list(itertools.product(*per_token))


# -- parsing --------------------------------------------------------------------

def null_hypotheses(fragment: GrammarFragment) -> list[Counter]:
    """Silent-item multisets demanded by some recipe's functional spine."""
    lex = fragment.lexicon
    out: list[Counter] = []
    for ct, recipe in fragment.recipes.items():
        fixed = Counter(t.args[1] for t in fragment.full_steps(ct)
                        if t.op == "select" and not t.args[1].startswith("$") and lex[t.args[1]].is_null)
        options = []
        for slot in recipe.slots:
            if slot.allow_null:
                options.append([None] + [it.id for it in lex if it.is_null and slot.accepts(it) is None])
        for combo in itertools.product(*options):
            c = fixed + Counter(x for x in combo if x is not None)
            if c not in out:
                out.append(c)
    return out


def _numerations(surface: str, fragment: GrammarFragment, bounds: SearchBounds):
    segs = segment(surface, fragment.lexicon)
    nulls = [n for n in null_hypotheses(fragment) if sum(n.values()) <= bounds.max_null_items]
    count = 0
    for seg in segs:
        overt = Counter(m for tok in seg for m in tok)
        for n in nulls:
            count += 1
            if count > bounds.max_numerations:
                raise BoundsExceeded(f"more than {bounds.max_numerations} numerations")
            yield overt + n


def _matches(form: SurfaceForm, surface: str) -> bool:
    """Word by word, each word either hyphenated or fused (qul-k or qulk)."""
    tokens = surface.split()
    return len(tokens) == len(form.tokens) and all(
        t in (w.surface, w.fused) for t, w in zip(tokens, form.tokens))


def _search_parse(surface: str, fragment: GrammarFragment, bounds: SearchBounds,
                  search: Callable) -> dict[SyntacticObject, DerivationTrace]:
    found: dict[SyntacticObject, DerivationTrace] = {}
    for numeration in _numerations(surface, fragment, bounds):
        result = search(numeration, fragment.lexicon, bounds, fragment.start)
        for tree, trace in result.traces.items():
            try:
                form = spell_out(trace)
            except PFError:
                continue
            if _matches(form, surface) and tree not in found:
                found[tree] = trace
    return found


def parse(surface: str, fragment: GrammarFragment, bounds: SearchBounds = SearchBounds()) -> list[DerivationTrace]:
    if not surface.strip():
        raise ParseError("empty input")
    found = _search_parse(surface, fragment, bounds, chart_search)
    if not found:
        raise NoParseError(f"no convergent derivation spells out {surface!r}")
    return list(found.values())


def oracle_parse(surface: str, fragment: GrammarFragment,
                 bounds: SearchBounds = SearchBounds()) -> dict[SyntacticObject, DerivationTrace]:
    """``parse`` recomputed with the workspace oracle in place of the chart."""
    return _search_parse(surface, fragment, bounds, enumerate_all)


__all__ = [
    "BoundsExceeded", "EnumerationResult", "NoParseError", "ParseError", "SearchBounds",
    "SegmentationError", "chart_search", "enumerate_all", "null_hypotheses", "oracle_parse",
    "parse", "realize", "segment",
]
