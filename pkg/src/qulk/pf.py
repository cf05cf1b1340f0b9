"""Post-syntactic spell-out: linearization, M-Merger, clitic hosting, glosses."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Sequence, Union

from .engine import DerivationTrace, Leaf, Node, SyntacticObject
from .features import LexicalItem


class PFError(Exception):
    """Spell-out could not build well-formed phonological words."""


class AdjacencyError(PFError):
    pass


@dataclass(frozen=True)
class PFUnit:
    """One pronounced morpheme in linear order.

    ``position`` is the tree path of the head position where the morpheme
    is pronounced; morphemes of one head-movement amalgam share it.
    ``spec_of`` is the position of the head whose specifier this morpheme
    is, when it forms a bare specifier on its own.
    """

    item: LexicalItem
    position: tuple[int, ...] = ()
    spec_of: tuple[int, ...] | None = None

    @property
    def is_affix(self) -> bool:
        return self.item.is_affix


@dataclass(frozen=True)
class MorphWord:
    stem: LexicalItem
    suffixes: tuple[LexicalItem, ...] = ()
    prefixes: tuple[LexicalItem, ...] = ()
    position: tuple[int, ...] = field(default=(), compare=False)

    @property
    def morphemes(self) -> tuple[LexicalItem, ...]:
        return self.prefixes + (self.stem,) + self.suffixes

    @property
    def surface(self) -> str:
        return "".join(m.phon for m in self.morphemes)

    @property
    def fused(self) -> str:
        """Rendering without the affix boundary marks (qul-k -> qulk)."""
        return "".join(p.phon.rstrip("-") for p in self.prefixes) + self.stem.phon + \
            "".join(s.phon.lstrip("-") for s in self.suffixes)

    def render(self, fused: bool = False) -> str:
        return self.fused if fused else self.surface


@dataclass(frozen=True)
class SurfaceForm:
    tokens: tuple[MorphWord, ...]
    source: DerivationTrace | None = field(default=None, compare=False, repr=False)

    @property
    def segmentation(self) -> dict[int, list[str]]:
        return {i: [m.id for m in w.morphemes] for i, w in enumerate(self.tokens)}

    def render(self, fused: bool = False) -> str:
        return " ".join(w.render(fused) for w in self.tokens)

    def __str__(self):
        return self.render()

    def word_for(self, item_id: str) -> MorphWord:
        """The phonological word containing ``item_id``.  Fused words are
        atomic: there is no handle on their parts."""
        for w in self.tokens:
            if any(m.id == item_id for m in w.morphemes):
                return w
        raise KeyError(item_id)


# -- linearization ------------------------------------------------------------

def _label_path(so: SyntacticObject, path: tuple[int, ...]) -> tuple[tuple[int, ...], Leaf]:
    while isinstance(so, Node):
        step = 0 if so.head_left else 1
        so, path = so.head, path + (step,)
    return path, so


def linearize(so: SyntacticObject) -> list[PFUnit]:
    """Pronounced morphemes in specifier < head < complement order.

    Silent copies and null items are skipped; an amalgam is pronounced in
    full at its landing site, lowest head first.
    """
    out: list[PFUnit] = []

    def walk(node: SyntacticObject, path: tuple[int, ...], spec_of):
        if node.silent:
            return
        if isinstance(node, Leaf):
            for leaf in node.incorporated + (node,):
                if not leaf.item.is_null:
                    out.append(PFUnit(leaf.item, path, spec_of))
            return
        if node.head_left:
            walk(node.left, path + (0,), None)
            walk(node.right, path + (1,), None)
        else:
            lpath, lab = _label_path(node.right, path + (1,))
            host = None if lab.silent else lpath
            walk(node.left, path + (0,), host if isinstance(node.left, Leaf) else None)
            walk(node.right, path + (1,), None)

    walk(so, (), None)
    _check_single_copies(so)
    return out


def _check_single_copies(so: SyntacticObject) -> None:
    seen: dict[int, int] = {}

    def walk(node):
        if node.silent:
            return
        if isinstance(node, Leaf):
            for leaf in node.incorporated + (node,):
                if leaf.occ:
                    seen[leaf.occ] = seen.get(leaf.occ, 0) + 1
            return
        walk(node.left)
        walk(node.right)

    walk(so)
    dup = [o for o, n in seen.items() if n > 1]
    if dup:
        raise PFError(f"occurrence(s) {dup} pronounced more than once")


# -- word formation -----------------------------------------------------------

Piece = Union[PFUnit, MorphWord]


def _as_word(p: Piece) -> MorphWord:
    return p if isinstance(p, MorphWord) else MorphWord(p.item, position=p.position)


def _check_adjacent(first: Piece, second: Piece, sequence: Sequence[Piece] | None) -> None:
    if sequence is None:
        return
    idx = {id(p): i for i, p in enumerate(sequence)}
    if id(first) not in idx or id(second) not in idx:
        raise AdjacencyError("pieces are not in the sequence")
    if idx[id(second)] - idx[id(first)] != 1:
        raise AdjacencyError(f"{_name(first)} and {_name(second)} are not string-adjacent")


def _name(p: Piece) -> str:
    return p.surface if isinstance(p, MorphWord) else p.item.id


def _local(affix: PFUnit, host: Piece) -> bool:
    return affix.position == host.position or affix.spec_of == host.position


def m_merger(first: Piece, second: Piece, sequence: Sequence[Piece] | None = None) -> MorphWord:
    """Fuse two string-adjacent, local pieces into one phonological word.

    Affix order is fixed by the affix itself: a suffix ends up after the
    stem whichever side of it the suffix was linearized on.
    """
    _check_adjacent(first, second, sequence)
    kinds = [isinstance(p, PFUnit) and p.is_affix for p in (first, second)]
    if kinds.count(True) != 1:
        if not any(kinds):
            raise PFError(f"neither {_name(first)} nor {_name(second)} is an affix")
        raise PFError("two bare affixes cannot form a word")
    affix, host = (first, second) if kinds[0] else (second, first)
    if isinstance(host, PFUnit) and host.item.is_null:
        raise PFError("a silent head cannot host an affix")
    if not _local(affix, host):
        raise PFError(f"{affix.item.id} and {_name(host)} are neither a head amalgam "
                      f"nor in a specifier-head relation")
    word = _as_word(host)
    if affix.item.morph_class == "suffix":
        return MorphWord(word.stem, word.suffixes + (affix.item,), word.prefixes, word.position)
    return MorphWord(word.stem, word.suffixes, (affix.item,) + word.prefixes, word.position)


def cliticize(negcl: PFUnit, host: Piece, sequence: Sequence[Piece] | None = None) -> MorphWord:
    """Attach the postverbal negative clitic to the verb before it."""
    if negcl.item.category != "NegCl" or not negcl.is_affix:
        raise PFError(f"{negcl.item.id} is not a negative clitic")
    word = _as_word(host)
    if word.stem.category != "V":
        raise PFError(f"{word.stem.id} is not verbal and cannot host {negcl.item.id}")
    _check_adjacent(host, negcl, sequence)
    if negcl.position != word.position:
        raise AdjacencyError(f"{negcl.item.id} is not in the verb's head amalgam")
    return MorphWord(word.stem, word.suffixes + (negcl.item,), word.prefixes, word.position)


def form_words(units: Sequence[PFUnit]) -> list[MorphWord]:
    seq: list[Piece] = [u if u.is_affix else _as_word(u) for u in units]
    changed = True
    while changed:
        changed = False
        for i, p in enumerate(seq):
            if not (isinstance(p, PFUnit) and p.is_affix):
                continue
            prev = seq[i - 1] if i > 0 and isinstance(seq[i - 1], MorphWord) else None
            nxt = seq[i + 1] if i + 1 < len(seq) and isinstance(seq[i + 1], MorphWord) else None
            if prev is not None and prev.position == p.position:
                word = cliticize(p, prev, seq) if p.item.category == "NegCl" else m_merger(prev, p, seq)
                seq[i - 1:i + 1] = [word]
            elif nxt is not None and p.spec_of == nxt.position:
                seq[i:i + 2] = [m_merger(p, nxt, seq)]
            else:
                continue
            changed = True
            break
    stranded = [p.item.id for p in seq if isinstance(p, PFUnit)]
    if stranded:
        raise PFError(f"unhosted affix(es): {', '.join(stranded)}")
    return seq  # type: ignore[return-value]


def spell_out(trace: DerivationTrace | SyntacticObject) -> SurfaceForm:
    if isinstance(trace, DerivationTrace):
        if not trace.converged:
            raise PFError(f"cannot spell out a crashed derivation: {trace.verdict}")
        so, source = trace.result, trace
    else:
        so, source = trace, None
    return SurfaceForm(tuple(form_words(linearize(so))), source)


# -- glosses ----------------------------------------------------------------------

_LEIPZIG = re.compile(r"(\d)\.(SG|PL|DU|MS|FS|MP|FP|M|F)\b")


def leipzig(gloss: str) -> str:
    """1.SG -> 1SG, 3.MS -> 3MS."""
    return _LEIPZIG.sub(r"\1\2", gloss)


@dataclass(frozen=True)
class GlossRecord:
    morphemes: tuple[str, ...]
    glosses: tuple[str, ...]

    def render(self) -> str:
        if not self.morphemes:
            return ""
        return "\t".join(self.morphemes) + "\n" + "\t".join(self.glosses)

    @property
    def morpheme_line(self) -> str:
        return " ".join(self.morphemes)

    @property
    def gloss_line(self) -> str:
        return " ".join(self.glosses)


def word_gloss(word: MorphWord) -> str:
    parts = []
    for m in word.morphemes:
        if not m.gloss:
            raise PFError(f"no gloss for {m.id}")
        parts.append(m.gloss)
    return "-".join(parts)


def emit_gloss(form: SurfaceForm, verbatim: bool = False, fused: bool = False) -> GlossRecord:
    glosses = [word_gloss(w) for w in form.tokens]
    if not verbatim:
        glosses = [leipzig(g) for g in glosses]
    return GlossRecord(tuple(w.render(fused) for w in form.tokens), tuple(glosses))
