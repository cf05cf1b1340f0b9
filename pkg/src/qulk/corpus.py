"""Interlinear corpus records, structural assertions and the corpus runner.

A corpus file is a sequence of blank-line-separated records of ``key: value``
lines.  Lines starting with ``#`` are comments.  Keys:

    id, surface, morphemes, gloss, translation, clause_type, slots, assert

``morphemes`` and ``gloss`` are tiers of ``|``-separated columns, one per
phonological word, with ``-`` marking morpheme boundaries.  ``slots`` lists
``name=item`` fillers for the record's recipe.  ``assert`` may repeat.
"""
from __future__ import annotations

import re
import time
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Sequence

from .engine import DerivationTrace, Leaf, Node, label, subtrees
from .grammar import FillerError, GrammarFragment, derive_clause
from .parser import ParseError, SearchBounds, parse
from .pf import PFError, emit_gloss, spell_out

KEYS = ("id", "surface", "morphemes", "gloss", "translation", "clause_type", "slots", "assert")
REQUIRED = ("id", "surface", "morphemes", "gloss", "clause_type")


class CorpusError(ValueError):
    def __init__(self, message: str, record: str | None = None, line: int | None = None):
        where = []
        if record is not None:
            where.append(f"record {record}")
        if line is not None:
            where.append(f"line {line}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)
        self.record = record
        self.line = line


class AlignmentError(CorpusError):
    pass


# -- structural assertions ----------------------------------------------------

ASSERTION_KINDS = ("occupies", "head_of", "fused", "silent")
_CALL = re.compile(r"^(\w+)\((.*)\)$")


@dataclass(frozen=True)
class StructuralAssertion:
    """``occupies(item, Spec-XP)``, ``head_of(item, XP)``,
    ``fused(item, item, form)`` or ``silent(item)``."""

    kind: str
    args: tuple[str, ...]

    def __post_init__(self):
        arity = {"occupies": 2, "head_of": 2, "fused": 3, "silent": 1}
        if self.kind not in arity:
            raise ValueError(f"unknown assertion {self.kind!r}")
        if len(self.args) != arity[self.kind]:
            raise ValueError(f"{self.kind} takes {arity[self.kind]} argument(s)")
        if self.kind == "occupies" and not re.fullmatch(r"Spec-\w+P", self.args[1]):
            raise ValueError(f"position must look like Spec-XP, not {self.args[1]!r}")
        if self.kind == "head_of" and not re.fullmatch(r"\w+P", self.args[1]):
            raise ValueError(f"projection must look like XP, not {self.args[1]!r}")

    @classmethod
    def parse(cls, text: str) -> StructuralAssertion:
        m = _CALL.match(text.strip())
        if not m:
            raise ValueError(f"bad assertion {text!r}")
        args = tuple(a.strip().strip('"') for a in m.group(2).split(","))
        return cls(m.group(1), args)

    def __str__(self):
        args = list(self.args)
        if self.kind == "fused":
            args[2] = f'"{args[2]}"'
        return f"{self.kind}({', '.join(args)})"

    def check(self, trace: DerivationTrace) -> tuple[bool, str]:
        return getattr(self, "_" + self.kind)(trace)

    def _occupies(self, trace):
        item, pos = self.args
        cat = pos[len("Spec-"):-1]
        for _, node in subtrees(trace.result):
            if isinstance(node, Node) and not node.head_left and not node.left.silent \
                    and label(node.left).id == item and label(node).category == cat:
                return True, f"{item} is pronounced at {pos}"
        return False, f"no pronounced {item} at {pos}"

    def _head_of(self, trace):
        item, proj = self.args
        cat = proj[:-1]
        for _, node in subtrees(trace.result):
            if isinstance(node, Node) and label(node).id == item and label(node).category == cat:
                return True, f"{item} heads {proj}"
        return False, f"{item} does not project {proj}"

    def _fused(self, trace):
        a, b, form = self.args
        try:
            words = spell_out(trace).tokens
        except PFError as exc:
            return False, f"spell-out failed: {exc}"
        for w in words:
            ids = {m.id for m in w.morphemes}
            if a in ids and b in ids:
                if w.surface == form:
                    return True, f"{a} and {b} form {form}"
                return False, f"{a} and {b} form {w.surface}, not {form}"
        return False, f"{a} and {b} are not in one word"

    def _silent(self, trace):
        (item,) = self.args
        present = False
        for _, node in subtrees(trace.result):
            if isinstance(node, Leaf):
                present = present or any(l.id == item for l in node.incorporated + (node,))
        if not present:
            return False, f"{item} is not in the derivation"
        try:
            words = spell_out(trace).tokens
        except PFError as exc:
            return False, f"spell-out failed: {exc}"
        if any(m.id == item for w in words for m in w.morphemes):
            return False, f"{item} is pronounced"
        return True, f"{item} is silent"


# -- records ------------------------------------------------------------------

def _columns(tier: str) -> list[str]:
    return [c.strip() for c in tier.split("|")]


@dataclass(frozen=True)
class CorpusRecord:
    id: str
    surface: str
    morphemes: str
    gloss: str
    translation: str = ""
    clause_type: str = ""
    slots: tuple[tuple[str, str], ...] = ()
    assertions: tuple[StructuralAssertion, ...] = ()

    def __post_init__(self):
        morph, gloss = _columns(self.morphemes), _columns(self.gloss)
        if len(morph) != len(gloss):
            raise AlignmentError(f"{len(morph)} morpheme columns but {len(gloss)} gloss columns", self.id)
        for i, (m, g) in enumerate(zip(morph, gloss), 1):
            if m.count("-") != g.count("-"):
                raise AlignmentError(f"column {i}: {m!r} and {g!r} have different morpheme counts", self.id)
        if " ".join(morph) != " ".join(self.surface.split()):
            raise AlignmentError("surface does not match the morpheme tier", self.id)

    @property
    def fillers(self) -> dict[str, str]:
        return dict(self.slots)


def _parse_slots(text: str) -> tuple[tuple[str, str], ...]:
    out = []
    for tok in text.split():
        name, sep, value = tok.partition("=")
        if not sep or not name or not value:
            raise ValueError(f"bad slot filler {tok!r}")
        out.append((name, value))
    return tuple(out)


def _record(fields: list[tuple[str, str, int]]) -> CorpusRecord:
    data: dict[str, str] = {}
    asserts: list[StructuralAssertion] = []
    rid = next((v for k, v, _ in fields if k == "id"), None)
    for key, value, lineno in fields:
        if key not in KEYS:
            raise CorpusError(f"unknown key {key!r}", rid, lineno)
        try:
            if key == "assert":
                asserts.append(StructuralAssertion.parse(value))
                continue
            if key in data:
                raise CorpusError(f"duplicate key {key!r}", rid, lineno)
            data[key] = value
        except ValueError as exc:
            if isinstance(exc, CorpusError):
                raise
            raise CorpusError(str(exc), rid, lineno) from None
    missing = [k for k in REQUIRED if k not in data]
    if missing:
        raise CorpusError(f"missing {', '.join(missing)}", rid, fields[0][2])
    try:
        slots = _parse_slots(data.pop("slots", ""))
    except ValueError as exc:
        raise CorpusError(str(exc), rid) from None
    return CorpusRecord(slots=slots, assertions=tuple(asserts), **data)


def load_corpus(source: str) -> list[CorpusRecord]:
    records: list[CorpusRecord] = []
    block: list[tuple[str, str, int]] = []
    for lineno, raw in enumerate(source.splitlines() + [""], 1):
        line = raw.strip()
        if line.startswith("#"):
            continue
        if not line:
            if block:
                records.append(_record(block))
                block = []
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise CorpusError(f"expected 'key: value', got {line!r}", line=lineno)
        block.append((key.strip(), value.strip(), lineno))
    seen = set()
    for r in records:
        if r.id in seen:
            raise CorpusError("duplicate id", r.id)
        seen.add(r.id)
    return records


def dump_corpus(records: Iterable[CorpusRecord]) -> str:
    blocks = []
    for r in records:
        lines = [f"id: {r.id}", f"surface: {r.surface}", f"morphemes: {r.morphemes}",
                 f"gloss: {r.gloss}"]
        if r.translation:
            lines.append(f"translation: {r.translation}")
        lines.append(f"clause_type: {r.clause_type}")
        if r.slots:
            lines.append("slots: " + " ".join(f"{k}={v}" for k, v in r.slots))
        lines += [f"assert: {a}" for a in r.assertions]
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + ("\n" if blocks else "")


def shipped_corpus_text() -> str:
    return resources.files("qulk").joinpath("data/corpus.txt").read_text(encoding="utf-8")


def shipped_corpus() -> list[CorpusRecord]:
    return load_corpus(shipped_corpus_text())


# -- running ------------------------------------------------------------------

CHECKS = ("derive", "surface", "gloss", "parse", "roundtrip", "assertions")


@dataclass
class RecordResult:
    id: str
    checks: dict[str, bool] = field(default_factory=dict)
    messages: list[str] = field(default_factory=list)
    seconds: float = 0.0
    trace: DerivationTrace | None = field(default=None, repr=False)

    @property
    def ok(self) -> bool:
        return bool(self.checks) and all(self.checks.values())


@dataclass
class CorpusReport:
    results: list[RecordResult]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def render(self) -> str:
        width = max([len(r.id) for r in self.results] + [2])
        lines = ["id".ljust(width) + "  " + "  ".join(CHECKS) + "  result"]
        for r in self.results:
            cells = ["ok" if r.checks.get(c) else ("--" if c not in r.checks else "FAIL") for c in CHECKS]
            row = "  ".join(cell.ljust(len(c)) for cell, c in zip(cells, CHECKS))
            lines.append(f"{r.id.ljust(width)}  {row}  {'PASS' if r.ok else 'FAIL'}")
            lines += [f"    {m}" for m in r.messages]
        passed = sum(r.ok for r in self.results)
        lines.append(f"{passed}/{len(self.results)} records pass")
        return "\n".join(lines)


def run_record(record: CorpusRecord, fragment: GrammarFragment,
               bounds: SearchBounds = SearchBounds()) -> RecordResult:
    res = RecordResult(record.id)
    t0 = time.perf_counter()
    try:
        trace = derive_clause(fragment, record.clause_type, record.fillers)
    except FillerError as exc:
        res.checks["derive"] = False
        res.messages.append(f"derive: {exc}")
        res.seconds = time.perf_counter() - t0
        return res
    res.trace = trace
    res.checks["derive"] = trace.converged
    if not trace.converged:
        res.messages.append(f"derive: {trace.verdict}")
        res.seconds = time.perf_counter() - t0
        return res
    try:
        form = spell_out(trace)
    except PFError as exc:
        res.checks["surface"] = False
        res.messages.append(f"spell-out: {exc}")
        res.seconds = time.perf_counter() - t0
        return res
    res.checks["surface"] = form.render() == record.surface
    if not res.checks["surface"]:
        res.messages.append(f"surface: got {form.render()!r}, expected {record.surface!r}")
    gl = emit_gloss(form, verbatim=True)
    got_gloss = " | ".join(gl.glosses)
    want_gloss = " | ".join(_columns(record.gloss))
    res.checks["gloss"] = got_gloss == want_gloss and " | ".join(gl.morphemes) == " | ".join(_columns(record.morphemes))
    if not res.checks["gloss"]:
        res.messages.append(f"gloss: got {got_gloss!r}, expected {want_gloss!r}")
    try:
        parses = parse(record.surface, fragment, bounds)
    except ParseError as exc:
        parses = []
        res.messages.append(f"parse: {exc}")
    res.checks["parse"] = bool(parses)
    res.checks["roundtrip"] = any(p.result == trace.result for p in parses)
    if parses and not res.checks["roundtrip"]:
        res.messages.append("roundtrip: no parse equals the derived tree")
    ok = True
    for a in record.assertions:
        passed, why = a.check(trace)
        ok = ok and passed
        if not passed:
            res.messages.append(f"{a}: {why}")
    res.checks["assertions"] = ok
    res.seconds = time.perf_counter() - t0
    return res


def run_corpus(records: Sequence[CorpusRecord], fragment: GrammarFragment,
               bounds: SearchBounds = SearchBounds()) -> CorpusReport:
    return CorpusReport([run_record(r, fragment, bounds) for r in records])


__all__ = [
    "ASSERTION_KINDS", "AlignmentError", "CHECKS", "CorpusError", "CorpusRecord", "CorpusReport",
    "RecordResult", "StructuralAssertion", "dump_corpus", "load_corpus", "run_corpus", "run_record",
    "shipped_corpus", "shipped_corpus_text",
]
