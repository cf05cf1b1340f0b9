"""The Yemeni Ibbi Arabic fragment: lexicon, clause recipes and drivers."""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Iterator, Mapping

from .engine import (
    DerivationTrace,
    Leaf,
    Node,
    StepTemplate,
    SyntacticObject,
    complement,
    derive,
    label,
    subtrees,
)
from .features import (
    CLAUSE_TYPES,
    LICENSEE,
    SELECTOR,
    LexicalItem,
    Lexicon,
    can_select,
    load_lexicon,
)

CLAUSE_TAGS = ("decl-affirm", "decl-neg", "decl-emphatic", "interrogative", "imp-affirm", "imp-neg")
# clause type each recipe's embedded clause must come out as
CLAUSE_FEATURE = {
    "decl-affirm": "declarative",
    "decl-neg": "declarative",
    "decl-emphatic": "declarative",
    "interrogative": "interrogative",
    "imp-affirm": "imperative",
    "imp-neg": "imperative",
}
# order in which a verb's arguments are merged by every recipe
ARGUMENT_SLOTS = ("adverb", "pp", "wh", "object")
OPS = ("select", "merge", "move", "agree", "headmove")


class RecipeError(ValueError):
    """Malformed recipe source."""


class FillerError(ValueError):
    """Fillers missing, unknown or of the wrong type for a recipe."""


@dataclass(frozen=True)
class Slot:
    name: str
    categories: tuple[str, ...]
    optional: bool = False
    wh: bool = False
    allow_null: bool = False
    only: tuple[str, ...] = ()
    default: str | None = None

    def accepts(self, item: LexicalItem) -> str | None:
        """None if ``item`` may fill the slot, else the reason it may not."""
        if item.category not in self.categories:
            return f"category {item.category} not in {'/'.join(self.categories)}"
        if item.morph_class == "suffix":
            return "an affix cannot fill a slot"
        if item.is_null and not self.allow_null:
            return "a silent item cannot fill this slot"
        has_wh = "wh" in item.bundle.licensees()
        if self.wh and not has_wh:
            return "not a wh-item"
        if not self.wh and item.bundle.licensees():
            return "item bears a licensee"
        if self.only and item.id not in self.only:
            return f"only {', '.join(self.only)} allowed"
        return None


@dataclass(frozen=True)
class ClauseRecipe:
    clause_type: str
    slots: tuple[Slot, ...]
    steps: tuple[StepTemplate, ...]

    def slot(self, name: str) -> Slot:
        for s in self.slots:
            if s.name == name:
                return s
        raise KeyError(name)

    @property
    def slot_names(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.slots)


@dataclass(frozen=True)
class GrammarFragment:
    lexicon: Lexicon
    recipes: Mapping[str, ClauseRecipe]
    matrix: tuple[StepTemplate, ...]

    def recipe(self, clause_type: str) -> ClauseRecipe:
        try:
            return self.recipes[clause_type]
        except KeyError:
            raise FillerError(f"no recipe for clause type {clause_type!r}") from None

    @property
    def start(self) -> str:
        """Category a complete derivation must project: the matrix top head's."""
        names = {t.args[0]: t.args[1] for t in self.matrix if t.op == "select"}
        top = [t.args[0] for t in self.matrix if t.op == "merge"][-1]
        return self.lexicon[names[top]].category

    def full_steps(self, clause_type: str) -> tuple[StepTemplate, ...]:
        return self.recipe(clause_type).steps + self.matrix

    def spine(self, clause_type: str, fillers: Mapping[str, str] | None = None) -> list[str]:
        """Categories along the embedded clause's head-complement path, highest first."""
        trace = derive_clause(self, clause_type, fillers or default_fillers(self, clause_type))
        return clause_spine(embedded_root(trace.result))


def parse_recipes(source: str) -> tuple[dict[str, ClauseRecipe], tuple[StepTemplate, ...]]:
    recipes: dict[str, ClauseRecipe] = {}
    matrix: list[StepTemplate] = []
    current: str | None = None
    slots: list[Slot] = []
    steps: list[StepTemplate] = []

    def flush():
        if current and current != "matrix":
            if current in recipes:
                raise RecipeError(f"duplicate recipe {current!r}")
            recipes[current] = ClauseRecipe(current, tuple(slots), tuple(steps))

    for lineno, raw in enumerate(source.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            flush()
            header = line.strip("[]").split()
            if header == ["matrix"]:
                current = "matrix"
            elif len(header) == 2 and header[0] == "recipe":
                current = header[1]
            else:
                raise RecipeError(f"line {lineno}: bad section header {line!r}")
            slots, steps = [], []
            continue
        if current is None:
            raise RecipeError(f"line {lineno}: content before any section")
        toks = line.split()
        if toks[0] == "slot":
            if current == "matrix":
                raise RecipeError(f"line {lineno}: the matrix block takes no slots")
            slots.append(_parse_slot(toks[1:], lineno))
            continue
        if toks[0] not in OPS:
            raise RecipeError(f"line {lineno}: unknown op {toks[0]!r}")
        arity = {"select": 2, "merge": 2, "move": 1, "agree": 1, "headmove": 2}[toks[0]]
        if len(toks) - 1 != arity:
            raise RecipeError(f"line {lineno}: {toks[0]} takes {arity} arguments")
        t = StepTemplate(toks[0], tuple(toks[1:]))
        (matrix if current == "matrix" else steps).append(t)
    flush()
    return recipes, tuple(matrix)


def _parse_slot(toks: list[str], lineno: int) -> Slot:
    if len(toks) < 2:
        raise RecipeError(f"line {lineno}: slot needs a name and categories")
    kw: dict = {}
    for flag in toks[2:]:
        if flag == "optional":
            kw["optional"] = True
        elif flag == "wh":
            kw["wh"] = True
        elif flag == "null":
            kw["allow_null"] = True
        elif flag.startswith("only="):
            kw["only"] = tuple(flag[5:].split(","))
        elif flag.startswith("default="):
            kw["default"] = flag[8:]
        else:
            raise RecipeError(f"line {lineno}: unknown slot flag {flag!r}")
    return Slot(toks[0], tuple(toks[1].split("/")), **kw)


def load_fragment(lexicon_text: str | None = None, recipe_text: str | None = None) -> GrammarFragment:
    if lexicon_text is None:
        lexicon_text = _data("yia.lex")
    if recipe_text is None:
        recipe_text = _data("yia.recipes")
    lexicon = load_lexicon(lexicon_text)
    recipes, matrix = parse_recipes(recipe_text)
    for r in recipes.values():
        for t in r.steps:
            if t.op == "select" and not t.args[1].startswith("$") and t.args[1] not in lexicon:
                raise RecipeError(f"recipe {r.clause_type}: unknown item {t.args[1]!r}")
    return GrammarFragment(lexicon, recipes, matrix)


def _data(name: str) -> str:
    return resources.files("qulk").joinpath("data", name).read_text(encoding="utf-8")


@lru_cache(maxsize=1)
def yia_fragment() -> GrammarFragment:
    return load_fragment()


def yia_lexicon() -> Lexicon:
    return yia_fragment().lexicon


# -- filler handling --------------------------------------------------------

def resolve_fillers(fragment: GrammarFragment, clause_type: str, fillers: Mapping[str, str]) -> dict[str, str]:
    """Check fillers against the recipe's slots; fill defaults."""
    recipe = fragment.recipe(clause_type)
    unknown = set(fillers) - set(recipe.slot_names)
    if unknown:
        raise FillerError(f"{clause_type} has no slot(s) {', '.join(sorted(unknown))}")
    out = {}
    for slot in recipe.slots:
        value = fillers.get(slot.name, slot.default)
        if value is None:
            if not slot.optional:
                raise FillerError(f"{clause_type}: slot {slot.name!r} must be filled")
            continue
        if value not in fragment.lexicon:
            raise FillerError(f"slot {slot.name!r}: unknown item {value!r}")
        why = slot.accepts(fragment.lexicon[value])
        if why:
            raise FillerError(f"slot {slot.name!r} cannot take {value!r}: {why}")
        out[slot.name] = value
    return out


def instantiate(fragment: GrammarFragment, clause_type: str, fillers: Mapping[str, str]) -> list[StepTemplate]:
    """Recipe plus matrix steps with slots resolved and unfilled ones dropped."""
    filled = resolve_fillers(fragment, clause_type, fillers)
    dropped: set[str] = set()
    out = []
    for t in fragment.full_steps(clause_type):
        if t.op == "select":
            name, ref = t.args
            if ref.startswith("$"):
                value = filled.get(ref[1:])
                if value is None:
                    dropped.add(name)
                    continue
                ref = value
            out.append(StepTemplate("select", (name, ref)))
        elif any(a in dropped for a in t.args):
            continue
        else:
            out.append(t)
    return out


def build_numeration(fragment: GrammarFragment, clause_type: str, fillers: Mapping[str, str]) -> Counter:
    steps = instantiate(fragment, clause_type, fillers)
    return Counter(t.args[1] for t in steps if t.op == "select")


def derive_clause(fragment: GrammarFragment, clause_type: str, fillers: Mapping[str, str]) -> DerivationTrace:
    steps = instantiate(fragment, clause_type, fillers)
    numeration = Counter(t.args[1] for t in steps if t.op == "select")
    return derive(numeration, steps, fragment.lexicon, fragment.start)


def default_fillers(fragment: GrammarFragment, clause_type: str) -> dict[str, str]:
    for combo in filler_combinations(fragment, clause_type):
        return combo
    raise FillerError(f"no well-typed fillers for {clause_type}")


# -- static well-typedness ----------------------------------------------------

def well_typed(fragment: GrammarFragment, clause_type: str, fillers: Mapping[str, str]) -> str | None:
    """None if the fillers fit the verb's frame and agreement, else why not.

    Slot categories are checked first, then the verb's mood against the
    clause type (questions take unmarked verbs); then the verb's selectors must
    accept the argument slots in merge order, every obligatory selector must
    be used, a modifier needs an object that takes one, and the subject's
    phi must match the verb's inflection.
    """
    try:
        filled = resolve_fillers(fragment, clause_type, fillers)
    except FillerError as exc:
        return str(exc)
    lex = fragment.lexicon
    verb = lex[filled["verb"]]
    # questions are built on unmarked (declarative) verbs
    want = {"interrogative": "declarative"}.get(CLAUSE_FEATURE.get(clause_type), CLAUSE_FEATURE.get(clause_type))
    mood = verb.bundle.clause_type or "declarative"
    if want and mood != want:
        return f"{verb.id} is {mood}; {clause_type} needs a {want} verb"
    seq = verb.bundle.sequence
    pos = 0
    for name in ARGUMENT_SLOTS:
        if name not in filled:
            continue
        arg = lex[filled[name]].bundle
        while pos < len(seq) and seq[pos].kind == SELECTOR:
            if can_select(seq[pos], arg):
                break
            if not seq[pos].optional:
                return f"{verb.id} needs {seq[pos]} before {name}"
            pos += 1
        else:
            return f"{verb.id} has no place for {name}"
        pos += 1
    rest = [f for f in seq[pos:] if f.kind == SELECTOR and not f.optional]
    if rest:
        return f"{verb.id} is missing an argument for {rest[0]}"
    if "modifier" in filled:
        if "object" not in filled:
            return "a modifier needs an object"
        obj = lex[filled["object"]]
        if not any(f.kind == SELECTOR and can_select(f, lex[filled["modifier"]].bundle)
                   for f in obj.bundle.sequence):
            return f"{obj.id} takes no modifier"
        if obj.is_null:
            return "a silent object takes no modifier"
    subject = filled.get("subject")
    if subject is None:
        subject = next(t.args[1] for t in fragment.recipe(clause_type).steps
                       if t.op == "select" and t.args[0] == "S")
    phi, agr = lex[subject].bundle.phi, verb.bundle.agr
    for attr in ("person", "number", "gender"):
        if attr in phi and attr in agr and phi[attr] != agr[attr]:
            return f"subject {subject} ({attr}={phi[attr]}) does not agree with {verb.id}"
        if attr != "gender" and attr in agr and attr not in phi:
            return f"subject {subject} lacks {attr}"
    return None


def filler_combinations(fragment: GrammarFragment, clause_type: str) -> Iterator[dict[str, str]]:
    """Every well-typed filler assignment over the fragment's lexicon."""
    recipe = fragment.recipe(clause_type)
    choices = []
    for slot in recipe.slots:
        opts = [it.id for it in fragment.lexicon if slot.accepts(it) is None]
        if slot.optional:
            opts = [None] + opts
        choices.append(opts)
    for combo in itertools.product(*choices):
        fillers = {s.name: v for s, v in zip(recipe.slots, combo) if v is not None}
        if well_typed(fragment, clause_type, fillers) is None:
            yield fillers


def matrix_block(fragment: GrammarFragment, trace: DerivationTrace) -> tuple:
    """The trace's matrix-layer steps with occurrences renamed by first
    appearance, so blocks from different recipes compare structurally.
    Occurrences from outside the block (the embedded clause) become "C",
    and a Merge keeps only the selector it checked, not the category of
    the phrase it selected."""
    first = next(t.args[1] for t in fragment.matrix if t.op == "select")
    start = next(i for i, st in enumerate(trace.steps) if st.op == "Select" and st.operands[0] == first)
    names: dict[int, str] = {}
    out = []
    for st in trace.steps[start:]:
        if st.op == "Select":
            item, occ = st.operands
            names[occ] = f"m{len(names)}"
            out.append((st.op, item, names[occ]))
        else:
            why = st.rationale.split()[0] if st.op == "ExternalMerge" else st.rationale
            out.append((st.op,) + tuple(names.get(o, "C") for o in st.operands) + (why,))
    return tuple(out)


def embedded_root(so: SyntacticObject) -> SyntacticObject:
    """The clause selected by the matrix predicate (qul's complement)."""
    for _, sub in subtrees(so):
        if isinstance(sub, Node) and sub.head_left and isinstance(sub.left, Leaf) \
                and sub.left.category == "V" and sub.nonhead is not None \
                and label(sub.nonhead).category in ("Top", "Force"):
            return sub.nonhead
    raise ValueError("no embedded clause found")


def clause_spine(so: SyntacticObject) -> list[str]:
    """Categories along the complement line, highest first, down to V."""
    out = []
    while True:
        out.append(label(so).category)
        comp = complement(so)
        if comp is None or out[-1] == "V":
            return out
        so = comp


def embedded_clause_type(trace: DerivationTrace | SyntacticObject) -> str:
    """Clause type of the embedded clause.

    The left-periphery head types the clause when it carries a clause-type
    feature (Force is interrogative); otherwise the verb's mood decides, and
    an unmarked verb makes the clause declarative.
    """
    so = trace.result if isinstance(trace, DerivationTrace) else trace
    node = embedded_root(so)
    top = label(node).bundle.clause_type
    if top:
        return top
    while node is not None:
        head = label(node)
        if head.category == "V":
            return head.bundle.clause_type or "declarative"
        node = complement(node)
    return "declarative"


__all__ = [
    "CLAUSE_TAGS", "CLAUSE_FEATURE", "CLAUSE_TYPES", "ClauseRecipe", "FillerError", "GrammarFragment",
    "RecipeError", "Slot", "build_numeration", "clause_spine", "default_fillers", "derive_clause", "embedded_clause_type", "embedded_root", "filler_combinations", "matrix_block",
    "instantiate", "load_fragment", "parse_recipes", "resolve_fillers", "well_typed", "yia_fragment",
    "yia_lexicon",
]
