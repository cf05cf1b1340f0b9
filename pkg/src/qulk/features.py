"""Features, feature bundles, lexical items and the lexicon file reader.

Lexicon lines have the form ``id | gloss | features | morph_class [| phon]``.
The features column is a whitespace-separated list of tokens:

    V            category (bare label)
    =T           selector; ``=>T`` also attracts the selected head,
                 ``=P?`` is optional, ``=Top/Force`` accepts either label
    +wh          licensor (movement trigger)
    -wh          licensee
    phi:person=3     interpretable, valued phi feature (goals)
    uphi:person      uninterpretable, unvalued phi feature (probes)
    agr:person=3     uninterpretable, valued phi (verbal inflection)
    ctype:declarative

When the phon column is missing it defaults to the id, or to the empty
string for ``null`` items.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

CATEGORY = "category"
SELECTOR = "selector"
LICENSOR = "licensor"
LICENSEE = "licensee"
PHI = "phi"
CLAUSE_TYPE = "clause-type"

KINDS = (CATEGORY, SELECTOR, LICENSOR, LICENSEE, PHI, CLAUSE_TYPE)
# features consumed in order by Merge and Move
SEQUENTIAL = (SELECTOR, LICENSOR, CATEGORY, LICENSEE)

CATEGORIES = ("V", "v", "T", "Neg", "NegCl", "Top", "Force", "D", "P", "Adv", "A")
TRIGGERS = ("wh", "epp", "top")
PHI_ATTRIBUTES = ("person", "number", "gender")
CLAUSE_TYPES = ("declarative", "interrogative", "imperative")
MORPH_CLASSES = ("free", "suffix", "prefix", "null")

# gender assigned to a probe when the goal leaves it unspecified (1st person)
DEFAULT_GENDER = "m"


class LexiconError(ValueError):
    """Malformed lexicon source or an entry violating an item invariant."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class AgreeMisuse(ValueError):
    """Agree attempted with a probe that has nothing left to value."""


@dataclass(frozen=True)
class Feature:
    kind: str
    attribute: str
    value: str | None = None
    interpretable: bool = False
    valued: bool = True
    optional: bool = False  # selectors only
    strong: bool = False  # selectors only: triggers head movement

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown feature kind {self.kind!r}")
        if self.kind != PHI and not self.valued:
            raise ValueError(f"{self.kind} features are always valued")

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(self.attribute.split("/"))

    def __str__(self) -> str:
        if self.kind == CATEGORY:
            return self.attribute
        if self.kind == SELECTOR:
            return ("=>" if self.strong else "=") + self.attribute + ("?" if self.optional else "")
        if self.kind == LICENSOR:
            return "+" + self.attribute
        if self.kind == LICENSEE:
            return "-" + self.attribute
        if self.kind == CLAUSE_TYPE:
            return f"ctype:{self.attribute}"
        if not self.valued:
            return f"uphi:{self.attribute}"
        prefix = "phi" if self.interpretable else "agr"
        return f"{prefix}:{self.attribute}={self.value}"


@dataclass(frozen=True)
class FeatureBundle:
    features: tuple[Feature, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "features", tuple(self.features))
        cats = [f for f in self.features if f.kind == CATEGORY]
        if len(cats) > 1:
            raise ValueError("a bundle carries at most one category feature")

    @property
    def sequence(self) -> tuple[Feature, ...]:
        return tuple(f for f in self.features if f.kind in SEQUENTIAL)

    @property
    def category(self) -> str | None:
        for f in self.features:
            if f.kind == CATEGORY:
                return f.attribute
        return None

    @property
    def category_index(self) -> int | None:
        for i, f in enumerate(self.sequence):
            if f.kind == CATEGORY:
                return i
        return None

    @property
    def probes(self) -> tuple[str, ...]:
        """Attributes of unvalued phi features."""
        return tuple(f.attribute for f in self.features if f.kind == PHI and not f.valued)

    @property
    def phi(self) -> dict[str, str]:
        """Interpretable, valued phi (what a goal offers)."""
        return {f.attribute: f.value for f in self.features
                if f.kind == PHI and f.valued and f.interpretable}

    @property
    def agr(self) -> dict[str, str]:
        """Uninterpretable valued phi: the inflection a verb spells out."""
        return {f.attribute: f.value for f in self.features
                if f.kind == PHI and f.valued and not f.interpretable}

    @property
    def clause_type(self) -> str | None:
        for f in self.features:
            if f.kind == CLAUSE_TYPE:
                return f.attribute
        return None

    def licensees(self) -> tuple[str, ...]:
        return tuple(f.attribute for f in self.features if f.kind == LICENSEE)

    def valued_with(self, values: Mapping[str, str]) -> FeatureBundle:
        """Copy with the named probe features valued."""
        out = []
        for f in self.features:
            if f.kind == PHI and not f.valued and f.attribute in values:
                f = Feature(PHI, f.attribute, values[f.attribute], interpretable=False, valued=True)
            out.append(f)
        return FeatureBundle(tuple(out))

    def __str__(self) -> str:
        return " ".join(str(f) for f in self.features)


@dataclass(frozen=True)
class LexicalItem:
    id: str
    phon: str
    gloss: str
    bundle: FeatureBundle = field(compare=False)
    morph_class: str = field(default="free", compare=False)

    def __post_init__(self):
        if self.morph_class not in MORPH_CLASSES:
            raise ValueError(f"{self.id}: unknown morph class {self.morph_class!r}")
        if (self.morph_class == "null") != (self.phon == ""):
            raise ValueError(f"{self.id}: morph_class null iff phon is empty")

    @property
    def is_null(self) -> bool:
        return self.morph_class == "null"

    @property
    def is_affix(self) -> bool:
        return self.morph_class in ("suffix", "prefix")

    @property
    def category(self) -> str | None:
        return self.bundle.category


@dataclass(frozen=True)
class Lexicon:
    entries: Mapping[str, LexicalItem]

    def __getitem__(self, item_id: str) -> LexicalItem:
        try:
            return self.entries[item_id]
        except KeyError:
            raise KeyError(f"no lexical item {item_id!r}") from None

    def __contains__(self, item_id: object) -> bool:
        return item_id in self.entries

    def __iter__(self):
        return iter(self.entries.values())

    def __len__(self) -> int:
        return len(self.entries)

    def by_phon(self, phon: str) -> list[LexicalItem]:
        return [it for it in self.entries.values() if it.phon == phon]


def parse_feature(token: str) -> Feature:
    if token.startswith("=>"):
        return _selector(token[2:], strong=True)
    if token.startswith("="):
        return _selector(token[1:], strong=False)
    if token.startswith("+"):
        return Feature(LICENSOR, _ident(token[1:]))
    if token.startswith("-"):
        return Feature(LICENSEE, _ident(token[1:]))
    if ":" in token:
        prefix, rest = token.split(":", 1)
        if prefix == "ctype":
            if rest not in CLAUSE_TYPES:
                raise ValueError(f"unknown clause type {rest!r}")
            return Feature(CLAUSE_TYPE, rest, interpretable=True)
        if prefix == "uphi":
            _phi_attr(rest)
            return Feature(PHI, rest, None, interpretable=False, valued=False)
        if prefix in ("phi", "agr"):
            attr, sep, value = rest.partition("=")
            if not sep or not value:
                raise ValueError(f"phi feature {token!r} needs a value")
            _phi_attr(attr)
            return Feature(PHI, attr, value, interpretable=prefix == "phi", valued=True)
        raise ValueError(f"unknown feature prefix {prefix!r}")
    return Feature(CATEGORY, _ident(token), interpretable=True)


def _selector(body: str, strong: bool) -> Feature:
    optional = body.endswith("?")
    body = body.rstrip("?")
    for label in body.split("/"):
        _ident(label)
    return Feature(SELECTOR, body, optional=optional, strong=strong)


def _ident(s: str) -> str:
    if not s or not all(ch.isalnum() or ch in "_." for ch in s):
        raise ValueError(f"bad identifier {s!r}")
    return s


def _phi_attr(attr: str) -> None:
    if attr not in PHI_ATTRIBUTES:
        raise ValueError(f"unknown phi attribute {attr!r}")


def parse_bundle(text: str) -> FeatureBundle:
    return FeatureBundle(tuple(parse_feature(tok) for tok in text.split()))


def load_lexicon(source: str | Iterable[str]) -> Lexicon:
    lines = source.splitlines() if isinstance(source, str) else list(source)
    entries: dict[str, LexicalItem] = {}
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        cols = [c.strip() for c in line.split("|")]
        if len(cols) not in (4, 5):
            raise LexiconError(f"expected 4 or 5 '|'-separated columns, got {len(cols)}", lineno)
        item_id, gloss, feats, morph = cols[:4]
        if not item_id:
            raise LexiconError("empty id", lineno)
        if morph not in MORPH_CLASSES:
            raise LexiconError(f"unknown morph class {morph!r}", lineno)
        phon = cols[4] if len(cols) == 5 else ("" if morph == "null" else item_id)
        if morph == "suffix" and not phon.startswith("-"):
            raise LexiconError(f"suffix {item_id!r} must be written with a leading '-'", lineno)
        if morph != "suffix" and phon.startswith("-"):
            raise LexiconError(f"{item_id!r} is written as a suffix but declared {morph}", lineno)
        if item_id in entries:
            raise LexiconError(f"duplicate id {item_id!r}", lineno)
        try:
            bundle = parse_bundle(feats)
            entries[item_id] = LexicalItem(item_id, phon, gloss, bundle, morph)
        except ValueError as exc:
            raise LexiconError(str(exc), lineno) from None
    return Lexicon(entries)


def dump_lexicon(lexicon: Lexicon) -> str:
    rows = []
    for it in lexicon:
        default_phon = "" if it.is_null else it.id
        cols = [it.id, it.gloss, str(it.bundle), it.morph_class]
        if it.phon != default_phon:
            cols.append(it.phon)
        rows.append(" | ".join(cols))
    return "\n".join(rows) + "\n"


def can_select(selector: Feature, candidate: FeatureBundle) -> bool:
    if selector.kind != SELECTOR:
        raise ValueError(f"can_select needs a selector feature, got {selector.kind}")
    return candidate.category is not None and candidate.category in selector.labels


@dataclass(frozen=True)
class AgreementResult:
    """Values copied from a goal onto a probe.

    ``defaults`` lists attributes the goal left unspecified and which the
    probe filled with its default value instead.
    """

    values: Mapping[str, str]
    defaults: Mapping[str, str] = field(default_factory=dict)

    def all_values(self) -> dict[str, str]:
        return {**self.defaults, **self.values}


def match_probe(probe: FeatureBundle, goal: FeatureBundle) -> AgreementResult | None:
    wanted = probe.probes
    if not wanted:
        raise AgreeMisuse("probe has no unvalued phi features")
    offered = goal.phi
    values, defaults = {}, {}
    for attr in wanted:
        if attr in offered:
            values[attr] = offered[attr]
        elif attr == "gender" and offered:
            defaults[attr] = DEFAULT_GENDER
        else:
            return None
    return AgreementResult(values, defaults)
