from collections import Counter

import pytest

from qulk.engine import label, leaves
from qulk.grammar import (
    CLAUSE_FEATURE,
    CLAUSE_TAGS,
    FillerError,
    RecipeError,
    build_numeration,
    clause_spine,
    default_fillers,
    embedded_clause_type,
    embedded_root,
    filler_combinations,
    load_fragment,
    matrix_block,
    parse_recipes,
    resolve_fillers,
    well_typed,
)
from qulk.pf import spell_out


def test_lexicon_lookups(lexicon):
    wayn = lexicon["wayn"]
    assert wayn.gloss == "where" and "wh" in wayn.bundle.licensees()
    neg = lexicon["-š"]
    assert neg.category == "NegCl" and neg.morph_class == "suffix" and neg.gloss == "NEG"
    pro = lexicon["pro-2MS"]
    assert pro.is_null and pro.category == "D"
    assert pro.bundle.phi == {"person": "2", "number": "sg", "gender": "m"}


def test_every_clause_type_has_a_recipe(fragment):
    assert set(fragment.recipes) == set(CLAUSE_TAGS)


def test_numeration_for_4a(fragment):
    n = build_numeration(fragment, "decl-affirm", {"subject": "ʕali", "verb": "jāʔ"})
    assert n == Counter({"qul": 1, "-k": 1, "ʕali": 1, "jāʔ": 1, "v": 2, "T": 2, "Top": 1})


def test_numeration_for_15(fragment):
    n = build_numeration(fragment, "imp-neg", {"verb": "tiftaḥ", "object": "al-bāb", "addressee": "lak"})
    assert n["lā"] == n["-š"] == n["pro-2MS"] == 1


@pytest.mark.parametrize("fillers, message", [
    ({"wh": "wayn", "subject": "jāʔ", "verb": "wali"}, "category V"),
    ({"wh": "wayn", "verb": "wali"}, "must be filled"),
    ({"wh": "wayn", "subject": "ʕali", "verb": "wali", "colour": "x"}, "no slot"),
    ({"wh": "wayn", "subject": "zzz", "verb": "wali"}, "unknown item"),
    ({"wh": "ʕali", "subject": "ʕali", "verb": "wali"}, "not a wh-item"),
    ({"wh": "wayn", "subject": "pro-3MS", "verb": "wali"}, "silent"),
])
def test_ill_typed_fillers(fragment, fillers, message):
    with pytest.raises(FillerError, match=message):
        resolve_fillers(fragment, "interrogative", fillers)
    assert message in well_typed(fragment, "interrogative", fillers)


def test_unknown_clause_type(fragment):
    with pytest.raises(FillerError):
        fragment.recipe("exclamative")


def test_well_typed_frames(fragment):
    ok = {"subject": "ʕali", "verb": "ʔištara", "object": "al-kitāb"}
    assert well_typed(fragment, "decl-affirm", ok) is None
    assert "missing an argument" in well_typed(fragment, "decl-affirm", {"subject": "ʕali", "verb": "ʔištara"})
    assert "does not agree" in well_typed(fragment, "decl-affirm", {"subject": "ʔana", "verb": "jāʔ"})
    assert "modifier" in well_typed(fragment, "decl-affirm", {"subject": "ʕali", "verb": "jāʔ", "modifier": "al-jadiid"})
    assert "takes no modifier" in well_typed(
        fragment, "decl-affirm", {"subject": "ʕali", "verb": "ʔištara", "object": "al-bāb", "modifier": "al-jadiid"})


def test_emphatic_has_inna_in_top(derive):
    trace = derive("decl-emphatic", subject="ʕali", verb="jāʔ", adverb="ʔams", addressee="lak")
    assert trace.converged
    assert label(embedded_root(trace.result)).id == "ʔinna"


def test_interrogative_wh_at_spec_force(derive):
    trace = derive("interrogative", wh="ʔayš", verb="ʔištara", subject="ʕali")
    root = embedded_root(trace.result)
    assert label(root).category == "Force"
    assert label(root.left).id == "ʔayš" and not root.left.silent


def test_imperative_pro_is_silent(derive):
    trace = derive("imp-affirm", verb="ʔiftaḥ", object="al-bāb")
    assert spell_out(trace).render() == "qul-k ʔiftaḥ al-bāb"
    pro = [l for l in leaves(trace.result) if l.id == "pro-2MS"]
    assert pro and all(l.silent or l.item.is_null for l in pro)


@pytest.mark.parametrize("clause, spine", [
    ("decl-affirm", ["Top", "T", "v", "V"]),
    ("decl-emphatic", ["Top", "T", "v", "V"]),
    ("decl-neg", ["Top", "Neg", "NegCl", "T", "v", "V"]),
    ("interrogative", ["Force", "T", "v", "V"]),
    ("imp-affirm", ["Top", "T", "v", "V"]),
    ("imp-neg", ["Top", "Neg", "NegCl", "T", "v", "V"]),
])
def test_spines(fragment, clause, spine):
    assert fragment.spine(clause) == spine


def test_matrix_spine(derive):
    trace = derive("decl-affirm", subject="ʕali", verb="jāʔ")
    assert clause_spine(trace.result) == ["T", "v", "V"]


@pytest.mark.parametrize("clause", CLAUSE_TAGS)
def test_every_combination_converges_with_its_clause_type(fragment, derive, clause):
    combos = list(filler_combinations(fragment, clause))
    assert combos
    for fillers in combos:
        trace = derive(clause, **fillers)
        assert trace.converged, (fillers, trace.verdict)
        assert embedded_clause_type(trace) == CLAUSE_FEATURE[clause]


def test_default_fillers_are_well_typed(fragment):
    for clause in CLAUSE_TAGS:
        assert well_typed(fragment, clause, default_fillers(fragment, clause)) is None


def test_matrix_block_is_shared(fragment, derive):
    blocks = {matrix_block(fragment, derive(c, **default_fillers(fragment, c))) for c in CLAUSE_TAGS}
    assert len(blocks) == 1
    block = blocks.pop()
    assert block[0] == ("Select", "qul", "m0")


def test_matrix_block_ignores_embedded_content(fragment, derive):
    a = matrix_block(fragment, derive("decl-affirm", subject="ʕali", verb="jāʔ"))
    b = matrix_block(fragment, derive("imp-neg", verb="tiftaḥ", object="al-bāb"))
    assert a == b


@pytest.mark.parametrize("text, message", [
    ("select V jāʔ", "before any section"),
    ("[matrix]\nslot x D", "no slots"),
    ("[recipe x]\nfly V", "unknown op"),
    ("[recipe x]\nmerge V", "takes 2"),
    ("[recipe x]\nslot s D shiny", "unknown slot flag"),
    ("[recipe x]\n[recipe x]", "duplicate"),
    ("[bogus header]", "bad section"),
])
def test_recipe_errors(text, message):
    with pytest.raises(RecipeError, match=message):
        parse_recipes(text)


def test_recipe_with_unknown_item():
    with pytest.raises(RecipeError, match="unknown item"):
        load_fragment(recipe_text="[matrix]\n[recipe x]\nselect V nosuchverb\n")


def test_start_category(fragment):
    assert fragment.start == "T"


def test_mood_must_fit_clause_type(fragment):
    fillers = {"subject": "pro-2MS", "verb": "tiftaḥ", "object": "al-bāb"}
    assert "tiftaḥ is imperative" in well_typed(fragment, "decl-neg", fillers)
    assert "hāt is imperative" in well_typed(
        fragment, "interrogative", {"wh": "ʔayš", "subject": "ʕali", "verb": "hāt"})
