from collections import Counter

import pytest

from qulk.engine import label
from qulk.grammar import build_numeration, embedded_root
from qulk.parser import (
    BoundsExceeded,
    NoParseError,
    ParseError,
    SearchBounds,
    SegmentationError,
    chart_search,
    enumerate_all,
    null_hypotheses,
    oracle_parse,
    parse,
    segment,
)
from qulk.pf import spell_out


def test_segment_clitics(lexicon):
    assert segment("qul-k", lexicon) == [(("qul", "-k"),)]
    assert segment("tiftaḥ-š", lexicon) == [(("tiftaḥ", "-š"),)]
    assert segment("qulk", lexicon) == [(("qul", "-k"),)]


def test_segment_multiword(lexicon):
    segs = segment("qul-k ʕali jāʔ", lexicon)
    assert segs == [(("qul", "-k"), ("ʕali",), ("jāʔ",))]


def test_segment_unknown_word(lexicon):
    with pytest.raises(SegmentationError, match="xyz"):
        segment("xyz", lexicon)


def test_bounds_must_be_positive():
    with pytest.raises(ValueError):
        SearchBounds(max_steps=0)
    assert SearchBounds() == SearchBounds(40, 10, 10000)


def test_enumerate_single_item(lexicon):
    result = enumerate_all({"ʕali": 1}, lexicon)
    assert [label(t).id for t in result.trees()] == ["ʕali"]
    assert result.complete


def test_enumerate_4a_numeration(fragment):
    numeration = build_numeration(fragment, "decl-affirm", {"subject": "ʕali", "verb": "jāʔ"})
    result = enumerate_all(numeration, fragment.lexicon, start=fragment.start)
    assert result.complete and result.traces
    for trace in result.traces.values():
        assert spell_out(trace).render() == "qul-k ʕali jāʔ"


def test_chart_agrees_with_oracle_on_4a(fragment):
    numeration = build_numeration(fragment, "decl-affirm", {"subject": "ʕali", "verb": "jāʔ"})
    chart = chart_search(numeration, fragment.lexicon, start=fragment.start)
    oracle = enumerate_all(numeration, fragment.lexicon, start=fragment.start)
    assert chart.trees() == oracle.trees()


def test_prohibitive_without_clitic_has_no_derivation(fragment):
    numeration = build_numeration(fragment, "imp-neg", {"verb": "tiftaḥ", "object": "al-bāb", "addressee": "lak"})
    del numeration["-š"]
    assert not enumerate_all(numeration, fragment.lexicon, start=fragment.start).traces
    assert not chart_search(numeration, fragment.lexicon, start=fragment.start).traces


def test_step_bound_marks_incomplete(fragment):
    numeration = build_numeration(fragment, "decl-affirm", {"subject": "ʕali", "verb": "jāʔ"})
    result = chart_search(numeration, fragment.lexicon, SearchBounds(max_steps=5), fragment.start)
    assert not result.complete
    assert not result.traces


def test_null_hypotheses_are_recipe_guided(fragment):
    hyps = null_hypotheses(fragment)
    base = Counter({"v": 2, "T": 2})
    assert sorted(map(sorted, (h.items() for h in hyps))) == sorted(map(sorted, (c.items() for c in [
        base,  # emphatic: ʔinna is overt
        base + Counter({"Top": 1}),
        base + Counter({"Top": 1, "pro-3MS": 1}),
        base + Counter({"Top": 1, "pro-2MS": 1}),
        base + Counter({"Force": 1}),
    ])))


def test_parse_11a_wh_at_spec_force(fragment):
    traces = parse("qul-k wayn wali ʕali", fragment)
    assert len(traces) == 1
    root = embedded_root(traces[0].result)
    assert label(root).category == "Force"
    assert label(root.left).id == "wayn"


def test_parse_15_negation_heads(fragment):
    (trace,) = parse("qul-k lak lā tiftaḥ-š al-bāb", fragment)
    top = embedded_root(trace.result)
    neg = top.right.right  # Spec,TopP then Top'
    assert label(neg).id == "lā" and label(neg).category == "Neg"
    assert label(neg.right).id == "-š" and label(neg.right).category == "NegCl"


def test_parse_fused_spelling(fragment):
    assert len(parse("qulk ʕali jāʔ", fragment)) == 1
    assert len(parse("qulk lak lā tiftaḥ-š al-bāb", fragment)) == 1


def test_bare_prohibitive_has_no_parse(fragment):
    with pytest.raises(NoParseError):
        parse("lā tiftaḥ al-bāb", fragment)
    assert oracle_parse("lā tiftaḥ al-bāb", fragment) == {}


def test_parse_error_kinds(fragment):
    with pytest.raises(SegmentationError):
        parse("qul-k xyz", fragment)
    with pytest.raises(NoParseError):
        parse("jāʔ ʕali qul-k", fragment)
    with pytest.raises(ParseError):
        parse("   ", fragment)
    assert issubclass(SegmentationError, ParseError) and issubclass(NoParseError, ParseError)


def test_numeration_bound(fragment):
    with pytest.raises(BoundsExceeded):
        parse("qul-k ʕali jāʔ", fragment, SearchBounds(max_numerations=2))


def test_wh_subject_object_ambiguity(fragment):
    traces = parse("qul-k ʔayš ʔištara ʕali", fragment)
    assert len(traces) == 2
    assert {spell_out(t).render() for t in traces} == {"qul-k ʔayš ʔištara ʕali"}


def test_parses_are_sound(fragment):
    for surface in ("qul-k ʕali jāʔ", "qul-k lak mā jāʔ-š lil-bayt", "qul-k lak hāt al-kitāb alʔān"):
        for trace in parse(surface, fragment):
            assert trace.converged
            assert spell_out(trace).render() == surface
