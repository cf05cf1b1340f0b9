import pytest

from qulk.corpus import (
    AlignmentError,
    CorpusError,
    CorpusRecord,
    StructuralAssertion,
    dump_corpus,
    load_corpus,
    run_corpus,
    run_record,
    shipped_corpus,
)

RECORD = """\
id: 4a
surface: qul-k ʕali jāʔ
morphemes: qul-k | ʕali | jāʔ
gloss: say-1.SG | Ali | come.PST.3.MS
translation: I said that Ali came
clause_type: decl-affirm
slots: subject=ʕali verb=jāʔ
assert: fused(qul, -k, "qul-k")
"""


@pytest.fixture(scope="module")
def records():
    return shipped_corpus()


def test_shipped_corpus_ids(records):
    assert [r.id for r in records] == ["4a", "4b", "neg-decl", "9", "11a", "11b", "14a", "14b", "16", "15"]


def test_load_dump_identity(records):
    assert load_corpus(dump_corpus(records)) == records
    assert dump_corpus(load_corpus(RECORD)) == RECORD


def test_empty_file():
    assert load_corpus("") == []
    assert load_corpus("# only a comment\n\n") == []
    assert dump_corpus([]) == ""


def test_misaligned_tiers():
    bad = RECORD.replace("gloss: say-1.SG | Ali | come.PST.3.MS", "gloss: say-1.SG | Ali")
    with pytest.raises(AlignmentError, match="record 4a"):
        load_corpus(bad)


def test_misaligned_morpheme_count():
    bad = RECORD.replace("say-1.SG", "say")
    with pytest.raises(AlignmentError, match="column 1"):
        load_corpus(bad)


def test_surface_must_match_morphemes():
    with pytest.raises(AlignmentError, match="surface"):
        load_corpus(RECORD.replace("surface: qul-k ʕali jāʔ", "surface: qulk ʕali jāʔ"))


@pytest.mark.parametrize("edit, message", [
    (("clause_type: decl-affirm\n", ""), "missing clause_type"),
    (("translation:", "colour:"), "unknown key"),
    (("slots: subject=ʕali verb=jāʔ", "slots: subject"), "bad slot filler"),
    (('assert: fused(qul, -k, "qul-k")', "assert: fused(qul)"), "takes 3"),
    (('assert: fused(qul, -k, "qul-k")', "assert: nonsense"), "bad assertion"),
    (("id: 4a\n", "id: 4a\nid: 4b\n"), "duplicate key"),
    (("surface:", "surface"), "expected 'key: value'"),
])
def test_malformed_records(edit, message):
    with pytest.raises(CorpusError, match=message):
        load_corpus(RECORD.replace(*edit))


def test_duplicate_record_id():
    with pytest.raises(CorpusError, match="duplicate id"):
        load_corpus(RECORD + "\n" + RECORD)


def test_assertion_syntax():
    a = StructuralAssertion.parse('fused(qul, -k, "qul-k")')
    assert a.kind == "fused" and a.args == ("qul", "-k", "qul-k")
    assert str(a) == 'fused(qul, -k, "qul-k")'
    with pytest.raises(ValueError):
        StructuralAssertion("occupies", ("wayn", "ForceP"))
    with pytest.raises(ValueError):
        StructuralAssertion("head_of", ("ʔinna", "Top"))
    with pytest.raises(ValueError):
        StructuralAssertion("precedes", ("a", "b"))


def _check(derive, text, clause, **fillers):
    return StructuralAssertion.parse(text).check(derive(clause, **fillers))


def test_assertions_against_traces(derive):
    nine = dict(subject="ʕali", verb="jāʔ", adverb="ʔams", addressee="lak")
    assert _check(derive, "head_of(ʔinna, TopP)", "decl-emphatic", **nine)[0]
    assert not _check(derive, "head_of(ʔinna, TopP)", "decl-affirm", subject="ʕali", verb="jāʔ")[0]
    wh = dict(wh="wayn", subject="ʕali", verb="wali")
    assert _check(derive, "occupies(wayn, Spec-ForceP)", "interrogative", **wh)[0]
    assert not _check(derive, "occupies(ʕali, Spec-ForceP)", "interrogative", **wh)[0]
    fifteen = dict(verb="tiftaḥ", object="al-bāb", addressee="lak")
    assert _check(derive, 'fused(tiftaḥ, -š, "tiftaḥ-š")', "imp-neg", **fifteen)[0]
    ok, why = _check(derive, 'fused(tiftaḥ, -š, "tiftaḥš")', "imp-neg", **fifteen)
    assert not ok and "not tiftaḥš" in why
    assert _check(derive, "silent(pro-2MS)", "imp-neg", **fifteen)[0]
    assert not _check(derive, "silent(al-bāb)", "imp-neg", **fifteen)[0]
    assert "not in the derivation" in _check(derive, "silent(pro-3MS)", "imp-neg", **fifteen)[1]


def test_run_corpus_passes(records, fragment):
    report = run_corpus(records, fragment)
    assert report.ok and report.exit_code == 0, report.render()
    assert report.render().splitlines()[-1] == "10/10 records pass"


def test_run_record_reports_failures(fragment):
    wrong = load_corpus(RECORD.replace("assert: fused(qul, -k, \"qul-k\")", "assert: occupies(ʕali, Spec-TP)"))[0]
    res = run_record(wrong, fragment)
    assert not res.ok
    assert res.checks["surface"] and not res.checks["assertions"]
    assert any("no pronounced ʕali at Spec-TP" in m for m in res.messages)


def test_run_record_bad_fillers(fragment):
    rec = CorpusRecord("x", "qul-k ʕali jāʔ", "qul-k | ʕali | jāʔ", "say-1.SG | Ali | come.PST.3.MS",
                       clause_type="decl-affirm", slots=(("verb", "jāʔ"),))
    res = run_record(rec, fragment)
    assert res.checks == {"derive": False}
    assert "must be filled" in res.messages[0]


def test_run_record_wrong_surface(fragment):
    # tiers name wali but the slots derive jāʔ
    rec = CorpusRecord("x", "qul-k ʕali wali", "qul-k | ʕali | wali", "say-1.SG | Ali | go.PST.3.MS",
                       clause_type="decl-affirm", slots=(("subject", "ʕali"), ("verb", "jāʔ")))
    res = run_record(rec, fragment)
    assert res.checks["derive"] and not res.checks["surface"] and not res.checks["gloss"]
    assert res.checks["parse"] and not res.checks["roundtrip"]


def test_empty_report(fragment):
    report = run_corpus([], fragment)
    assert report.ok and report.render().endswith("0/0 records pass")
