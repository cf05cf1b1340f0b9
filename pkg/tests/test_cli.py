import io

import pytest

from qulk.cli import main

from golden_util import assert_golden


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_derive_4a():
    code, out = run("derive", "decl-affirm", "--slot", "subject=ʕali", "--slot", "verb=jāʔ", "--tree", "bracketed")
    assert code == 0
    assert out.splitlines()[0] == "qul-k ʕali jāʔ"
    assert_golden("cli_derive_4a.txt", out)


def test_derive_with_trace():
    code, out = run("derive", "imp-neg", "--slot", "verb=tiftaḥ", "--slot", "object=al-bāb",
                    "--slot", "addressee=lak", "--trace")
    assert code == 0
    assert_golden("cli_derive_15_trace.txt", out)


def test_derive_fused_render():
    code, out = run("derive", "decl-affirm", "--slot", "subject=ʕali", "--slot", "verb=jāʔ", "--fused-render")
    assert code == 0
    assert out.splitlines()[0] == "qulk ʕali jāʔ"


def test_parse_11a():
    code, out = run("parse", "qul-k wayn wali ʕali")
    assert code == 0
    assert out.startswith("1 parse(s)\n\n#1 interrogative\n")
    assert_golden("cli_parse_11a.txt", out)


def test_gloss_15():
    code, out = run("gloss", "qul-k lak lā tiftaḥ-š al-bāb")
    assert code == 0
    assert out == "qul-k\tlak\tlā\ttiftaḥ-š\tal-bāb\nsay-1SG\tto.you.MS\tNEG\topen.IMP.2MS-NEG\tthe-door\n"
    code, out = run("gloss", "--verbatim", "qul-k ʕali jāʔ")
    assert out.splitlines()[1] == "say-1.SG\tAli\tcome.PST.3.MS"


def test_gloss_deduplicates_ambiguous_parses():
    code, out = run("gloss", "qul-k ʔayš ʔištara ʕali")
    assert code == 0
    assert len(out.splitlines()) == 2


def test_corpus_run_shipped():
    code, out = run("corpus", "run")
    assert code == 0
    assert out.splitlines()[-1] == "10/10 records pass"


def test_corpus_run_failure(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("id: x\nsurface: qul-k ʕali jāʔ\nmorphemes: qul-k | ʕali | jāʔ\n"
                    "gloss: say-1.SG | Ali | come.PST.3.MS\nclause_type: decl-affirm\n"
                    "slots: subject=ʕali verb=jāʔ\nassert: occupies(ʕali, Spec-ForceP)\n", encoding="utf-8")
    code, out = run("corpus", "run", str(path))
    assert code == 1
    assert "0/1 records pass" in out


def test_corpus_run_malformed_file(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text("id: x\nsurface: a b\nmorphemes: a\ngloss: A\nclause_type: decl-affirm\n", encoding="utf-8")
    code, _ = run("corpus", "run", str(path))
    assert code == 2
    assert "surface does not match" in capsys.readouterr().err


def test_lexicon_show():
    code, out = run("lexicon", "show")
    assert code == 0
    assert len(out.splitlines()) == 30
    assert_golden("cli_lexicon.txt", out)


@pytest.mark.parametrize("argv, code, message", [
    (("parse", "qul-k xyz"), 2, "no lexical analysis"),
    (("gloss", "xyz"), 2, "no lexical analysis"),
    (("parse", "jāʔ ʕali qul-k"), 1, "no convergent derivation"),
    (("derive", "decl-affirm", "--slot", "verb=jāʔ"), 2, "must be filled"),
    (("derive", "decl-affirm", "--slot", "verb"), 2, "name=item"),
    (("derive", "decl-affirm", "--slot", "subject=ʕali", "--slot", "verb=jāʔ", "--lexicon", "/nonexistent"),
     2, "cannot read"),
    (("parse", "qul-k ʕali jāʔ", "--max-steps", "0"), 2, "positive"),
])
def test_error_exit_codes(capsys, argv, code, message):
    got, _ = run(*argv)
    assert got == code
    assert message in capsys.readouterr().err


def test_bad_arguments(capsys):
    assert run("derive", "exclamative")[0] == 2
    assert run()[0] == 2
    assert run("--help")[0] == 0


def test_custom_lexicon(tmp_path, capsys):
    path = tmp_path / "bad.lex"
    path.write_text("qul | say | V | free\nqul | say | V | free\n", encoding="utf-8")
    assert run("lexicon", "show", "--lexicon", str(path))[0] == 2
    assert "duplicate id" in capsys.readouterr().err
