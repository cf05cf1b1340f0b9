import json

import pytest

from qulk.engine import DerivationTrace, Leaf, Verdict, subtrees
from qulk.grammar import derive_clause
from qulk.render import STYLES, RenderError, head_text, render_tree

from golden_util import assert_golden

FOUR_A = dict(subject="ʕali", verb="jāʔ")


@pytest.fixture(scope="module")
def four_a(fragment):
    return derive_clause(fragment, "decl-affirm", FOUR_A)


def test_bracketed_4a(four_a):
    text = render_tree(four_a, "bracketed")
    assert text.startswith("[TP -k qul+v+T [vP ⟨-k⟩")
    assert "[TopP ʕali Top [TP ⟨ʕali⟩ jāʔ+v+T" in text
    assert_golden("4a.bracketed", text + "\n")


@pytest.mark.parametrize("style", ["ascii", "dot", "structured"])
def test_other_styles_4a(four_a, style):
    assert_golden(f"4a.{style}", render_tree(four_a, style) + "\n")


def test_rendering_is_deterministic(four_a):
    for style in STYLES:
        assert render_tree(four_a, style) == render_tree(four_a, style)


def test_single_leaf(lexicon):
    leaf = Leaf(lexicon["ʕali"], 1)
    assert render_tree(leaf, "ascii") == "ʕali"
    assert render_tree(leaf, "bracketed") == "ʕali"
    assert json.loads(render_tree(leaf, "structured"))["head"] == "ʕali"


def test_dot_has_one_node_per_tree_node(four_a):
    dot = render_tree(four_a, "dot")
    n_nodes = sum(1 for _ in subtrees(four_a.result))
    node_lines = [l for l in dot.splitlines() if "[label=" in l]
    edge_lines = [l for l in dot.splitlines() if "->" in l]
    assert len(node_lines) == n_nodes
    assert len(edge_lines) == n_nodes - 1
    assert dot.startswith("digraph derivation {") and dot.endswith("}")


def test_unknown_style(four_a):
    with pytest.raises(RenderError, match="unknown style"):
        render_tree(four_a, "svg")


def test_crashed_trace_without_tree():
    with pytest.raises(RenderError):
        render_tree(DerivationTrace([], None, Verdict(False, ("empty",))))


def test_head_text_null_heads(lexicon):
    assert head_text(Leaf(lexicon["Top"], 1)) == "Top"
    amalgam = Leaf(lexicon["T"], 3, incorporated=(Leaf(lexicon["qul"], 1), Leaf(lexicon["v"], 2)))
    assert head_text(amalgam) == "qul+v+T"
