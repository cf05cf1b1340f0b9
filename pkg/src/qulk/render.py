"""Tree renderings: labeled brackets, ASCII art, Graphviz DOT and JSON.

Projections are labeled by the category of their head: maximal projections
as ``XP``, intermediate ones as ``X'``.  A head amalgam prints lowest head
first (``qul+v+T``); null heads print their id; silent copies are wrapped in
angle brackets.
"""
from __future__ import annotations

import json
from typing import Any

from .engine import DerivationTrace, Leaf, Node, SyntacticObject, label

STYLES = ("bracketed", "ascii", "dot", "structured")


class RenderError(ValueError):
    pass


def head_text(leaf: Leaf) -> str:
    parts = [l.item.phon or l.item.id for l in leaf.incorporated + (leaf,)]
    return "+".join(parts)


def _silent(text: str, silent: bool) -> str:
    return f"⟨{text}⟩" if silent else text


def _node_label(node: Node, maximal: bool) -> str:
    cat = label(node).category
    return f"{cat}P" if maximal else f"{cat}'"


def _is_maximal(node: Node, parent: Node | None) -> bool:
    return parent is None or parent.head is not node


def _flat_children(node: Node) -> list[SyntacticObject]:
    """Specifiers, head and complement of a maximal projection, in order."""
    out: list[SyntacticObject] = []
    while isinstance(node, Node):
        if node.head_left:
            out += [node.left, node.right]
            return out
        out.append(node.left)
        node = node.right
    out.append(node)
    return out


def _bracketed(so: SyntacticObject, silent: bool = False) -> str:
    silent = silent or so.silent
    if isinstance(so, Leaf):
        return _silent(head_text(so), silent)
    inner = " ".join(_bracketed(c, silent) for c in _flat_children(so))
    return _silent(f"[{_node_label(so, True)} {inner}]", so.silent)


def _ascii(so: SyntacticObject) -> list[str]:
    lines: list[str] = []

    def text(node, parent, silent):
        if isinstance(node, Leaf):
            return _silent(head_text(node), silent)
        return _silent(_node_label(node, _is_maximal(node, parent)), node.silent)

    def walk(node, parent, prefix, last, silent):
        silent = silent or node.silent
        joint = "" if parent is None else ("└── " if last else "├── ")
        lines.append(prefix + joint + text(node, parent, silent))
        if isinstance(node, Node):
            ext = "" if parent is None else ("    " if last else "│   ")
            walk(node.left, node, prefix + ext, False, silent)
            walk(node.right, node, prefix + ext, True, silent)

    walk(so, None, "", True, False)
    return lines


def _dot(so: SyntacticObject) -> str:
    lines = ["digraph derivation {", "  node [shape=plaintext];"]
    counter = [0]

    def walk(node, parent, silent) -> str:
        name = f"n{counter[0]}"
        counter[0] += 1
        silent = silent or node.silent
        if isinstance(node, Leaf):
            text = head_text(node)
        else:
            text = _node_label(node, _is_maximal(node, parent))
        attrs = [f"label={json.dumps(_silent(text, silent), ensure_ascii=False)}"]
        if silent:
            attrs.append("fontcolor=gray")
        lines.append(f"  {name} [{', '.join(attrs)}];")
        if isinstance(node, Node):
            for child in (node.left, node.right):
                lines.append(f"  {name} -> {walk(child, node, silent)};")
        return name

    walk(so, None, False)
    lines.append("}")
    return "\n".join(lines)


def structured(so: SyntacticObject, parent: Node | None = None) -> dict[str, Any]:
    if isinstance(so, Leaf):
        return {
            "head": head_text(so),
            "items": [l.id for l in so.incorporated + (so,)],
            "category": so.category,
            "silent": so.silent,
        }
    return {
        "label": _node_label(so, _is_maximal(so, parent)),
        "silent": so.silent,
        "children": [structured(so.left, so), structured(so.right, so)],
    }


def render_tree(trace: DerivationTrace | SyntacticObject, style: str = "bracketed") -> str:
    so = trace.result if isinstance(trace, DerivationTrace) else trace
    if so is None:
        raise RenderError("nothing to render: the derivation produced no tree")
    if style == "bracketed":
        return _bracketed(so)
    if style == "ascii":
        return "\n".join(_ascii(so))
    if style == "dot":
        return _dot(so)
    if style == "structured":
        return json.dumps(structured(so), ensure_ascii=False, indent=2)
    raise RenderError(f"unknown style {style!r}; choose from {', '.join(STYLES)}")


__all__ = ["RenderError", "STYLES", "head_text", "render_tree", "structured"]
