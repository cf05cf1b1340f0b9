"""Syntactic objects and the structure-building operations over them.

Trees are immutable.  A head's progress through its ordered feature list is
kept on the leaf (``pos``), so checking a feature rebuilds the projection
spine with an updated leaf.  Movement copies stay in the tree with the
``silent`` flag set; head movement leaves a silent leaf behind and adds the
moved head to the ``incorporated`` tuple of the attracting head.

Occurrence indices are bookkeeping only and take no part in equality, so two
trees built from different selections of the same items compare equal.
"""
from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .features import (
    CATEGORY,
    LICENSEE,
    LICENSOR,
    SELECTOR,
    AgreementResult,
    AgreeMisuse,
    Feature,
    FeatureBundle,
    LexicalItem,
    Lexicon,
    can_select,
    match_probe,
)


class DerivationError(Exception):
    """An operation was applied where its preconditions do not hold."""


class SelectError(DerivationError):
    pass


class MergeError(DerivationError):
    pass


class MoveError(DerivationError):
    pass


class AgreeError(DerivationError):
    pass


class HeadMoveError(DerivationError):
    pass


class LocalityError(HeadMoveError):
    """Head movement skipping an intervening head."""


@dataclass(frozen=True)
class Leaf:
    item: LexicalItem
    occ: int = field(default=0, compare=False)
    pos: int = 0
    skipped: tuple[int, ...] = ()
    phi: tuple[tuple[str, str, bool], ...] = ()  # (attr, value, is_default) from Agree
    hm_pending: bool = False
    incorporated: tuple["Leaf", ...] = ()
    silent: bool = False

    def __hash__(self):
        return self._hash

    @cached_property
    def _hash(self):
        return hash((self.item.id, self.pos, self.skipped, self.phi,
                     self.hm_pending, self.incorporated, self.silent))

    @property
    def id(self) -> str:
        return self.item.id

    @property
    def bundle(self) -> FeatureBundle:
        return self.item.bundle

    @property
    def category(self) -> str | None:
        return self.item.bundle.category

    def current_bundle(self) -> FeatureBundle:
        return self.bundle.valued_with({a: v for a, v, _ in self.phi})

    @property
    def unvalued(self) -> tuple[str, ...]:
        done = {a for a, _, _ in self.phi}
        return tuple(a for a in self.bundle.probes if a not in done)

    @property
    def valued_phi(self) -> dict[str, str]:
        return {a: v for a, v, _ in self.phi}

    def options(self) -> list[tuple[int, Feature]]:
        """Sequential features reachable now, skipping optional selectors."""
        seq = self.bundle.sequence
        out = []
        for i in range(self.pos, len(seq)):
            out.append((i, seq[i]))
            if not (seq[i].kind == SELECTOR and seq[i].optional):
                break
        return out

    def remaining(self) -> tuple[Feature, ...]:
        return self.bundle.sequence[self.pos:]

    def advance(self, index: int) -> "Leaf":
        seq = self.bundle.sequence
        skipped = self.skipped + tuple(range(self.pos, index))
        assert all(seq[i].kind == SELECTOR and seq[i].optional for i in range(self.pos, index))
        return replace(self, pos=index + 1, skipped=skipped)

    def checked(self) -> set[tuple[int, str]]:
        seq = self.bundle.sequence
        out = {(i, str(seq[i])) for i in range(self.pos) if i not in self.skipped}
        out |= {(-1, f"phi:{a}") for a, _, _ in self.phi}
        return out

    @property
    def is_exposed(self) -> bool:
        """True when the category is the next feature (ready to be selected)."""
        return any(f.kind == CATEGORY for _, f in self.options())


@dataclass(frozen=True)
class Node:
    left: "SyntacticObject"
    right: "SyntacticObject"
    head_left: bool
    checked: str = ""
    silent: bool = False

    def __hash__(self):
        return self._hash

    @cached_property
    def _hash(self):
        return hash((self.left, self.right, self.head_left, self.checked, self.silent))

    @property
    def head(self) -> "SyntacticObject":
        return self.left if self.head_left else self.right

    @property
    def nonhead(self) -> "SyntacticObject":
        return self.right if self.head_left else self.left

    @cached_property
    def label(self) -> Leaf:
        so = self
        while isinstance(so, Node):
            so = so.head
        return so


SyntacticObject = Union[Leaf, Node]


def label(so: SyntacticObject) -> Leaf:
    return so if isinstance(so, Leaf) else so.label


def silence(so: SyntacticObject) -> SyntacticObject:
    return replace(so, silent=True)


def with_label(so: SyntacticObject, leaf: Leaf) -> SyntacticObject:
    """Replace the head leaf of ``so`` (following the projection spine)."""
    if isinstance(so, Leaf):
        return leaf
    if so.head_left:
        return replace(so, left=with_label(so.left, leaf))
    return replace(so, right=with_label(so.right, leaf))


def subtrees(so: SyntacticObject, path: tuple[int, ...] = ()) -> Iterator[tuple[tuple[int, ...], SyntacticObject]]:
    yield path, so
    if isinstance(so, Node):
        yield from subtrees(so.left, path + (0,))
        yield from subtrees(so.right, path + (1,))


def at(so: SyntacticObject, path: Sequence[int]) -> SyntacticObject:
    for step in path:
        so = so.left if step == 0 else so.right
    return so


def replace_at(so: SyntacticObject, path: Sequence[int], new: SyntacticObject) -> SyntacticObject:
    if not path:
        return new
    if path[0] == 0:
        return replace(so, left=replace_at(so.left, path[1:], new))
    return replace(so, right=replace_at(so.right, path[1:], new))


def leaves(so: SyntacticObject) -> Iterator[Leaf]:
    if isinstance(so, Leaf):
        yield so
    else:
        yield from leaves(so.left)
        yield from leaves(so.right)


def pronounced_leaves(so: SyntacticObject) -> Iterator[Leaf]:
    """Leaves outside silent copies, with incorporated heads expanded
    (lowest first, attracting head last).  Each lexical occurrence of the
    derivation is produced exactly once."""
    if so.silent:
        return
    if isinstance(so, Leaf):
        yield from so.incorporated
        yield so
    else:
        yield from pronounced_leaves(so.left)
        yield from pronounced_leaves(so.right)


def item_counts(so: SyntacticObject) -> Counter:
    return Counter(leaf.id for leaf in pronounced_leaves(so))


def complement(so: SyntacticObject) -> SyntacticObject | None:
    """Sister of the head leaf (first-merged argument), if any."""
    node = None
    while isinstance(so, Node):
        node, so = so, so.head
    return None if node is None else node.nonhead


def _is_maximal_arg(so: SyntacticObject) -> bool:
    # a phrase whose category has been checked by selection
    lab = label(so)
    idx = lab.bundle.category_index
    return idx is not None and lab.pos > idx


# -- External Merge ---------------------------------------------------------

def selector_for(head: SyntacticObject, arg: SyntacticObject) -> int | None:
    """Index of the head's reachable selector that accepts ``arg``."""
    h, a = label(head), label(arg)
    if h.hm_pending or a.hm_pending or a.unvalued or not a.is_exposed:
        return None
    for i, f in h.options():
        if f.kind == SELECTOR and can_select(f, a.bundle):
            return i
    return None


def merge_directed(head: SyntacticObject, arg: SyntacticObject) -> SyntacticObject:
    idx = selector_for(head, arg)
    if idx is None:
        raise MergeError(f"{label(head).id} does not select {label(arg).id}")
    h, a = label(head), label(arg)
    sel = h.bundle.sequence[idx]
    new_h = h.advance(idx)
    if sel.strong:
        new_h = replace(new_h, hm_pending=True)
    cat_idx = next(i for i, f in a.options() if f.kind == CATEGORY)
    new_a = a.advance(cat_idx)
    head2, arg2 = with_label(head, new_h), with_label(arg, new_a)
    if isinstance(head, Leaf):  # first merge: complement
        return Node(head2, arg2, head_left=True, checked=str(sel))
    return Node(arg2, head2, head_left=False, checked=str(sel))


def external_merge(a: SyntacticObject, b: SyntacticObject) -> SyntacticObject:
    if selector_for(a, b) is not None:
        return merge_directed(a, b)
    if selector_for(b, a) is not None:
        return merge_directed(b, a)
    raise MergeError(f"neither {label(a).id} nor {label(b).id} selects the other")


# -- Internal Merge ---------------------------------------------------------

def _pending_licensor(h: Leaf) -> tuple[int, Feature] | None:
    for i, f in h.options():
        if f.kind == LICENSOR:
            return i, f
    return None


def _bfs(so: SyntacticObject, include_silent: bool) -> Iterator[tuple[int, tuple[int, ...], SyntacticObject]]:
    queue = deque([(0, (), so)])
    while queue:
        depth, path, node = queue.popleft()
        if node.silent and not include_silent:
            continue
        yield depth, path, node
        if isinstance(node, Node):
            queue.append((depth + 1, path + (0,), node.left))
            queue.append((depth + 1, path + (1,), node.right))


def movement_candidates(root: SyntacticObject, trigger: str) -> list[tuple[int, tuple[int, ...]]]:
    """(depth, path) of every pronounced phrase ``trigger`` may attract.

    ``wh`` attracts a phrase whose next feature is the matching licensee;
    ``epp`` and ``top`` attract a nominal (D) phrase with no pending
    licensee.
    """
    out = []
    for depth, path, sub in _bfs(root, include_silent=False):
        if not path or not _is_maximal_arg(sub):
            continue
        lab = label(sub)
        opts = lab.options()
        nxt = opts[0][1] if opts else None
        if trigger in ("epp", "top"):
            ok = lab.category == "D" and not any(f.kind == LICENSEE for f in lab.remaining())
        else:
            ok = nxt is not None and nxt.kind == LICENSEE and nxt.attribute == trigger
        if ok and not any(p == path[:len(p)] for _, p in out):
            out.append((depth, path))
    return out


def internal_merge(root: SyntacticObject, target: int | None = None) -> SyntacticObject:
    h = label(root)
    if h.hm_pending:
        raise MoveError(f"{h.id} must complete head movement first")
    lic = _pending_licensor(h)
    if lic is None:
        raise MoveError(f"{h.id} bears no unchecked licensor")
    idx, feat = lic
    if target is not None and not any(l.occ == target for l in leaves(root)):
        raise MoveError(f"occurrence {target} is not dominated by the root")
    cands = movement_candidates(root, feat.attribute)
    if not cands:
        raise MoveError(f"no goal for +{feat.attribute} in the domain of {h.id}")
    best = min(d for d, _ in cands)
    closest = [p for d, p in cands if d == best]
    if len(closest) > 1:
        raise MoveError(f"+{feat.attribute}: no unique closest goal")
    path = closest[0]
    if target is not None and label(at(root, path)).occ != target:
        raise MoveError(f"occurrence {target} is not the closest goal for +{feat.attribute}")
    moved = at(root, path)
    checked = [str(feat)]
    m = label(moved)
    if feat.attribute not in ("epp", "top"):
        lee = m.options()[0][0]
        moved = with_label(moved, m.advance(lee))
        checked.append(str(m.bundle.sequence[lee]))
    body = replace_at(root, path, silence(moved))
    body = with_label(body, h.advance(idx))
    return Node(moved, body, head_left=False, checked=" ".join(checked))


# -- Agree ------------------------------------------------------------------

def agree_candidates(probe_root: SyntacticObject) -> list[tuple[int, tuple[int, ...]]]:
    comp = complement(probe_root)
    if comp is None:
        return []
    out = []
    for depth, path, sub in _bfs(comp, include_silent=True):
        if label(sub).bundle.phi and _is_maximal_arg(sub) \
                and not any(p == path[:len(p)] for _, p in out):
            out.append((depth, path))
    return out


def agree_goal(root: SyntacticObject) -> SyntacticObject:
    cands = agree_candidates(root)
    if not cands:
        raise AgreeError(f"{label(root).id} c-commands no phi-bearing goal")
    best = min(d for d, _ in cands)
    closest = [p for d, p in cands if d == best]
    if len(closest) > 1:
        raise AgreeError("no unique closest goal")
    return at(complement(root), closest[0])


def agree(root: SyntacticObject, probe: int | None = None) -> tuple[SyntacticObject, AgreementResult, Leaf]:
    h = label(root)
    if probe is not None and h.occ != probe:
        raise AgreeError(f"probe {probe} is not the root's head")
    if h.hm_pending:
        raise AgreeError(f"{h.id} must complete head movement first")
    try:
        goal = agree_goal(root)
        result = match_probe(h.current_bundle(), label(goal).bundle)
    except AgreeMisuse as exc:
        raise AgreeError(str(exc)) from None
    if result is None:
        raise AgreeError(f"{label(goal).id} cannot value {h.id}")
    phi = h.phi + tuple((a, v, False) for a, v in result.values.items()) + \
        tuple((a, v, True) for a, v in result.defaults.items())
    order = {a: i for i, a in enumerate(h.bundle.probes)}
    phi = tuple(sorted(phi, key=lambda t: order[t[0]]))
    return with_label(root, replace(h, phi=phi)), result, label(goal)


# -- Head movement ----------------------------------------------------------

def head_move(root: SyntacticObject, lower: int | None = None, upper: int | None = None) -> SyntacticObject:
    h = label(root)
    if upper is not None and h.occ != upper:
        if any(l.occ == upper for l in leaves(root)):
            raise HeadMoveError(f"head {upper} does not project the root")
        raise HeadMoveError(f"occurrence {upper} is not in the tree")
    comp = complement(root)
    if comp is None:
        raise HeadMoveError(f"{h.id} has no complement")
    low = label(comp)
    if lower is not None and low.occ != lower:
        if any(l.occ == lower for l in leaves(comp)):
            raise LocalityError(f"moving {lower} to {h.id} skips the head {low.id}")
        raise HeadMoveError(f"occurrence {lower} is not dominated by {h.id}")
    if not h.hm_pending:
        raise HeadMoveError(f"{h.id} has no head-movement trigger")
    if low.silent:
        raise HeadMoveError(f"{low.id} has already moved")
    amalgam = replace(h, hm_pending=False,
                      incorporated=low.incorporated + (replace(low, incorporated=()),))
    comp2 = with_label(comp, replace(low, silent=True))
    body = replace_at(root, _complement_path(root), comp2)
    return with_label(body, amalgam)


def _complement_path(so: SyntacticObject) -> tuple[int, ...]:
    path = []
    while isinstance(so, Node):
        if isinstance(so.head, Leaf):
            path.append(1 if so.head_left else 0)
            return tuple(path)
        path.append(0 if so.head_left else 1)
        so = so.head
    raise HeadMoveError("no complement")


# -- Convergence ------------------------------------------------------------

@dataclass(frozen=True)
class Verdict:
    converged: bool
    reasons: tuple[str, ...] = ()

    def __str__(self):
        return "converged" if self.converged else "crashed(" + "; ".join(self.reasons) + ")"


def _leaf_problems(leaf: Leaf, is_root_head: bool) -> list[str]:
    out = []
    for f in leaf.remaining():
        if f.kind == SELECTOR and f.optional:
            continue
        if f.kind == CATEGORY and is_root_head:
            continue
        out.append(f"{leaf.id}: unchecked {f}")
    if leaf.hm_pending:
        out.append(f"{leaf.id}: head movement pending")
    for a in leaf.unvalued:
        out.append(f"{leaf.id}: unvalued {a}")
    return out


def _concord_problems(leaf: Leaf) -> list[str]:
    group = list(leaf.incorporated) + [leaf]
    valued = [l for l in group if l.phi]
    inflected = [l for l in group if l.bundle.agr]
    out = []
    for t in valued:
        tv = {a: (v, d) for a, v, d in t.phi}
        for v in inflected:
            for a, val in v.bundle.agr.items():
                if a in tv and tv[a][0] != val and not tv[a][1]:
                    out.append(f"{v.id}: {a}={val} clashes with {t.id} {a}={tv[a][0]}")
    return out


def _clause_typing_problems(so: SyntacticObject) -> list[str]:
    """A verb marked for mood cannot sit in a clause typed otherwise by the
    nearest clause-typing head above it (no imperative verb under
    interrogative Force or declarative mā)."""
    out = []
    typer = None
    node = so
    while node is not None:
        head = label(node)
        if head.category == "V":
            mood = head.bundle.clause_type
            ctype = typer.bundle.clause_type if typer is not None else None
            if mood and ctype and mood != ctype:
                out.append(f"{mood} {head.id} in a clause typed {ctype} by {typer.id}")
            typer = None
        elif head.bundle.clause_type:
            typer = head
        node = complement(node)
    return out


def check_convergence(so: SyntacticObject, start: str | None = None) -> Verdict:
    """Converged iff no head keeps unchecked or unvalued features.  With
    ``start`` the root must also project that category."""
    root_head = label(so)
    reasons: list[str] = _clause_typing_problems(so)
    if start is not None and root_head.category != start:
        reasons.append(f"root is {root_head.category}P, not {start}P")

    def walk(node):
        if node.silent:
            return
        if isinstance(node, Node):
            walk(node.left)
            walk(node.right)
            return
        for inc in node.incorporated:
            reasons.extend(_leaf_problems(inc, False))
        reasons.extend(_leaf_problems(node, node is root_head))
        reasons.extend(_concord_problems(node))

    walk(so)
    return Verdict(not reasons, tuple(reasons))


def is_dead(so: SyntacticObject) -> bool:
    """True when no continuation can make ``so`` converge: some non-root
    head is left with features that only it could have discharged."""
    root_head = label(so)

    def bad(leaf: Leaf, top: bool) -> bool:
        if top:
            return False
        if leaf.hm_pending or leaf.unvalued:
            return True
        return any(f.kind in (SELECTOR, LICENSOR, CATEGORY) and not (f.kind == SELECTOR and f.optional)
                   for f in leaf.remaining())

    def walk(node) -> bool:
        if node.silent:
            return False
        if isinstance(node, Node):
            return walk(node.left) or walk(node.right)
        if any(bad(i, False) for i in node.incorporated):
            return True
        return bad(node, node is root_head) or bool(_concord_problems(node))

    return walk(so)


# -- Workspace, steps and traces --------------------------------------------

SELECT, EXTERNAL_MERGE, INTERNAL_MERGE, AGREE, HEAD_MOVE = (
    "Select", "ExternalMerge", "InternalMerge", "Agree", "HeadMove")
OPS = (SELECT, EXTERNAL_MERGE, INTERNAL_MERGE, AGREE, HEAD_MOVE)


@dataclass(frozen=True)
class DerivationStep:
    op: str
    operands: tuple
    rationale: str = ""

    def __str__(self):
        return f"{self.op}\t{' '.join(map(str, self.operands))}\t{self.rationale or '-'}"


@dataclass(frozen=True)
class Workspace:
    roots: tuple[SyntacticObject, ...] = ()
    numeration: tuple[tuple[str, int], ...] = ()
    next_occ: int = 1

    @classmethod
    def start(cls, numeration: Mapping[str, int]) -> "Workspace":
        return cls((), tuple(sorted(numeration.items())), 1)

    def remaining(self) -> dict[str, int]:
        return dict(self.numeration)

    def root_of(self, occ: int) -> int:
        for i, r in enumerate(self.roots):
            if any(l.occ == occ for l in leaves(r)):
                return i
        raise DerivationError(f"occurrence {occ} is not in the workspace")

    def root_headed_by(self, occ: int) -> int:
        i = self.root_of(occ)
        if label(self.roots[i]).occ != occ:
            raise DerivationError(f"occurrence {occ} does not head a workspace root")
        return i

    def with_roots(self, roots) -> "Workspace":
        return replace(self, roots=tuple(roots))


def select(ws: Workspace, item_id: str, lexicon: Lexicon) -> tuple[Workspace, int]:
    counts = ws.remaining()
    if counts.get(item_id, 0) < 1:
        raise SelectError(f"{item_id!r} is absent from or exhausted in the numeration")
    counts[item_id] -= 1
    occ = ws.next_occ
    leaf = Leaf(lexicon[item_id], occ)
    return Workspace(ws.roots + (leaf,), tuple(sorted(counts.items())), occ + 1), occ


def apply_step(ws: Workspace, step: DerivationStep, lexicon: Lexicon) -> Workspace:
    """Replay one recorded step."""
    if step.op == SELECT:
        item_id, occ = step.operands
        ws2, got = select(ws, item_id, lexicon)
        if got != occ:
            raise DerivationError(f"select produced occurrence {got}, trace says {occ}")
        return ws2
    if step.op == EXTERNAL_MERGE:
        h, a = step.operands
        i, j = ws.root_headed_by(h), ws.root_headed_by(a)
        new = merge_directed(ws.roots[i], ws.roots[j])
        return ws.with_roots([r for k, r in enumerate(ws.roots) if k not in (i, j)] + [new])
    i = ws.root_headed_by(step.operands[0])
    roots = list(ws.roots)
    if step.op == INTERNAL_MERGE:
        roots[i] = internal_merge(roots[i], step.operands[1])
    elif step.op == AGREE:
        roots[i] = agree(roots[i], step.operands[0])[0]
    elif step.op == HEAD_MOVE:
        upper, lower = step.operands
        roots[i] = head_move(roots[i], lower, upper)
    else:
        raise DerivationError(f"unknown op {step.op}")
    return ws.with_roots(roots)


def replay(steps: Iterable[DerivationStep], numeration: Mapping[str, int], lexicon: Lexicon) -> Workspace:
    ws = Workspace.start(numeration)
    for step in steps:
        ws = apply_step(ws, step, lexicon)
    return ws


@dataclass
class DerivationTrace:
    steps: list[DerivationStep]
    result: SyntacticObject | None
    verdict: Verdict
    numeration: dict[str, int] = field(default_factory=dict)

    @property
    def converged(self) -> bool:
        return self.verdict.converged

    def serialize(self) -> str:
        lines = [f"{i}\t{s}" for i, s in enumerate(self.steps, 1)]
        lines.append(f"verdict\t{self.verdict}")
        return "\n".join(lines) + "\n"


class Recorder:
    """Applies operations to a workspace and records the steps taken."""

    def __init__(self, numeration: Mapping[str, int], lexicon: Lexicon, start: str | None = None):
        self.lexicon = lexicon
        self.start = start
        self.numeration = dict(numeration)
        self.ws = Workspace.start(numeration)
        self.steps: list[DerivationStep] = []

    def select(self, item_id: str) -> int:
        self.ws, occ = select(self.ws, item_id, self.lexicon)
        self.steps.append(DerivationStep(SELECT, (item_id, occ)))
        return occ

    def _root(self, occ: int) -> int:
        return self.ws.root_headed_by(occ)

    def _put(self, drop: Sequence[int], new: SyntacticObject) -> None:
        self.ws = self.ws.with_roots([r for k, r in enumerate(self.ws.roots) if k not in drop] + [new])

    def merge(self, head_occ: int, arg_occ: int) -> None:
        i, j = self.ws.root_of(head_occ), self.ws.root_of(arg_occ)
        if i == j:
            raise MergeError("cannot externally merge a root with itself")
        hi, ai = label(self.ws.roots[i]), label(self.ws.roots[j])
        if hi.occ != head_occ or ai.occ != arg_occ:
            raise MergeError("merge operands must head workspace roots")
        new = merge_directed(self.ws.roots[i], self.ws.roots[j])
        self._put((i, j), new)
        self.steps.append(DerivationStep(EXTERNAL_MERGE, (head_occ, arg_occ), f"{new.checked} {ai.category}"))

    def move(self, head_occ: int, target: int | None = None) -> None:
        i = self._root(head_occ)
        new = internal_merge(self.ws.roots[i], target)
        tocc = label(new.left).occ
        self._put((i,), new)
        self.steps.append(DerivationStep(INTERNAL_MERGE, (head_occ, tocc), new.checked))

    def agree(self, probe_occ: int) -> None:
        i = self._root(probe_occ)
        new, result, goal = agree(self.ws.roots[i], probe_occ)
        self._put((i,), new)
        vals = [f"{a}={v}" for a, v in result.values.items()]
        vals += [f"{a}={v}(default)" for a, v in result.defaults.items()]
        self.steps.append(DerivationStep(AGREE, (probe_occ, goal.occ), "phi:" + ",".join(vals)))

    def head_move(self, upper_occ: int, lower_occ: int | None = None) -> None:
        i = self._root(upper_occ)
        root = self.ws.roots[i]
        comp = complement(root)
        low = label(comp).occ if comp is not None and lower_occ is None else lower_occ
        new = head_move(root, low, upper_occ)
        sel = str(label(root).bundle.sequence[label(root).pos - 1]) if label(root).pos else ""
        self._put((i,), new)
        self.steps.append(DerivationStep(HEAD_MOVE, (upper_occ, low), sel))

    def single_root(self) -> SyntacticObject:
        if len(self.ws.roots) != 1:
            raise DerivationError(f"workspace has {len(self.ws.roots)} roots")
        return self.ws.roots[0]

    def trace(self, error: str | None = None) -> DerivationTrace:
        if error is not None:
            result = self.ws.roots[-1] if self.ws.roots else None
            return DerivationTrace(self.steps, result, Verdict(False, (error,)), self.numeration)
        if any(n for _, n in self.ws.numeration):
            left = {k: n for k, n in self.ws.numeration if n}
            return DerivationTrace(self.steps, self.ws.roots[-1] if self.ws.roots else None,
                                   Verdict(False, (f"numeration not exhausted: {left}",)), self.numeration)
        if len(self.ws.roots) != 1:
            return DerivationTrace(self.steps, self.ws.roots[-1] if self.ws.roots else None,
                                   Verdict(False, (f"{len(self.ws.roots)} roots left in the workspace",)),
                                   self.numeration)
        so = self.ws.roots[0]
        return DerivationTrace(self.steps, so, check_convergence(so, self.start), self.numeration)


@dataclass(frozen=True)
class StepTemplate:
    """A recipe step over named heads.

    ``select NAME ITEM``, ``merge HEAD ARG``, ``move HEAD``, ``agree HEAD``,
    ``headmove LOWER UPPER``.
    """

    op: str
    args: tuple[str, ...]

    def __str__(self):
        return " ".join((self.op,) + self.args)


def derive(numeration: Mapping[str, int], recipe: Sequence[StepTemplate], lexicon: Lexicon,
           start: str | None = None) -> DerivationTrace:
    rec = Recorder(numeration, lexicon, start)
    names: dict[str, int] = {}
    try:
        for t in recipe:
            if t.op == "select":
                name, item_id = t.args
                names[name] = rec.select(item_id)
            elif t.op == "merge":
                rec.merge(names[t.args[0]], names[t.args[1]])
            elif t.op == "move":
                rec.move(names[t.args[0]])
            elif t.op == "agree":
                rec.agree(names[t.args[0]])
            elif t.op == "headmove":
                rec.head_move(names[t.args[1]], names[t.args[0]])
            else:
                raise DerivationError(f"unknown recipe op {t.op!r}")
    except (DerivationError, KeyError) as exc:
        return rec.trace(error=f"step {len(rec.steps) + 1} ({t}): {exc}")
    return rec.trace()
