"""Command-line entry point.

    qulk derive decl-affirm --slot subject=ʕali --slot verb=jāʔ --tree bracketed
    qulk parse "qul-k ʕali jāʔ"
    qulk corpus run [FILE]
    qulk lexicon show
    qulk gloss "qul-k lak lā tiftaḥ-š al-bāb"

Exit codes: 0 success, 1 failure (corpus failure, crashed derivation, no
parse), 2 input error (bad arguments, unreadable files, unknown words).
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .corpus import CorpusError, load_corpus, run_corpus, shipped_corpus_text
from .features import LexiconError, dump_lexicon
from .grammar import (
    CLAUSE_TAGS,
    GrammarFragment,
    RecipeError,
    derive_clause,
    embedded_clause_type,
    load_fragment,
    well_typed,
)
from .parser import ParseError, SearchBounds, SegmentationError, parse
from .pf import PFError, emit_gloss, spell_out
from .render import STYLES, render_tree

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _fragment(args) -> GrammarFragment:
    lex = _read(args.lexicon) if args.lexicon else None
    rec = _read(args.recipes) if args.recipes else None
    try:
        return load_fragment(lex, rec)
    except (LexiconError, RecipeError, ValueError) as exc:
        raise InputError(str(exc)) from None


def _bounds(args) -> SearchBounds:
    try:
        return SearchBounds(args.max_steps, args.max_null_items, args.max_numerations)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _slots(pairs: list[str]) -> dict[str, str]:
    out = {}
    for p in pairs:
        name, sep, value = p.partition("=")
        if not sep or not name or not value:
            raise InputError(f"--slot expects name=item, got {p!r}")
        out[name] = value
    return out


def _print_form(form, fused: bool, out) -> None:
    gl = emit_gloss(form, fused=fused)
    print(form.render(fused), file=out)
    print(gl.render(), file=out)


def cmd_derive(args, out) -> int:
    fragment = _fragment(args)
    fillers = _slots(args.slot)
    problem = well_typed(fragment, args.clause_type, fillers)
    if problem:
        raise InputError(problem)
    trace = derive_clause(fragment, args.clause_type, fillers)
    if args.trace:
        print(trace.serialize(), file=out)
    if not trace.converged:
        print(f"crashed: {trace.verdict}", file=sys.stderr)
        return EXIT_FAIL
    try:
        _print_form(spell_out(trace), args.fused_render, out)
    except PFError as exc:
        print(f"spell-out failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if args.tree:
        print(render_tree(trace, args.tree), file=out)
    return EXIT_OK


def _parse(args):
    fragment = _fragment(args)
    try:
        return parse(args.surface, fragment, _bounds(args))
    except SegmentationError as exc:
        raise InputError(str(exc)) from None


def cmd_parse(args, out) -> int:
    try:
        traces = _parse(args)
    except ParseError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_FAIL
    print(f"{len(traces)} parse(s)", file=out)
    for i, trace in enumerate(traces, 1):
        print(f"\n#{i} {embedded_clause_type(trace)}", file=out)
        print(render_tree(trace, args.tree), file=out)
        if args.trace:
            print(trace.serialize(), file=out)
    return EXIT_OK


def cmd_gloss(args, out) -> int:
    try:
        traces = _parse(args)
    except ParseError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_FAIL
    seen = set()
    for trace in traces:
        gl = emit_gloss(spell_out(trace), verbatim=args.verbatim, fused=args.fused_render)
        if gl.render() not in seen:
            seen.add(gl.render())
            print(gl.render(), file=out)
    return EXIT_OK


def cmd_corpus(args, out) -> int:
    fragment = _fragment(args)
    text = _read(args.file) if args.file else shipped_corpus_text()
    try:
        records = load_corpus(text)
    except CorpusError as exc:
        raise InputError(str(exc)) from None
    report = run_corpus(records, fragment, _bounds(args))
    print(report.render(), file=out)
    return report.exit_code


def cmd_lexicon(args, out) -> int:
    print(dump_lexicon(_fragment(args).lexicon), end="", file=out)
    return EXIT_OK


def _add_bounds(p: argparse.ArgumentParser) -> None:
    d = SearchBounds()
    p.add_argument("--max-steps", type=int, default=d.max_steps)
    p.add_argument("--max-null-items", type=int, default=d.max_null_items)
    p.add_argument("--max-numerations", type=int, default=d.max_numerations)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--lexicon", metavar="FILE", help="lexicon file (default: shipped fragment)")
    common.add_argument("--recipes", metavar="FILE", help="recipe file (default: shipped fragment)")
    common.add_argument("--fused-render", action="store_true", help='print "qulk" rather than "qul-k"')

    ap = argparse.ArgumentParser(prog="qulk", description=__doc__.split("\n\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("derive", parents=[common], help="derive a clause from a recipe")
    p.add_argument("clause_type", choices=CLAUSE_TAGS)
    p.add_argument("--slot", action="append", default=[], metavar="NAME=ITEM")
    p.add_argument("--tree", choices=STYLES)
    p.add_argument("--trace", action="store_true", help="print the derivation steps")
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("parse", parents=[common], help="find every derivation of a surface string")
    p.add_argument("surface")
    p.add_argument("--tree", choices=STYLES, default="bracketed")
    p.add_argument("--trace", action="store_true")
    _add_bounds(p)
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("gloss", parents=[common], help="interlinear gloss of a parsed string")
    p.add_argument("surface")
    p.add_argument("--verbatim", action="store_true", help="keep 1.SG-style glosses")
    _add_bounds(p)
    p.set_defaults(func=cmd_gloss)

    p = sub.add_parser("corpus", help="corpus commands")
    csub = p.add_subparsers(dest="action", required=True)
    r = csub.add_parser("run", parents=[common], help="check every record of a corpus file")
    r.add_argument("file", nargs="?", help="corpus file (default: shipped corpus)")
    _add_bounds(r)
    r.set_defaults(func=cmd_corpus)

    p = sub.add_parser("lexicon", help="lexicon commands")
    lsub = p.add_subparsers(dest="action", required=True)
    s = lsub.add_parser("show", parents=[common], help="print the lexicon")
    s.set_defaults(func=cmd_lexicon)
    return ap


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
