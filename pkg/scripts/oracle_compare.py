"""Chart parser against the brute-force workspace oracle on the shipped
corpus: parse counts, agreement and timing per sentence.

    python3 scripts/oracle_compare.py [--corpus FILE]
"""
from __future__ import annotations

import argparse
import time
from dataclasses import dataclass
from pathlib import Path

from qulk.corpus import load_corpus, shipped_corpus_text
from qulk.grammar import yia_fragment
from qulk.parser import SearchBounds, oracle_parse, parse


@dataclass
class CompareConfig:
    corpus_text: str
    bounds: SearchBounds = SearchBounds()


def run(cfg: CompareConfig) -> int:
    fragment = yia_fragment()
    mismatches = 0
    print(f"{'id':9} {'chart':>5} {'oracle':>6} {'chart s':>8} {'oracle s':>9}  surface")
    for r in load_corpus(cfg.corpus_text):
        t0 = time.perf_counter()
        chart = {t.result for t in parse(r.surface, fragment, cfg.bounds)}
        t1 = time.perf_counter()
        oracle = set(oracle_parse(r.surface, fragment, cfg.bounds))
        t2 = time.perf_counter()
        same = chart == oracle
        mismatches += not same
        flag = "" if same else "  MISMATCH"
        print(f"{r.id:9} {len(chart):5} {len(oracle):6} {t1 - t0:8.3f} {t2 - t1:9.3f}  {r.surface}{flag}")
    return 1 if mismatches else 0


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--corpus", type=Path, help="corpus file (default: shipped corpus)")
    args = ap.parse_args()
    text = args.corpus.read_text(encoding="utf-8") if args.corpus else shipped_corpus_text()
    return run(CompareConfig(text))


if __name__ == "__main__":
    raise SystemExit(main())
