"""Exhaustive round trip: derive every recipe x filler combination, spell it
out, parse the string back and report coverage, ambiguity and timing.

    python3 scripts/roundtrip_stats.py [--clause imp-neg] [--max-steps 40]
"""
from __future__ import annotations

import argparse
import time
from collections import Counter
from dataclasses import dataclass, field

from qulk.grammar import CLAUSE_TAGS, derive_clause, filler_combinations, yia_fragment
from qulk.parser import SearchBounds, parse
from qulk.pf import spell_out


@dataclass
class RoundTripConfig:
    clauses: tuple[str, ...] = CLAUSE_TAGS
    bounds: SearchBounds = field(default_factory=SearchBounds)
    show_ambiguous: bool = False


def run(cfg: RoundTripConfig) -> int:
    fragment = yia_fragment()
    failures = 0
    total = time.perf_counter()
    print(f"{'clause':14} {'combos':>6} {'ok':>5} {'ambiguous':>9} {'max parses':>10} {'seconds':>8}")
    for clause in cfg.clauses:
        n = ok = 0
        parses = Counter()
        t0 = time.perf_counter()
        for fillers in filler_combinations(fragment, clause):
            n += 1
            trace = derive_clause(fragment, clause, fillers)
            surface = spell_out(trace).render()
            found = parse(surface, fragment, cfg.bounds)
            parses[len(found)] += 1
            if any(p.result == trace.result for p in found):
                ok += 1
            else:
                failures += 1
                print(f"  FAIL {clause} {fillers}: {surface}")
            if cfg.show_ambiguous and len(found) > 1:
                print(f"  {len(found)} parses: {surface}")
        amb = sum(c for k, c in parses.items() if k > 1)
        print(f"{clause:14} {n:6} {ok:5} {amb:9} {max(parses, default=0):10} {time.perf_counter() - t0:8.1f}")
    print(f"total {time.perf_counter() - total:.1f}s, {failures} failure(s)")
    return 1 if failures else 0


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--clause", action="append", choices=CLAUSE_TAGS, help="restrict to a clause type (repeatable)")
    ap.add_argument("--max-steps", type=int, default=SearchBounds().max_steps)
    ap.add_argument("--show-ambiguous", action="store_true", help="list strings with more than one parse")
    args = ap.parse_args()
    cfg = RoundTripConfig(tuple(args.clause or CLAUSE_TAGS), SearchBounds(max_steps=args.max_steps),
                          args.show_ambiguous)
    return run(cfg)


if __name__ == "__main__":
    raise SystemExit(main())
