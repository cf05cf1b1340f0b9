"""Remove one item at a time from a recipe's numeration and count the
convergent derivations the oracle finds for what is left.

    python3 scripts/negative_evidence.py imp-neg --slot verb=tiftaḥ --slot object=al-bāb --slot addressee=lak
"""
from __future__ import annotations

import argparse
from dataclasses import dataclass, field

from qulk.grammar import CLAUSE_TAGS, build_numeration, yia_fragment
from qulk.parser import SearchBounds, enumerate_all
from qulk.pf import PFError, spell_out


@dataclass
class AblationConfig:
    clause: str
    fillers: dict[str, str] = field(default_factory=dict)
    bounds: SearchBounds = field(default_factory=SearchBounds)


def run(cfg: AblationConfig) -> int:
    fragment = yia_fragment()
    full = build_numeration(fragment, cfg.clause, cfg.fillers)
    print(f"numeration: {dict(sorted(full.items()))}")
    for missing in [None] + sorted(full):
        numeration = full.copy()
        if missing is not None:
            numeration[missing] -= 1
            numeration = +numeration
        res = enumerate_all(numeration, fragment.lexicon, cfg.bounds, fragment.start)
        forms = set()
        for trace in res.traces.values():
            try:
                forms.add(spell_out(trace).render())
            except PFError:
                forms.add("<PF failure>")
        label = "(full)" if missing is None else f"minus {missing}"
        status = "" if res.complete else " (incomplete)"
        print(f"{label:16} {len(res.traces):3} convergent{status}  {'; '.join(sorted(forms))}")
    return 0


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("clause", choices=CLAUSE_TAGS)
    ap.add_argument("--slot", action="append", default=[], metavar="NAME=ITEM")
    args = ap.parse_args()
    fillers = dict(s.split("=", 1) for s in args.slot)
    return run(AblationConfig(args.clause, fillers))


if __name__ == "__main__":
    raise SystemExit(main())
