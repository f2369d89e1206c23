#!/usr/bin/env python3
"""Regenerate the committed oracle fixtures under tests/fixtures/.

Each fixture records the reduced basis computed by the classical completion
oracle, after an S-pair closure self-check.  Run from the repository root:

    python scripts/regen_fixtures.py
"""

import json
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from sigbasis.systems import builtin_problem
from sigbasis.textio import render_element, render_monomial
from sigbasis.verify import buchberger, is_groebner_basis

SYSTEMS = ["mora", "katsura4", "katsura5", "katsura6"]
OUT = pathlib.Path(__file__).resolve().parent.parent / "tests" / "fixtures"


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for name in SYSTEMS:
        ctx, gens = builtin_problem(name)
        gb = buchberger(gens, ctx.monoid)
        assert is_groebner_basis(list(gb), ctx.monoid), f"{name}: closure check failed"
        payload = {
            "system": name,
            "order": "degrevlex",
            "field": "Q",
            "variables": list(ctx.variables),
            "reduced_basis": [render_element(g) for g in gb],
            "lm_set": sorted(render_monomial(g.lm, ctx.variables) for g in gb),
        }
        path = OUT / f"{name}_oracle.json"
        path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
        print(f"{name}: {len(gb)} reduced elements -> {path.name}")


if __name__ == "__main__":
    main()
