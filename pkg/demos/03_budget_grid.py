"""Map the acceptance region of a theorem over the budget grid.

An outline certificate `(induction D UA US)` gives three budgets: decides
on lemmas or stored hypotheses, left unfolds, and right unfolds.  This
demo sweeps all triples in [0,3]^3 for the commutativity theorem (with its
two lemmas available) and prints the minimal accepting triples.  Run from
the repository root:

    python3 demos/03_budget_grid.py
"""

import pathlib

from outlinecheck import (
    OUTLINE_FPC, Accepted, LemmaName, OutOfBudget, ResourceLimits, check,
    elaborate, initial_state, parse_file, parse_outline, sym,
)

CORPUS = pathlib.Path(__file__).resolve().parent.parent / "corpus" / "plus.thm"
BOUND = 3
CAP = 500_000


def main() -> None:
    el = elaborate(parse_file(CORPUS.read_text()))
    goal = el.goals["pluscom"]
    lemmas = [(LemmaName(sym(n)), el.goals[n])
              for n in ("plus0com", "plusscom")]
    table = tuple(ix.name for ix, _ in lemmas)

    verdicts = {}
    for d in range(BOUND + 1):
        for ua in range(BOUND + 1):
            for us in range(BOUND + 1):
                cert = initial_state(
                    parse_outline(f"(induction {d} {ua} {us})"), table)
                r = check(lemmas, goal, cert, OUTLINE_FPC,
                          ResourceLimits(max_steps=CAP))
                verdicts[(d, ua, us)] = r

    accepted = sorted(k for k, v in verdicts.items() if isinstance(v, Accepted))
    capped = sum(1 for v in verdicts.values() if isinstance(v, OutOfBudget))
    minimal = [a for a in accepted
               if not any(b != a and all(x <= y for x, y in zip(b, a))
                          for b in accepted)]

    print(f"pluscom over [0,{BOUND}]^3 (step cap {CAP}):")
    print(f"  accepted cells: {len(accepted)} / {len(verdicts)}"
          f"  (hit the cap: {capped})")
    print(f"  minimal accepting triples (d, uA, uS): {minimal}")
    cheapest = min(accepted, key=lambda k: verdicts[k].steps)
    print(f"  cheapest accepted run: {cheapest} "
          f"in {verdicts[cheapest].steps} steps")


if __name__ == "__main__":
    main()
