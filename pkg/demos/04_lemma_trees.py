"""Lemma-tree certificates: spell out the lemma dependencies up front.

The flat form `(induction 2 1 0)` lets the checker decide on any supplied
lemma, paying one decide each.  The tree form `(tree T D UA US)` instead
fixes the shape of lemma use: a decide may consume any exposed root of the
tree, which then exposes that node's children; `D` budgets only decides on
stored hypotheses.  A tighter tree prunes the search.  Run from the
repository root:

    python3 demos/04_lemma_trees.py
"""

import pathlib

from outlinecheck import (
    OUTLINE_FPC, Accepted, LemmaName, ResourceLimits, check, elaborate,
    initial_state, parse_file, parse_outline, sym,
)

CORPUS = pathlib.Path(__file__).resolve().parent.parent / "corpus" / "plus.thm"


def main() -> None:
    el = elaborate(parse_file(CORPUS.read_text()))
    goal = el.goals["pluscom"]
    lemmas = [(LemmaName(sym(n)), el.goals[n])
              for n in ("plus0com", "plusscom")]
    table = tuple(ix.name for ix, _ in lemmas)

    for text in [
        "(induction 2 1 0)",                   # flat: any lemma, 2 decides
        "(tree (plus0com plusscom) 1 1 0)",    # tree: fixed order, cheaper
        "(tree (plusscom plus0com) 1 1 0)",    # wrong order: rejected
    ]:
        cert = initial_state(parse_outline(text), table)
        r = check(lemmas, goal, cert, OUTLINE_FPC,
                  ResourceLimits(max_steps=1_000_000))
        verdict = "accepted" if isinstance(r, Accepted) else "rejected"
        print(f"  {text:40s} {verdict:8s} steps={r.steps}")


if __name__ == "__main__":
    main()
