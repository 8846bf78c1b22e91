"""Cross-check the kernel against a brute-force evaluator on ground atoms.

For closed queries like `plus 2 3 5` the checker needs no induction at
all: a certificate `(induction 0 0 K)` with only right-unfold budget
either proves the atom or exhausts every alternative.  The bottom-up
evaluator computes the same answers by saturating the definitions over
the query's subterm universe.  The two must agree.  Run from the
repository root:

    python3 demos/05_oracle_crosscheck.py
"""

import pathlib

from outlinecheck import (
    OUTLINE_FPC, Accepted, MuAtom, ResourceLimits, check, con, elaborate,
    eval_ground, initial_state, parse_file, parse_outline,
)

CORPUS = pathlib.Path(__file__).resolve().parent.parent / "corpus" / "plus.thm"


def num(n: int):
    t = con("z")
    for _ in range(n):
        t = con("s", t)
    return t


def main() -> None:
    el = elaborate(parse_file(CORPUS.read_text()))
    plus = el.definitions["plus"]
    defs = el.definitions.values()
    cert_text = "(induction 0 0 10)"

    print(f"{'query':16s} {'kernel':8s} {'evaluator':9s}")
    for a, b, c in [(0, 0, 0), (2, 3, 5), (2, 3, 6), (4, 0, 4),
                    (1, 1, 3), (3, 3, 6)]:
        atom = MuAtom(plus, (num(a), num(b), num(c)))
        r = check([], atom, initial_state(parse_outline(cert_text), ()),
                  OUTLINE_FPC, ResourceLimits(max_steps=100_000))
        kernel_says = isinstance(r, Accepted)
        oracle_says = eval_ground(defs, atom, 20)
        mark = "" if kernel_says == oracle_says else "   <-- DISAGREE"
        print(f"plus {a} {b} {c:2d}     {str(kernel_says):8s}"
              f" {str(oracle_says):9s}{mark}")


if __name__ == "__main__":
    main()
