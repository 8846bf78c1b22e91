"""Check every theorem in the bundled corpus and report budgets and steps.

Run from the repository root:

    python3 demos/01_check_corpus.py
"""

import pathlib

from outlinecheck import ResourceLimits, count_rule, parse_file, run_session

CORPUS = pathlib.Path(__file__).resolve().parent.parent / "corpus" / "plus.thm"


def main() -> None:
    results = run_session(parse_file(CORPUS.read_text()),
                          ResourceLimits(max_steps=1_000_000))
    print(f"{CORPUS.name}: {len(results)} theorems\n")
    for r in results:
        if r.outcome != "ok":
            print(f"  {r.name}: {r.outcome} ({r.detail})")
            continue
        decides = count_rule(r.trace, "decideL")
        ua = count_rule(r.trace, "unfoldL")
        us = count_rule(r.trace, "unfoldR")
        print(f"  {r.name}: ok  decides={decides} unfoldL={ua} "
              f"unfoldR={us} steps={r.steps}")
    print("\nThe same run is available as:  acheck corpus/plus.thm")


if __name__ == "__main__":
    main()
