"""Produce a proof trace, replay it, and show that tampering is caught.

Every accepted check returns a preorder trace of the full proof.  The
replayer re-runs the proof without any search: each record must name the
formula it acts on, so a verifier can audit an accepted run in one linear
pass.  Run from the repository root:

    python3 demos/02_trace_and_replay.py
"""

import pathlib

from outlinecheck import (
    ResourceLimits, TraceNode, explain_failure, parse_file, run_session,
    trace_to_lines, verify_trace,
)
from outlinecheck.syntax import con

CORPUS = pathlib.Path(__file__).resolve().parent.parent / "corpus" / "plus.thm"


def main() -> None:
    results = run_session(parse_file(CORPUS.read_text()),
                          ResourceLimits(max_steps=1_000_000))
    r = next(res for res in results if res.name == "plus0com")

    print(f"trace for {r.name} ({sum(1 for _ in r.trace.walk())} records):\n")
    for line in trace_to_lines(r.trace):
        print("  " + line)

    print("\nreplay of the honest trace:",
          "accepted" if verify_trace(r.lemmas, r.goal, r.trace) else "rejected")

    # Tamper with one field: claim a different witness on the first record
    # that carries a term.
    def tamper(node: TraceNode) -> TraceNode:
        if node.term is not None:
            return TraceNode(node.rule, node.children, node.formula,
                             con("s", node.term), node.index,
                             node.invariant, node.side)
        kids = tuple(tamper(c) for c in node.children)
        return TraceNode(node.rule, kids, node.formula, node.term,
                         node.index, node.invariant, node.side)

    bad = tamper(r.trace)
    print("replay of the tampered trace:",
          "accepted" if verify_trace(r.lemmas, r.goal, bad) else "rejected")
    print("reason:", explain_failure(r.lemmas, r.goal, bad))


if __name__ == "__main__":
    main()
