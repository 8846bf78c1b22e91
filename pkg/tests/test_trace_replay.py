"""Trace serialization and search-free replay verification."""

from __future__ import annotations

import random

import pytest

from outlinecheck import (
    Accepted,
    ResourceLimits,
    TraceFormatError,
    TraceNode,
    explain_failure,
    run_session,
    trace_from_lines,
    trace_to_lines,
    verify_trace,
)
from outlinecheck.syntax import App, Bound, InvariantAbs, TT, con, sym
from outlinecheck.trace import ALL_RULES

from _util import check_outline, elab_plus, load_plus, num


@pytest.fixture(scope="module")
def session():
    results = run_session(load_plus(), ResourceLimits(max_steps=1_000_000))
    assert all(r.outcome == "ok" for r in results)
    return results


@pytest.fixture(scope="module")
def el():
    return elab_plus()


# -- serialization


def test_round_trip_on_all_corpus_traces(session, el):
    for r in session:
        lines = trace_to_lines(r.trace)
        back = trace_from_lines(lines, el.definitions)
        assert back == r.trace


def test_records_have_seven_fields(session):
    for r in session:
        for ln in trace_to_lines(r.trace):
            assert ln.startswith("(") and ln.endswith(")")


def test_malformed_records_rejected(el):
    with pytest.raises(TraceFormatError):
        trace_from_lines(["(eqR 0 nil nil nil nil)"], el.definitions)  # 6 fields
    with pytest.raises(TraceFormatError):
        trace_from_lines(["(mystery 0 nil nil nil nil nil)"], el.definitions)
    with pytest.raises(TraceFormatError):
        trace_from_lines(["(impR 1 nil nil nil nil nil)"], el.definitions)  # truncated
    with pytest.raises(TraceFormatError):
        trace_from_lines(
            ["(eqR 0 nil nil nil nil nil)", "(eqR 0 nil nil nil nil nil)"],
            el.definitions)  # extra record


def test_unknown_definition_name_rejected(el):
    with pytest.raises(TraceFormatError):
        trace_from_lines(["(freeze 0 (mu ghost z) nil (hyp 1) nil nil)"],
                         el.definitions)


# -- replay


def test_all_corpus_traces_replay(session):
    for r in session:
        assert verify_trace(r.lemmas, r.goal, r.trace), r.name


def test_replay_is_deterministic(session):
    for r in session:
        a = explain_failure(r.lemmas, r.goal, r.trace)
        b = explain_failure(r.lemmas, r.goal, r.trace)
        assert a is None and b is None


def test_trace_for_wrong_goal_rejected(session, el):
    donor = session[0]
    other = el.goals["plus_determ"]
    assert not verify_trace(donor.lemmas, other, donor.trace)


def test_replay_catches_truncated_trace(session):
    r = session[0]
    cut = TraceNode(r.trace.rule, (), r.trace.formula, r.trace.term,
                    r.trace.index, r.trace.invariant, r.trace.side)
    assert not verify_trace(r.lemmas, r.goal, cut)


# -- random single-field mutations must all be rejected


def _mutate(node: TraceNode, path: list[int], field: str, rng: random.Random) -> TraceNode:
    if path:
        i, rest = path[0], path[1:]
        kids = list(node.children)
        kids[i] = _mutate(kids[i], rest, field, rng)
        return TraceNode(node.rule, tuple(kids), node.formula, node.term,
                         node.index, node.invariant, node.side)
    rule, formula, term = node.rule, node.formula, node.term
    index, invariant, side = node.index, node.invariant, node.side
    if field == "rule":
        rule = rng.choice(sorted(ALL_RULES - {rule}))
    elif field == "formula":
        formula = TT if formula is not None else con("z")
        if formula == node.formula:
            formula = con("s", con("z"))
    elif field == "term":
        term = num(9) if term is None or term != num(9) else num(8)
    elif field == "index":
        from outlinecheck.fpc import Hyp
        index = Hyp(97) if index != Hyp(97) else Hyp(98)
    elif field == "invariant":
        invariant = InvariantAbs(1, TT)
    elif field == "side":
        side = 1 if side != 1 else 2
    return TraceNode(rule, node.children, formula, term, index, invariant, side)


def _all_paths(node: TraceNode, prefix=()):
    yield list(prefix)
    for i, c in enumerate(node.children):
        yield from _all_paths(c, prefix + (i,))


def test_hundred_random_mutations_rejected(session):
    rng = random.Random(987)
    rejected = 0
    attempts = 0
    while rejected < 100 and attempts < 500:
        r = rng.choice(session)
        paths = list(_all_paths(r.trace))
        path = rng.choice(paths)
        field = rng.choice(["rule", "formula", "term", "index", "invariant", "side"])
        mutant = _mutate(r.trace, path, field, rng)
        if mutant == r.trace:
            continue
        attempts += 1
        assert not verify_trace(r.lemmas, r.goal, mutant), (
            r.name, path, field)
        rejected += 1
    assert rejected == 100


# -- tampering with recorded equality reasoning is caught


def test_clash_claims_require_rigid_disagreement(session, el):
    # Rewrite some eqL_clash node into an eqL node (and vice versa would drop
    # a premise); the replayer recomputes the case split and must disagree.
    for r in session:
        for i, n in enumerate(r.trace.walk()):
            if n.rule == "eqL_clash":
                lines = trace_to_lines(r.trace)
                bad = [ln.replace("(eqL_clash 0", "(eqL_clash 1", 1)
                       if ln.startswith("(eqL_clash 0") else ln for ln in lines]
                with pytest.raises(TraceFormatError):
                    trace_from_lines(bad, el.definitions)
                return
