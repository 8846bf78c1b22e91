"""Binding store: unification, case analysis, and checkpoint discipline."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from outlinecheck import BindingStore, CLASH, OK, STUCK, StaleCheckpointError, con
from outlinecheck.syntax import EVar, MVar, Term

from _util import num


def ev(i, lv=1):
    return EVar(i, lv)


def mv(i, lv=1):
    return MVar(i, lv)


def test_unify_ground_equal():
    b = BindingStore()
    assert b.unify(num(3), num(3))
    assert not b.unify(num(3), num(4))


def test_unify_binds_mvar():
    b = BindingStore()
    x = mv(1)
    assert b.unify(x, num(2))
    assert b.resolve(x) == num(2)


def test_unify_occurs_check():
    b = BindingStore()
    x = mv(1)
    assert not b.unify(x, con("s", x))


def test_unify_failure_restores_bindings():
    b = BindingStore()
    x, y = mv(1), mv(2)
    # s(x) vs s(z) binds x, then z vs s(y) fails; x must be unbound again.
    assert not b.unify(con("pair", x, con("z")), con("pair", con("z"), con("s", y)))
    assert b.resolve(x) == x
    assert b.resolve(y) == y


def test_level_restriction_blocks_deep_eigenvariable():
    # An MVar at level 1 may not capture an EVar from level 2.
    b = BindingStore()
    x = mv(1, lv=1)
    deep = ev(2, lv=2)
    assert not b.unify(x, deep)


def test_mark_undo_roundtrip():
    b = BindingStore()
    x = mv(1)
    cp = b.mark()
    assert b.unify(x, num(1))
    b.undo(cp)
    assert b.resolve(x) == x


def test_stale_checkpoint_detected():
    b = BindingStore()
    cp = b.mark()
    assert b.unify(mv(1), num(1))
    b.undo(cp)
    with pytest.raises(StaleCheckpointError):
        b.undo(cp + 1 if isinstance(cp, int) else cp)


def test_case_split_ok_produces_substitution():
    b = BindingStore()
    e = ev(1)
    verdict, sigma = b.unify_case_split(con("s", e), con("s", num(2)))
    assert verdict is OK
    assert sigma == {e: num(2)}


def test_case_split_clash_on_constructors():
    b = BindingStore()
    verdict, sigma = b.unify_case_split(con("z"), con("s", num(0)))
    assert verdict is CLASH
    assert sigma is None


def test_case_split_stuck_on_deep_eigenvariable_under_constructor():
    # A metavariable from an outer scope meets s(e) where e is deeper: the
    # binding would escape e's scope, but nothing rigid disagrees either, so
    # no branch may be closed.
    b = BindingStore()
    verdict, sigma = b.unify_case_split(mv(1, lv=1), con("s", ev(2, lv=2)))
    assert verdict is STUCK
    assert sigma is None


def test_case_split_eigenvariable_clash_under_constructor():
    # e = s e is cyclic for a rigid eigenvariable: genuinely absurd.
    b = BindingStore()
    e = ev(1)
    verdict, _ = b.unify_case_split(e, con("s", e))
    assert verdict is CLASH


# -- randomized checkpoint-replay oracle -------------------------------------
#
# Run a long random sequence of unify / mark / undo operations against the
# real store while replaying the same operations on a pencil-and-paper model
# that re-executes the surviving operations from scratch after every undo.
# The two must agree on every resolution, and a fully unwound store must be
# empty.


def _random_term(rng: random.Random, vars_pool: list[Term], depth: int = 0) -> Term:
    r = rng.random()
    if r < 0.35 and vars_pool:
        return rng.choice(vars_pool)
    if r < 0.55 or depth >= 3:
        return num(rng.randrange(3))
    return con(
        rng.choice(["s", "pair", "node"]),
        *[_random_term(rng, vars_pool, depth + 1) for _ in range(rng.randrange(1, 3))],
    )


def _scratch_replay(ops: list[tuple[Term, Term]]) -> BindingStore:
    b = BindingStore()
    for a, c in ops:
        b.unify(a, c)
    return b


def test_randomized_mark_undo_matches_scratch_replay():
    rng = random.Random(20260826)
    store = BindingStore()
    pool: list[Term] = [mv(1000 + i) for i in range(12)] + [ev(2000 + i) for i in range(4)]
    frames: list[tuple[object, int]] = []  # (checkpoint, surviving-op count)
    ops: list[tuple[Term, Term]] = []      # successful unifications, in order
    for step in range(10_000):
        r = rng.random()
        if r < 0.15:
            frames.append((store.mark(), len(ops)))
        elif r < 0.25 and frames:
            cp, n = frames.pop(rng.randrange(len(frames)))
            # Undoing an older frame invalidates the ones above it.
            frames = [(c, k) for (c, k) in frames if k <= n]
            store.undo(cp)
            del ops[n:]
        else:
            a = _random_term(rng, pool)
            b = _random_term(rng, pool)
            if store.unify(a, b):
                ops.append((a, b))
        if step % 500 == 0:
            model = _scratch_replay(ops)
            for v in pool:
                assert store.resolve(v) == model.resolve(v)
    model = _scratch_replay(ops)
    for v in pool:
        assert store.resolve(v) == model.resolve(v)


@settings(max_examples=60)
@given(st.integers(min_value=0, max_value=6), st.integers(min_value=0, max_value=6))
def test_unify_is_symmetric_on_numerals(n, m):
    assert BindingStore().unify(num(n), num(m)) == (n == m)
