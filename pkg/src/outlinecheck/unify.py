"""First-order unification over a trailed binding store.

Two entry points matter to the kernel:

* `unify` treats eigenvariables as rigid constants.  It backs the right
  equality and initial rules, where binding an eigenvariable would be
  unsound.

* `unify_case_split` additionally treats eigenvariables as substitutable.
  It backs the left equality rule, where the most general unifier acts as a
  case analysis on the branch.  Eigenvariable assignments are returned as an
  explicit substitution rather than stored, so they can be applied to one
  premise without leaking into sibling branches.  The outcome is three-way:
  a clash means no unifier exists (the branch is vacuous), while `stuck`
  reports a scope-indeterminate problem the kernel must treat as failure.

The occurs check is always on.  An MVar at level k is never bound to a term
containing an EVar of level > k; metavariables of too-high level occurring
in a candidate binding are pruned to fresh ones at the lower level.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .syntax import App, Bound, EVar, MVar, StructuralError, Term, fresh_mvar

OK = "ok"
CLASH = "clash"
STUCK = "stuck"


class StaleCheckpointError(Exception):
    """Undo was asked to rewind past the current trail."""


class BindingStore:
    """Metavariable bindings plus an undo trail.

    Checkpoints from `mark` must be undone in LIFO order; rewinding past a
    checkpoint that has already been undone is a structural error.
    """

    __slots__ = ("bindings", "trail")

    def __init__(self) -> None:
        self.bindings: dict[int, Term] = {}
        self.trail: list[int] = []

    # -- checkpoints

    def mark(self) -> int:
        return len(self.trail)

    def undo(self, checkpoint: int) -> None:
        if checkpoint > len(self.trail):
            raise StaleCheckpointError(
                f"checkpoint {checkpoint} is ahead of trail length {len(self.trail)}")
        while len(self.trail) > checkpoint:
            del self.bindings[self.trail.pop()]

    def snapshot(self) -> dict[int, Term]:
        return dict(self.bindings)

    # -- resolution

    def walk(self, t: Term) -> Term:
        """Follow bindings at the head only."""
        while isinstance(t, MVar):
            b = self.bindings.get(t.id)
            if b is None:
                return t
            t = b
        return t

    def resolve(self, t: Term) -> Term:
        """Substitute all bindings, recursively."""
        t = self.walk(t)
        if isinstance(t, App) and t.args:
            return App(t.head, tuple(self.resolve(x) for x in t.args))
        return t

    def resolve_under(self, t: Term, sigma: dict[EVar, Term] | None = None) -> Term:
        """Like resolve, but also applies an eigenvariable substitution."""
        return self._deep(t, sigma)

    def _bind(self, v: MVar, t: Term) -> None:
        self.bindings[v.id] = t
        self.trail.append(v.id)

    # -- unification

    def unify(self, a: Term, b: Term) -> bool:
        """Rigid-eigenvariable unification; restores the store on failure."""
        cp = self.mark()
        out = self._unify(a, b, None)
        if out is not OK:
            self.undo(cp)
        return out is OK

    def unify_case_split(self, a: Term, b: Term):
        """Unification for left equality.

        Returns (OK, sigma) with sigma a dict from EVar to Term, or (CLASH,
        None) / (STUCK, None).  Metavariable bindings made on success stay in
        the store (already rewritten under sigma); on non-success the store
        is restored.
        """
        cp = self.mark()
        sigma: dict[EVar, Term] = {}
        out = self._unify(a, b, sigma)
        if out is not OK:
            self.undo(cp)
            return out, None
        if sigma:
            # make sigma idempotent and push it through any bindings that
            # were recorded during this call
            sigma = {e: self._deep(t, sigma) for e, t in sigma.items()}
            for key in self.trail[cp:]:
                self.bindings[key] = self._deep(self.bindings[key], sigma)
        return OK, sigma

    # -- internals

    def _walk2(self, t: Term, sigma: dict[EVar, Term] | None) -> Term:
        while True:
            if isinstance(t, MVar):
                b = self.bindings.get(t.id)
                if b is None:
                    return t
                t = b
            elif sigma is not None and isinstance(t, EVar):
                b = sigma.get(t)
                if b is None:
                    return t
                t = b
            else:
                return t

    def _deep(self, t: Term, sigma: dict[EVar, Term] | None) -> Term:
        t = self._walk2(t, sigma)
        if isinstance(t, App) and t.args:
            return App(t.head, tuple(self._deep(x, sigma) for x in t.args))
        return t

    def _unify(self, a: Term, b: Term, sigma: dict[EVar, Term] | None) -> str:
        a = self._walk2(a, sigma)
        b = self._walk2(b, sigma)
        if a == b:
            return OK
        if isinstance(a, Bound) or isinstance(b, Bound):
            raise StructuralError("positional variable reached the unifier")
        if isinstance(a, MVar):
            return self._bind_mvar(a, b, sigma)
        if isinstance(b, MVar):
            return self._bind_mvar(b, a, sigma)
        if sigma is not None and isinstance(a, EVar):
            return self._bind_evar(a, b, sigma)
        if sigma is not None and isinstance(b, EVar):
            return self._bind_evar(b, a, sigma)
        if isinstance(a, EVar) or isinstance(b, EVar):
            return CLASH  # distinct rigid constants
        assert isinstance(a, App) and isinstance(b, App)
        if a.head is not b.head or len(a.args) != len(b.args):
            return CLASH
        for x, y in zip(a.args, b.args):
            out = self._unify(x, y, sigma)
            if out is not OK:
                return out
        return OK

    def _bind_mvar(self, v: MVar, t: Term, sigma: dict[EVar, Term] | None) -> str:
        # occurs and scope scan over the resolved view of t, pruning any
        # metavariable whose level exceeds v's
        out = self._scan(v, t, sigma)
        if out is not OK:
            if sigma is not None and isinstance(self._walk2(t, sigma), EVar):
                # the flexible side can absorb the binding instead
                return self._bind_evar(self._walk2(t, sigma), v, sigma)
            return out
        self._bind(v, t)
        return OK

    def _scan(self, v: MVar, t: Term, sigma: dict[EVar, Term] | None) -> str:
        t = self._walk2(t, sigma)
        match t:
            case MVar():
                if t.id == v.id:
                    return CLASH  # occurs check
                if t.level > v.level:
                    self._bind(t, fresh_mvar(v.level))
                return OK
            case EVar(level=lv):
                if lv > v.level:
                    return CLASH if sigma is None else STUCK
                return OK
            case App(args=ts):
                for x in ts:
                    out = self._scan(v, x, sigma)
                    if out is not OK:
                        return out
                return OK
        raise StructuralError("positional variable reached the unifier")

    def _bind_evar(self, e: EVar, t: Term, sigma: dict[EVar, Term]) -> str:
        if self._occurs_evar(e, t, sigma):
            return CLASH
        sigma[e] = t
        return OK

    def _occurs_evar(self, e: EVar, t: Term, sigma: dict[EVar, Term]) -> bool:
        t = self._walk2(t, sigma)
        match t:
            case EVar():
                return t == e
            case App(args=ts):
                return any(self._occurs_evar(e, x, sigma) for x in ts)
            case _:
                return False
