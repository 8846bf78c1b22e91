"""The proof-search kernel.

The kernel runs a focused sequent search over three phases:

* asynchronous: invertible rules fire on a workbench of formulas and on the
  unstored right-hand side;
* border: with an empty workbench and a stored goal, a decide rule focuses
  either on a store entry or on the goal;
* synchronous: left or right focus applies non-invertible rules until the
  focus is released back to the asynchronous phase or the branch closes.

All choices are delegated to the clerks and experts of an FpcDefinition.
Alternatives are explored depth first with full backtracking: every prove
function is a generator of trace nodes, so an exhausted inner premise can
pull the next solution of an outer one.  Metavariable bindings live in a
single trailed store shared along a branch; the case-analysis substitution
of the left equality rule is applied structurally to its premise instead,
so it cannot leak into sibling branches.

A least fixed point on the left can be frozen (stored), unfolded, or
treated by induction.  For the obvious induction the kernel abstracts the
fixed point out of the surrounding sequent, in two flavours: one folding
the stored atomic hypotheses into the invariant and one keeping the
invariant bare.  The left induction premise of an obvious induction is
provable by construction (instantiate the abstraction at the original
arguments, reflexivity for the equations, initial steps for the folded
hypotheses, and an identity for the goal), so the kernel discharges it
after checking exactly those side conditions and records only the
invariance premise.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Union

from .fpc import (
    ANY_FROZEN, FRESH, OBVIOUS, Certificate, FpcDefinition, Hyp, Index, LemmaName,
)
from .syntax import (
    SELF, TT, All, And, App, Definition, EVar, Eq, Ex, Ff, Formula, Imp,
    InvariantAbs, MVar, MuAtom, Or, StructuralError, Term, Tt,
    apply_invariant, body_with_invariant, close_formula, formula_vars,
    fresh_evar, fresh_mvar, open_binder, sym, term_vars, unfold_mu,
)
from .trace import TraceNode
from .unify import CLASH, OK, BindingStore

# head symbol bundling the fresh eigenvariables of an invariance premise
# into a trace record's term slot
_YS = sym("%ys")


@dataclass(frozen=True)
class ResourceLimits:
    max_steps: int = 1_000_000


@dataclass(frozen=True)
class Accepted:
    trace: TraceNode
    steps: int


@dataclass(frozen=True)
class Rejected:
    steps: int


@dataclass(frozen=True)
class OutOfBudget:
    steps: int


CheckResult = Union[Accepted, Rejected, OutOfBudget]

Store = tuple[tuple[Index, Formula], ...]
Rhs = tuple[str, Formula]  # ("un", f) unstored or ("st", f) stored goal


class OutOfBudgetError(Exception):
    pass


class _Ctx:
    __slots__ = ("fpc", "binds", "max_steps", "steps")

    def __init__(self, fpc: FpcDefinition, max_steps: int) -> None:
        self.fpc = fpc
        self.binds = BindingStore()
        self.max_steps = max_steps
        self.steps = 0

    def tick(self) -> None:
        self.steps += 1
        if self.steps > self.max_steps:
            raise OutOfBudgetError


def store_lookup(store: Store, ix: Index) -> Optional[Formula]:
    for jx, f in store:
        if jx == ix:
            return f
    return None


def resolve_formula(binds: BindingStore, f: Formula,
                    sigma: Optional[dict] = None) -> Formula:
    """Substitute metavariable bindings (and an optional eigenvariable
    substitution) throughout a formula."""

    def go(g: Formula) -> Formula:
        match g:
            case Eq(l=l, r=r):
                return Eq(binds.resolve_under(l, sigma), binds.resolve_under(r, sigma))
            case And(a=a, b=b):
                return And(go(a), go(b))
            case Or(a=a, b=b):
                return Or(go(a), go(b))
            case Imp(a=a, b=b):
                return Imp(go(a), go(b))
            case All(body=b):
                return All(go(b))
            case Ex(body=b):
                return Ex(go(b))
            case MuAtom(defn=d, args=ts):
                return MuAtom(d, tuple(binds.resolve_under(x, sigma) for x in ts))
            case Tt() | Ff():
                return g
        raise TypeError(f"not a formula: {g!r}")

    return go(f)


def _rewrite_state(binds: BindingStore, sigma: dict, store: Store,
                   theta: tuple[Formula, ...], rhs: Rhs
                   ) -> tuple[Store, tuple[Formula, ...], Rhs]:
    store2 = tuple((ix, resolve_formula(binds, f, sigma)) for ix, f in store)
    theta2 = tuple(resolve_formula(binds, f, sigma) for f in theta)
    rhs2 = (rhs[0], resolve_formula(binds, rhs[1], sigma))
    return store2, theta2, rhs2


# ---------------------------------------------------------------------------
# obvious invariant synthesis


def _conj(parts: Sequence[Formula]) -> Formula:
    if not parts:
        return TT
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = And(p, out)
    return out


def synthesize_obvious_invariants(
    store: Store,
    target_args: tuple[Term, ...],
    goal: Formula,
) -> list[InvariantAbs]:
    """Candidate obvious invariants for inducting on an atom with the given
    (resolved) arguments, under the given (resolved) store and goal.

    Abstracting the fixed point out of the sequent gives

        S = fun xs -> forall zs, (xs = ts /\\ H1 /\\ ... /\\ Hk) => R

    with zs the eigenvariables of the sequent, Hi the stored atomic
    hypotheses and R the goal.  A second candidate keeps the hypotheses out
    of the invariant.  Synthesis is refused (empty list) when a stored
    hypothesis is not atomic or when an undetermined metavariable occurs in
    the relevant formulas.
    """
    hyps: list[Formula] = []
    for ix, f in store:
        if isinstance(ix, Hyp):
            if not isinstance(f, (MuAtom, Eq)):
                return []
            hyps.append(f)

    arity = len(target_args)
    if any(isinstance(v, MVar) for t in target_args for v in term_vars(t)):
        return []
    if any(isinstance(v, MVar) for v in formula_vars(goal)):
        return []

    out: list[InvariantAbs] = []
    for folded in (hyps, []):
        if folded and any(isinstance(v, MVar) for h in folded for v in formula_vars(h)):
            continue
        evars: list[EVar] = []
        seen: set[EVar] = set()

        def note(v) -> None:
            if isinstance(v, EVar) and v not in seen:
                seen.add(v)
                evars.append(v)

        for t in target_args:
            for v in term_vars(t):
                note(v)
        for h in folded:
            for v in formula_vars(h):
                note(v)
        for v in formula_vars(goal):
            note(v)
        evars.sort(key=lambda e: e.id)

        k = len(evars)
        params = [fresh_evar(0) for _ in range(arity)]
        eqs: list[Formula] = [Eq(params[i], target_args[i]) for i in range(arity)]
        inner: Formula = Imp(_conj(eqs + list(folded)), goal)
        mapping: dict[EVar, int] = {z: k - 1 - j for j, z in enumerate(evars)}
        for i, p in enumerate(params):
            mapping[p] = k + i
        body = close_formula(inner, mapping)
        for _ in range(k):
            body = All(body)
        inv = InvariantAbs(arity, body)
        if inv not in out:
            out.append(inv)
    return out


# ---------------------------------------------------------------------------
# search


def _async(ctx: _Ctx, store: Store, theta: tuple[Formula, ...], rhs: Rhs,
           cert: Certificate, level: int) -> Iterator[TraceNode]:
    ctx.tick()
    fpc = ctx.fpc
    binds = ctx.binds
    if theta:
        c, rest = theta[0], theta[1:]
        match c:
            case And(a=a, b=b):
                for k1 in fpc.andl_clerk(cert):
                    for t in _async(ctx, store, (a, b) + rest, rhs, k1, level):
                        yield TraceNode("andL", (t,), formula=c)
            case Or(a=a, b=b):
                for k1, k2 in fpc.orl_clerk(cert):
                    for t1 in _async(ctx, store, (a,) + rest, rhs, k1, level):
                        for t2 in _async(ctx, store, (b,) + rest, rhs, k2, level):
                            yield TraceNode("orL", (t1, t2), formula=c)
            case Ex():
                for k1 in fpc.exl_clerk(cert):
                    e = fresh_evar(level + 1)
                    sub = open_binder(c, e)
                    for t in _async(ctx, store, (sub,) + rest, rhs, k1, level + 1):
                        yield TraceNode("exL", (t,), formula=c, term=e)
            case Eq(l=l, r=r):
                cp = binds.mark()
                out, sigma = binds.unify_case_split(l, r)
                if out is CLASH:
                    yield TraceNode("eqL_clash", formula=c)
                elif out is OK:
                    if sigma:
                        store2, rest2, rhs2 = _rewrite_state(binds, sigma, store, rest, rhs)
                    else:
                        store2, rest2, rhs2 = store, rest, rhs
                    for k1 in fpc.eql_clerk(cert):
                        for t in _async(ctx, store2, rest2, rhs2, k1, level):
                            yield TraceNode("eqL", (t,), formula=c)
                    binds.undo(cp)
                # a scope-indeterminate equation fails the branch
            case Tt():
                for k1 in fpc.ttl_clerk(cert):
                    for t in _async(ctx, store, rest, rhs, k1, level):
                        yield TraceNode("ttL", (t,), formula=c)
            case Ff():
                if fpc.ffl_clerk(cert):
                    yield TraceNode("ffL", formula=c)
            case MuAtom(defn=d, args=ts):
                if d is SELF:
                    raise StructuralError("recursive marker escaped a definition body")
                # induction
                for _kl, kr, invopt in fpc.ind_expert(cert):
                    if invopt is OBVIOUS:
                        targs = tuple(binds.resolve(x) for x in ts)
                        goal_f = resolve_formula(binds, rhs[1])
                        rstore = tuple((ix, resolve_formula(binds, f)) for ix, f in store)
                        for inv in synthesize_obvious_invariants(rstore, targs, goal_f):
                            ys = tuple(fresh_evar(level + 1) for _ in range(d.arity))
                            for t2 in _invariance(ctx, store, d, inv, ys, kr, level):
                                yield TraceNode("induct_obvious", (t2,), formula=c,
                                                term=App(_YS, ys), invariant=inv)
                    else:
                        inv = invopt
                        if inv.arity != d.arity:
                            continue
                        st = apply_invariant(inv, ts)
                        ys = tuple(fresh_evar(level + 1) for _ in range(d.arity))
                        for t1 in _async(ctx, store, (st,) + rest, rhs, _kl, level):
                            for t2 in _invariance(ctx, store, d, inv, ys, kr, level):
                                yield TraceNode("induct", (t1, t2), formula=c,
                                                term=App(_YS, ys), invariant=inv)
                # freeze
                for k1, ix in fpc.store_clerk(cert):
                    if store_lookup(store, ix) is not None:
                        raise StructuralError(f"duplicate store index {ix!r}")
                    for t in _async(ctx, store + ((ix, c),), rest, rhs, k1, level):
                        yield TraceNode("freeze", (t,), formula=c, index=ix)
                # unfold
                for k1 in fpc.unfold_left_expert(cert):
                    sub = unfold_mu(d, ts)
                    for t in _async(ctx, store, (sub,) + rest, rhs, k1, level):
                        yield TraceNode("unfoldL", (t,), formula=c)
            case Imp() | All():
                for k1, ix in fpc.store_clerk(cert):
                    if store_lookup(store, ix) is not None:
                        raise StructuralError(f"duplicate store index {ix!r}")
                    for t in _async(ctx, store + ((ix, c),), rest, rhs, k1, level):
                        yield TraceNode("storeL", (t,), formula=c, index=ix)
            case _:
                raise StructuralError(f"unexpected workbench formula: {c!r}")
        return

    kind, f = rhs
    if kind == "un":
        match f:
            case Imp(a=a, b=b):
                for k1 in fpc.impr_clerk(cert):
                    for t in _async(ctx, store, (a,), ("un", b), k1, level):
                        yield TraceNode("impR", (t,), formula=f)
            case All():
                for k1 in fpc.allr_clerk(cert):
                    e = fresh_evar(level + 1)
                    sub = open_binder(f, e)
                    for t in _async(ctx, store, (), ("un", sub), k1, level + 1):
                        yield TraceNode("allR", (t,), formula=f, term=e)
            case _:
                for t in _async(ctx, store, (), ("st", f), cert, level):
                    yield TraceNode("storeR", (t,), formula=f)
        return

    # border sequent: decide
    for k1, ix in fpc.decide_expert(cert):
        g = store_lookup(store, ix)
        if g is None:
            continue
        for t in _left_focus(ctx, store, g, f, k1, level):
            yield TraceNode("decideL", (t,), formula=g, index=ix)
    for k1 in fpc.decide_right_expert(cert):
        for t in _right_focus(ctx, store, f, k1, level):
            yield TraceNode("decideR", (t,), formula=f)


def _invariance(ctx: _Ctx, store: Store, d: Definition, inv: InvariantAbs,
                ys: tuple[Term, ...], cert: Certificate, level: int
                ) -> Iterator[TraceNode]:
    """The invariance premise: store ; B S ys |- S ys, ys fresh."""
    bsy = body_with_invariant(d, inv, ys)
    sy = apply_invariant(inv, ys)
    return _async(ctx, store, (bsy,), ("un", sy), cert, level + 1)


def _left_focus(ctx: _Ctx, store: Store, focus: Formula, goal: Formula,
                cert: Certificate, level: int) -> Iterator[TraceNode]:
    ctx.tick()
    fpc = ctx.fpc
    match focus:
        case All():
            for k1, w in fpc.some_expert(cert):
                t = fresh_mvar(level) if w is FRESH else w
                sub = open_binder(focus, t)
                for tr in _left_focus(ctx, store, sub, goal, k1, level):
                    yield TraceNode("allL", (tr,), formula=focus, term=t)
        case Imp(a=a, b=b):
            # both premises share the certificate; there is no dedicated
            # expert for splitting an implication under focus
            for t1 in _right_focus(ctx, store, a, cert, level):
                for t2 in _left_focus(ctx, store, b, goal, cert, level):
                    yield TraceNode("impL", (t1, t2), formula=focus)
        case _:
            # positive focus: release back to the asynchronous phase
            for t in _async(ctx, store, (focus,), ("st", goal), cert, level):
                yield TraceNode("releaseL", (t,), formula=focus)


def _right_focus(ctx: _Ctx, store: Store, focus: Formula,
                 cert: Certificate, level: int) -> Iterator[TraceNode]:
    ctx.tick()
    fpc = ctx.fpc
    binds = ctx.binds
    match focus:
        case Or(a=a, b=b):
            for k1, side in fpc.or_expert(cert):
                sub = a if side == 1 else b
                for t in _right_focus(ctx, store, sub, k1, level):
                    yield TraceNode("orR", (t,), formula=focus, side=side)
        case And(a=a, b=b):
            for k1, k2 in fpc.and_expert(cert):
                for t1 in _right_focus(ctx, store, a, k1, level):
                    for t2 in _right_focus(ctx, store, b, k2, level):
                        yield TraceNode("andR", (t1, t2), formula=focus)
        case Ex():
            for k1, w in fpc.some_expert(cert):
                t = fresh_mvar(level) if w is FRESH else w
                sub = open_binder(focus, t)
                for tr in _right_focus(ctx, store, sub, k1, level):
                    yield TraceNode("exR", (tr,), formula=focus, term=t)
        case Eq(l=l, r=r):
            cp = binds.mark()
            if binds.unify(l, r):
                yield TraceNode("eqR", formula=focus)
                binds.undo(cp)
        case Tt():
            if fpc.true_expert(cert):
                yield TraceNode("ttR", formula=focus)
        case Ff():
            return
        case MuAtom(defn=d, args=ts):
            if d is SELF:
                raise StructuralError("recursive marker escaped a definition body")
            for iopt in fpc.initial_expert(cert):
                if iopt is ANY_FROZEN:
                    candidates = [(ix, g) for ix, g in store
                                  if isinstance(g, MuAtom) and g.defn is d]
                else:
                    g = store_lookup(store, iopt)
                    candidates = [(iopt, g)] if isinstance(g, MuAtom) and g.defn is d else []
                for ix, g in candidates:
                    ctx.tick()
                    cp = binds.mark()
                    if all(binds.unify(x, y) for x, y in zip(ts, g.args)):
                        yield TraceNode("initial", formula=focus, index=ix)
                    binds.undo(cp)
            for k1 in fpc.unfold_right_expert(cert):
                sub = unfold_mu(d, ts)
                for t in _right_focus(ctx, store, sub, k1, level):
                    yield TraceNode("unfoldR", (t,), formula=focus)
        case Imp() | All():
            for t in _async(ctx, store, (), ("un", focus), cert, level):
                yield TraceNode("releaseR", (t,), formula=focus)
        case _:
            raise StructuralError(f"unexpected focus: {focus!r}")


# ---------------------------------------------------------------------------
# finalisation and entry point


def _finalize(binds: BindingStore, node: TraceNode) -> TraceNode:
    return TraceNode(
        node.rule,
        tuple(_finalize(binds, c) for c in node.children),
        resolve_formula(binds, node.formula) if node.formula is not None else None,
        binds.resolve(node.term) if node.term is not None else None,
        node.index,
        node.invariant,
        node.side,
    )


def check(lemmas: Sequence[tuple[Index, Formula]], goal: Formula,
          cert: Certificate, fpc: FpcDefinition,
          limits: Optional[ResourceLimits] = None) -> CheckResult:
    """Search for a proof of `goal` under the lemma store, as directed by
    the certificate.  Returns Accepted with a replayable trace, Rejected
    when the certificate's alternatives are exhausted, or OutOfBudget when
    the step limit is hit first."""
    limits = limits or ResourceLimits()
    ctx = _Ctx(fpc, limits.max_steps)
    try:
        for tr in _async(ctx, tuple(lemmas), (), ("un", goal), cert, 0):
            return Accepted(_finalize(ctx.binds, tr), ctx.steps)
    except OutOfBudgetError:
        return OutOfBudget(ctx.steps)
    if ctx.binds.trail:
        raise StructuralError("bindings survived an exhausted search")
    return Rejected(ctx.steps)
