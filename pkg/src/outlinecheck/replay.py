"""Search-free verification of proof traces.

A trace produced by the kernel records, for every rule, the principal
formula and the choice data the rule consumed, with all metavariable
bindings of the final solution already substituted in.  Replaying is
therefore deterministic: starting from the original lemmas and goal, each
record must name exactly the rule that applies, its principal formula must
equal the one the replayer computed, witnesses are read from the record
(after scope checks), and leaves are closed by syntactic comparisons.

Metavariables that survive in a finished trace were never constrained; the
replayer treats them as inert constants.  The left equality rule is the
one place where the replayer recomputes something: the case-analysis
substitution on eigenvariables, which it derives from the recorded
equation and applies structurally to the premise, mirroring the kernel.
A recorded clash leaf must exhibit a rigid disagreement, so it stays
sound even on tampered traces.
"""

from __future__ import annotations

from typing import Optional

from .syntax import (
    SELF, All, And, App, EVar, Eq, Ex, Ff, Formula, Imp, MVar, MuAtom,
    Or, Term, Tt, apply_invariant, body_with_invariant, open_binder,
    term_vars, unfold_mu,
)
from .trace import TraceNode
from .kernel import Rhs, Store, store_lookup, synthesize_obvious_invariants

_YS = "%ys"

OK = "ok"
CLASH = "clash"
STUCK = "stuck"


class ReplayError(Exception):
    pass


# ---------------------------------------------------------------------------
# eigenvariable-only unification on concrete terms


def _sigma_walk(t: Term, sigma: dict[EVar, Term]) -> Term:
    while isinstance(t, EVar) and t in sigma:
        t = sigma[t]
    return t


def _sigma_apply(t: Term, sigma: dict[EVar, Term]) -> Term:
    t = _sigma_walk(t, sigma)
    if isinstance(t, App) and t.args:
        return App(t.head, tuple(_sigma_apply(x, sigma) for x in t.args))
    return t


def _sigma_apply_formula(f: Formula, sigma: dict[EVar, Term]) -> Formula:
    match f:
        case Eq(l=l, r=r):
            return Eq(_sigma_apply(l, sigma), _sigma_apply(r, sigma))
        case And(a=a, b=b):
            return And(_sigma_apply_formula(a, sigma), _sigma_apply_formula(b, sigma))
        case Or(a=a, b=b):
            return Or(_sigma_apply_formula(a, sigma), _sigma_apply_formula(b, sigma))
        case Imp(a=a, b=b):
            return Imp(_sigma_apply_formula(a, sigma), _sigma_apply_formula(b, sigma))
        case All(body=b):
            return All(_sigma_apply_formula(b, sigma))
        case Ex(body=b):
            return Ex(_sigma_apply_formula(b, sigma))
        case MuAtom(defn=d, args=ts):
            return MuAtom(d, tuple(_sigma_apply(x, sigma) for x in ts))
        case _:
            return f


def _occurs(e: EVar, t: Term, sigma: dict[EVar, Term]) -> bool:
    t = _sigma_walk(t, sigma)
    if isinstance(t, EVar):
        return t == e
    if isinstance(t, App):
        return any(_occurs(e, x, sigma) for x in t.args)
    return False


def match_evars(a: Term, b: Term) -> tuple[str, Optional[dict[EVar, Term]]]:
    """Unify two concrete terms with eigenvariables flexible and
    metavariables inert.  Returns (OK, sigma), (CLASH, None) when a rigid
    disagreement is found regardless of undetermined parts, or
    (STUCK, None) when the problem cannot be decided."""
    sigma: dict[EVar, Term] = {}

    def go(x: Term, y: Term) -> str:
        x = _sigma_walk(x, sigma)
        y = _sigma_walk(y, sigma)
        if x == y:
            return OK
        if isinstance(x, EVar):
            if _occurs(x, y, sigma):
                return CLASH
            sigma[x] = y
            return OK
        if isinstance(y, EVar):
            if _occurs(y, x, sigma):
                return CLASH
            sigma[y] = x
            return OK
        if isinstance(x, MVar) or isinstance(y, MVar):
            return STUCK
        if not (isinstance(x, App) and isinstance(y, App)):
            raise ReplayError("positional variable in a replayed equation")
        if x.head is not y.head or len(x.args) != len(y.args):
            return CLASH
        stuck = False
        for u, v in zip(x.args, y.args):
            out = go(u, v)
            if out is CLASH:
                return CLASH
            if out is STUCK:
                stuck = True
        return STUCK if stuck else OK

    out = go(a, b)
    if out is not OK:
        return out, None
    return OK, {e: _sigma_apply(t, sigma) for e, t in sigma.items()}


# ---------------------------------------------------------------------------
# replay proper


class _Replay:
    def __init__(self) -> None:
        self.used_evars: set[int] = set()

    # -- checks

    def need(self, cond: bool, msg: str) -> None:
        if not cond:
            raise ReplayError(msg)

    def expect(self, node: TraceNode, rules: tuple[str, ...], nchildren: int,
               formula: Formula) -> None:
        self.need(node.rule in rules,
                  f"expected one of {rules}, found {node.rule}")
        self.need(len(node.children) == nchildren,
                  f"{node.rule}: expected {nchildren} premises,"
                  f" found {len(node.children)}")
        self.need(node.formula == formula,
                  f"{node.rule}: principal formula mismatch")

    def fresh_eigen(self, t: Optional[Term], level: int) -> EVar:
        self.need(isinstance(t, EVar), "missing eigenvariable record")
        assert isinstance(t, EVar)
        self.need(t.level == level, f"eigenvariable level {t.level} != {level}")
        self.need(t.id not in self.used_evars, "eigenvariable reused")
        self.used_evars.add(t.id)
        return t

    def scoped_witness(self, t: Optional[Term], level: int) -> Term:
        self.need(t is not None, "missing witness record")
        assert t is not None
        for v in term_vars(t):
            if isinstance(v, EVar):
                self.need(v.id in self.used_evars and v.level <= level,
                          "witness uses an out-of-scope eigenvariable")
            else:
                self.need(v.level <= level,
                          "witness uses an out-of-scope metavariable")
        return t

    def invariance_eigen(self, node: TraceNode, arity: int, level: int
                         ) -> tuple[Term, ...]:
        t = node.term
        self.need(isinstance(t, App) and t.head.name == _YS and len(t.args) == arity,
                  "malformed eigenvariable bundle on an induction record")
        assert isinstance(t, App)
        return tuple(self.fresh_eigen(y, level + 1) for y in t.args)

    # -- phases

    def r_async(self, store: Store, theta: tuple[Formula, ...], rhs: Rhs,
                level: int, node: TraceNode) -> None:
        if theta:
            c, rest = theta[0], theta[1:]
            match c:
                case And(a=a, b=b):
                    self.expect(node, ("andL",), 1, c)
                    self.r_async(store, (a, b) + rest, rhs, level, node.children[0])
                case Or(a=a, b=b):
                    self.expect(node, ("orL",), 2, c)
                    self.r_async(store, (a,) + rest, rhs, level, node.children[0])
                    self.r_async(store, (b,) + rest, rhs, level, node.children[1])
                case Ex():
                    self.expect(node, ("exL",), 1, c)
                    e = self.fresh_eigen(node.term, level + 1)
                    self.r_async(store, (open_binder(c, e),) + rest, rhs,
                                 level + 1, node.children[0])
                case Eq(l=l, r=r):
                    if node.rule == "eqL_clash":
                        self.expect(node, ("eqL_clash",), 0, c)
                        out, _ = match_evars(l, r)
                        self.need(out is CLASH, "recorded clash is not rigid")
                        return
                    self.expect(node, ("eqL",), 1, c)
                    out, sigma = match_evars(l, r)
                    self.need(out is OK, "recorded equation does not unify")
                    assert sigma is not None
                    if sigma:
                        store = tuple((ix, _sigma_apply_formula(f, sigma))
                                      for ix, f in store)
                        rest = tuple(_sigma_apply_formula(f, sigma) for f in rest)
                        rhs = (rhs[0], _sigma_apply_formula(rhs[1], sigma))
                    self.r_async(store, rest, rhs, level, node.children[0])
                case Tt():
                    self.expect(node, ("ttL",), 1, c)
                    self.r_async(store, rest, rhs, level, node.children[0])
                case Ff():
                    self.expect(node, ("ffL",), 0, c)
                case MuAtom(defn=d, args=ts):
                    self.need(d is not SELF, "recursive marker in a replayed atom")
                    self.expect(node, ("freeze", "unfoldL", "induct",
                                       "induct_obvious"), len(node.children), c)
                    if node.rule == "freeze":
                        self.need(len(node.children) == 1, "freeze arity")
                        ix = node.index
                        self.need(ix is not None and store_lookup(store, ix) is None,
                                  "freeze index missing or already used")
                        assert ix is not None
                        self.r_async(store + ((ix, c),), rest, rhs, level,
                                     node.children[0])
                    elif node.rule == "unfoldL":
                        self.need(len(node.children) == 1, "unfoldL arity")
                        self.r_async(store, (unfold_mu(d, ts),) + rest, rhs,
                                     level, node.children[0])
                    elif node.rule == "induct_obvious":
                        self.need(len(node.children) == 1, "induction arity")
                        inv = node.invariant
                        self.need(inv is not None, "missing invariant record")
                        assert inv is not None
                        good = synthesize_obvious_invariants(store, ts, rhs[1])
                        self.need(inv in good,
                                  "invariant is not one this sequent yields")
                        ys = self.invariance_eigen(node, d.arity, level)
                        self.r_async(store, (body_with_invariant(d, inv, ys),),
                                     ("un", apply_invariant(inv, ys)),
                                     level + 1, node.children[0])
                    else:  # explicit induction
                        self.need(len(node.children) == 2, "induction arity")
                        inv = node.invariant
                        self.need(inv is not None and inv.arity == d.arity,
                                  "missing or ill-sorted invariant record")
                        assert inv is not None
                        ys = self.invariance_eigen(node, d.arity, level)
                        self.r_async(store, (apply_invariant(inv, ts),) + rest,
                                     rhs, level, node.children[0])
                        self.r_async(store, (body_with_invariant(d, inv, ys),),
                                     ("un", apply_invariant(inv, ys)),
                                     level + 1, node.children[1])
                case Imp() | All():
                    self.expect(node, ("storeL",), 1, c)
                    ix = node.index
                    self.need(ix is not None and store_lookup(store, ix) is None,
                              "store index missing or already used")
                    assert ix is not None
                    self.r_async(store + ((ix, c),), rest, rhs, level,
                                 node.children[0])
                case _:
                    raise ReplayError(f"unexpected workbench formula: {c!r}")
            return

        kind, f = rhs
        if kind == "un":
            match f:
                case Imp(a=a, b=b):
                    self.expect(node, ("impR",), 1, f)
                    self.r_async(store, (a,), ("un", b), level, node.children[0])
                case All():
                    self.expect(node, ("allR",), 1, f)
                    e = self.fresh_eigen(node.term, level + 1)
                    self.r_async(store, (), ("un", open_binder(f, e)),
                                 level + 1, node.children[0])
                case _:
                    self.expect(node, ("storeR",), 1, f)
                    self.r_async(store, (), ("st", f), level, node.children[0])
            return

        if node.rule == "decideL":
            self.need(len(node.children) == 1, "decideL arity")
            ix = node.index
            self.need(ix is not None, "decideL without an index")
            assert ix is not None
            g = store_lookup(store, ix)
            self.need(g is not None, f"decideL on an absent index {ix!r}")
            assert g is not None
            self.need(node.formula == g, "decideL: stored formula mismatch")
            self.r_left(store, g, f, level, node.children[0])
        elif node.rule == "decideR":
            self.expect(node, ("decideR",), 1, f)
            self.r_right(store, f, level, node.children[0])
        else:
            raise ReplayError(f"expected a decide record, found {node.rule}")

    def r_left(self, store: Store, focus: Formula, goal: Formula,
               level: int, node: TraceNode) -> None:
        match focus:
            case All():
                self.expect(node, ("allL",), 1, focus)
                w = self.scoped_witness(node.term, level)
                self.r_left(store, open_binder(focus, w), goal, level,
                            node.children[0])
            case Imp(a=a, b=b):
                self.expect(node, ("impL",), 2, focus)
                self.r_right(store, a, level, node.children[0])
                self.r_left(store, b, goal, level, node.children[1])
            case _:
                self.expect(node, ("releaseL",), 1, focus)
                self.r_async(store, (focus,), ("st", goal), level,
                             node.children[0])

    def r_right(self, store: Store, focus: Formula, level: int,
                node: TraceNode) -> None:
        match focus:
            case Or(a=a, b=b):
                self.expect(node, ("orR",), 1, focus)
                self.need(node.side in (1, 2), "orR without a side")
                sub = a if node.side == 1 else b
                self.r_right(store, sub, level, node.children[0])
            case And(a=a, b=b):
                self.expect(node, ("andR",), 2, focus)
                self.r_right(store, a, level, node.children[0])
                self.r_right(store, b, level, node.children[1])
            case Ex():
                self.expect(node, ("exR",), 1, focus)
                w = self.scoped_witness(node.term, level)
                self.r_right(store, open_binder(focus, w), level,
                             node.children[0])
            case Eq(l=l, r=r):
                self.expect(node, ("eqR",), 0, focus)
                self.need(l == r, "right equality is not reflexive when replayed")
            case Tt():
                self.expect(node, ("ttR",), 0, focus)
            case MuAtom(defn=d, args=ts):
                self.need(d is not SELF, "recursive marker in a replayed atom")
                if node.rule == "initial":
                    self.expect(node, ("initial",), 0, focus)
                    ix = node.index
                    self.need(ix is not None, "initial without an index")
                    assert ix is not None
                    g = store_lookup(store, ix)
                    self.need(isinstance(g, MuAtom) and g.defn is d
                              and g.args == ts,
                              "initial step does not match its store entry")
                else:
                    self.expect(node, ("unfoldR",), 1, focus)
                    self.r_right(store, unfold_mu(d, ts), level,
                                 node.children[0])
            case Imp() | All():
                self.expect(node, ("releaseR",), 1, focus)
                self.r_async(store, (), ("un", focus), level, node.children[0])
            case _:
                raise ReplayError(f"unexpected focus: {focus!r}")


# fields a rule's record may carry besides the principal formula; anything
# else present is tampering even if no check would read it
_RULE_FIELDS: dict[str, frozenset[str]] = {
    "exL": frozenset({"term"}),
    "allR": frozenset({"term"}),
    "allL": frozenset({"term"}),
    "exR": frozenset({"term"}),
    "freeze": frozenset({"index"}),
    "storeL": frozenset({"index"}),
    "decideL": frozenset({"index"}),
    "initial": frozenset({"index"}),
    "induct": frozenset({"term", "invariant"}),
    "induct_obvious": frozenset({"term", "invariant"}),
    "orR": frozenset({"side"}),
}
_EMPTY: frozenset = frozenset()


def _check_shape(trace: TraceNode) -> None:
    for n in trace.walk():
        allowed = _RULE_FIELDS.get(n.rule, _EMPTY)
        if n.formula is None:
            raise ReplayError(f"{n.rule}: record without a principal formula")
        for name, value in (("term", n.term), ("index", n.index),
                            ("invariant", n.invariant), ("side", n.side)):
            if value is not None and name not in allowed:
                raise ReplayError(f"{n.rule}: unexpected {name} field")


def explain_failure(lemmas, goal: Formula, trace: TraceNode) -> Optional[str]:
    """Replay a trace; None when it checks out, else a reason it does not."""
    try:
        _check_shape(trace)
        _Replay().r_async(tuple(lemmas), (), ("un", goal), 0, trace)
    except ReplayError as e:
        return str(e)
    except (RecursionError, TypeError, AttributeError) as e:
        return f"malformed trace: {e}"
    return None


def verify_trace(lemmas, goal: Formula, trace: TraceNode) -> bool:
    return explain_failure(lemmas, goal, trace) is None
