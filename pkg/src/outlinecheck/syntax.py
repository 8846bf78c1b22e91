"""Terms, formulas and least-fixed-point definitions.

Terms are first order.  Eigenvariables (EVar) are introduced by right
universals and left existentials; metavariables (MVar) stand for terms yet
to be determined.  Both carry a scope level: levels grow as quantifier rules
fire along a branch, and an MVar of level k may never end up bound to a term
mentioning an EVar of a strictly larger level.

Bound variables inside formula binders use positional (de Bruijn) indices.
A `Bound` never escapes its binder in a well-formed formula; the kernel only
ever works with opened bodies.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterator, Union

# ---------------------------------------------------------------------------
# symbols

_SYMBOLS: dict[str, "Sym"] = {}


@dataclass(frozen=True)
class Sym:
    """An interned constant or constructor name."""

    name: str

    def __repr__(self) -> str:
        return self.name


def sym(name: str) -> Sym:
    """Intern `name`.  The same string always yields the same Sym."""
    s = _SYMBOLS.get(name)
    if s is None:
        s = Sym(name)
        _SYMBOLS[name] = s
    return s


# ---------------------------------------------------------------------------
# terms

_ids = itertools.count(1)


@dataclass(frozen=True)
class EVar:
    id: int
    level: int

    def __repr__(self) -> str:
        return f"e{self.id}@{self.level}"


@dataclass(frozen=True)
class MVar:
    id: int
    level: int

    def __repr__(self) -> str:
        return f"?{self.id}@{self.level}"


@dataclass(frozen=True)
class Bound:
    """A positional reference to an enclosing binder (0 = innermost)."""

    index: int

    def __repr__(self) -> str:
        return f"#{self.index}"


@dataclass(frozen=True)
class App:
    head: Sym
    args: tuple["Term", ...] = ()

    def __repr__(self) -> str:
        if not self.args:
            return self.head.name
        return f"({self.head.name} {' '.join(map(repr, self.args))})"


Term = Union[EVar, MVar, Bound, App]


def con(name: str, *args: Term) -> App:
    """Convenience constructor application."""
    return App(sym(name), tuple(args))


def fresh_evar(level: int) -> EVar:
    """A globally unique eigenvariable at the given level."""
    return EVar(next(_ids), level)


def fresh_mvar(level: int) -> MVar:
    return MVar(next(_ids), level)


# ---------------------------------------------------------------------------
# formulas


class _Self:
    """Marker for the recursive occurrence inside a definition body."""

    def __repr__(self) -> str:
        return "<self>"


SELF = _Self()


@dataclass(frozen=True)
class Definition:
    """A least-fixed-point predicate definition.

    The body is a formula over `arity` parameters; parameter i appears as
    Bound(depth + i) under `depth` intervening binders, and recursive calls
    appear as MuAtom(SELF, args).  The body takes no part in equality so a
    definition can be compared and hashed cheaply by name.
    """

    name: Sym
    arity: int
    body: "Formula" = field(compare=False)

    def __repr__(self) -> str:
        return f"<def {self.name}/{self.arity}>"


@dataclass(frozen=True)
class Eq:
    l: Term
    r: Term


@dataclass(frozen=True)
class And:
    a: "Formula"
    b: "Formula"


@dataclass(frozen=True)
class Or:
    a: "Formula"
    b: "Formula"


@dataclass(frozen=True)
class Imp:
    a: "Formula"
    b: "Formula"


@dataclass(frozen=True)
class All:
    body: "Formula"


@dataclass(frozen=True)
class Ex:
    body: "Formula"


@dataclass(frozen=True)
class MuAtom:
    defn: Union[Definition, _Self]
    args: tuple[Term, ...]


@dataclass(frozen=True)
class Tt:
    pass


@dataclass(frozen=True)
class Ff:
    pass


TT = Tt()
FF = Ff()

Formula = Union[Eq, And, Or, Imp, All, Ex, MuAtom, Tt, Ff]


class Polarity(Enum):
    POS = "positive"
    NEG = "negative"


def polarity_of(f: Formula) -> Polarity:
    """Equality, conjunction, disjunction, existentials, fixed-point atoms
    and the units are positive; implication and universals are negative."""
    match f:
        case Imp() | All():
            return Polarity.NEG
        case Eq() | And() | Or() | Ex() | MuAtom() | Tt() | Ff():
            return Polarity.POS
    raise TypeError(f"not a formula: {f!r}")


class StructuralError(Exception):
    """An ill-formed term, formula or rule application."""


# ---------------------------------------------------------------------------
# substitution of bound variables

def _shift_term(t: Term, by: int) -> Term:
    """Raise every positional index in a (binder-free) term by `by`."""
    if by == 0:
        return t
    match t:
        case Bound(index=j):
            return Bound(j + by)
        case App(head=h, args=ts):
            return App(h, tuple(_shift_term(x, by) for x in ts))
        case _:
            return t


def term_subst_bound(t: Term, args: tuple[Term, ...], depth: int) -> Term:
    """Replace Bound(depth + i) by args[i] lifted to the local depth; shift
    higher indices down."""
    match t:
        case Bound(index=j):
            if j < depth:
                return t
            if j < depth + len(args):
                return _shift_term(args[j - depth], depth)
            return Bound(j - len(args))
        case App(head=h, args=ts):
            return App(h, tuple(term_subst_bound(x, args, depth) for x in ts))
        case _:
            return t


def _subst(f: Formula, args: tuple[Term, ...], depth: int,
           self_fn: Callable[[tuple[Term, ...]], Formula]) -> Formula:
    match f:
        case Eq(l=l, r=r):
            return Eq(term_subst_bound(l, args, depth), term_subst_bound(r, args, depth))
        case And(a=a, b=b):
            return And(_subst(a, args, depth, self_fn), _subst(b, args, depth, self_fn))
        case Or(a=a, b=b):
            return Or(_subst(a, args, depth, self_fn), _subst(b, args, depth, self_fn))
        case Imp(a=a, b=b):
            return Imp(_subst(a, args, depth, self_fn), _subst(b, args, depth, self_fn))
        case All(body=b):
            return All(_subst(b, args, depth + 1, self_fn))
        case Ex(body=b):
            return Ex(_subst(b, args, depth + 1, self_fn))
        case MuAtom(defn=d, args=ts):
            ts2 = tuple(term_subst_bound(x, args, depth) for x in ts)
            if d is SELF:
                return self_fn(ts2)
            return MuAtom(d, ts2)
        case Tt() | Ff():
            return f
    raise TypeError(f"not a formula: {f!r}")


def _no_self(args: tuple[Term, ...]) -> Formula:
    raise StructuralError("unexpected recursive marker outside a definition body")


def formula_subst_bound(f: Formula, args: tuple[Term, ...], depth: int = 0) -> Formula:
    return _subst(f, args, depth, _no_self)


def open_binder(f: Formula, t: Term) -> Formula:
    """Open a quantified formula with `t` for the bound variable."""
    match f:
        case All(body=b) | Ex(body=b):
            return formula_subst_bound(b, (t,), 0)
    raise StructuralError(f"open_binder on non-binder: {f!r}")


def unfold_mu(d: Definition, args: tuple[Term, ...]) -> Formula:
    """One unfolding of the fixed point: B (mu B) args."""
    if len(args) != d.arity:
        raise StructuralError(f"{d.name} expects {d.arity} arguments, got {len(args)}")
    return _subst(d.body, args, 0, lambda ts: MuAtom(d, ts))


# ---------------------------------------------------------------------------
# invariants


@dataclass(frozen=True)
class InvariantAbs:
    """An `arity`-ary predicate abstraction, represented like a definition
    body: parameter i appears as Bound(depth + i).  Used as an induction
    invariant; contains no recursive marker and no free variables."""

    arity: int
    body: Formula


def apply_invariant(s: InvariantAbs, args: tuple[Term, ...]) -> Formula:
    if len(args) != s.arity:
        raise StructuralError(f"invariant expects {s.arity} arguments, got {len(args)}")
    return _subst(s.body, args, 0, _no_self)


def body_with_invariant(d: Definition, s: InvariantAbs, args: tuple[Term, ...]) -> Formula:
    """B S args: the definition body with the invariant for recursive calls."""
    if len(args) != d.arity:
        raise StructuralError(f"{d.name} expects {d.arity} arguments, got {len(args)}")
    return _subst(d.body, args, 0, lambda ts: apply_invariant(s, ts))


def close_term(t: Term, mapping: dict[EVar, int], depth: int) -> Term:
    """Abstract eigenvariables: e becomes Bound(depth + mapping[e])."""
    match t:
        case EVar():
            i = mapping.get(t)
            return t if i is None else Bound(depth + i)
        case App(head=h, args=ts):
            return App(h, tuple(close_term(x, mapping, depth) for x in ts))
        case _:
            return t


def close_formula(f: Formula, mapping: dict[EVar, int], depth: int = 0) -> Formula:
    match f:
        case Eq(l=l, r=r):
            return Eq(close_term(l, mapping, depth), close_term(r, mapping, depth))
        case And(a=a, b=b):
            return And(close_formula(a, mapping, depth), close_formula(b, mapping, depth))
        case Or(a=a, b=b):
            return Or(close_formula(a, mapping, depth), close_formula(b, mapping, depth))
        case Imp(a=a, b=b):
            return Imp(close_formula(a, mapping, depth), close_formula(b, mapping, depth))
        case All(body=b):
            return All(close_formula(b, mapping, depth + 1))
        case Ex(body=b):
            return Ex(close_formula(b, mapping, depth + 1))
        case MuAtom(defn=d, args=ts):
            return MuAtom(d, tuple(close_term(x, mapping, depth) for x in ts))
        case Tt() | Ff():
            return f
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# traversal helpers

def term_vars(t: Term) -> Iterator[Union[EVar, MVar]]:
    match t:
        case EVar() | MVar():
            yield t
        case App(args=ts):
            for x in ts:
                yield from term_vars(x)


def formula_terms(f: Formula) -> Iterator[Term]:
    match f:
        case Eq(l=l, r=r):
            yield l
            yield r
        case And(a=a, b=b) | Or(a=a, b=b) | Imp(a=a, b=b):
            yield from formula_terms(a)
            yield from formula_terms(b)
        case All(body=b) | Ex(body=b):
            yield from formula_terms(b)
        case MuAtom(args=ts):
            yield from ts
        case Tt() | Ff():
            return


def formula_vars(f: Formula) -> Iterator[Union[EVar, MVar]]:
    for t in formula_terms(f):
        yield from term_vars(t)


def free_bound_indices(f: Formula) -> set[int]:
    """Indices of unbound positional variables (empty for a closed formula)."""
    out: set[int] = set()

    def go_t(t: Term, depth: int) -> None:
        match t:
            case Bound(index=j):
                if j >= depth:
                    out.add(j - depth)
            case App(args=ts):
                for x in ts:
                    go_t(x, depth)

    def go_f(g: Formula, depth: int) -> None:
        match g:
            case Eq(l=l, r=r):
                go_t(l, depth)
                go_t(r, depth)
            case And(a=a, b=b) | Or(a=a, b=b) | Imp(a=a, b=b):
                go_f(a, depth)
                go_f(b, depth)
            case All(body=b) | Ex(body=b):
                go_f(b, depth + 1)
            case MuAtom(args=ts):
                for x in ts:
                    go_t(x, depth)

    go_f(f, 0)
    return out
