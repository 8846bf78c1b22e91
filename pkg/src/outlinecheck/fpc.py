"""The clerk and expert interface between the kernel and certificates.

A certificate is an opaque value: the kernel never inspects it, it only
threads it through the predicates of an `FpcDefinition`.  Clerks accompany
invertible rules and merely transform the certificate; experts accompany
choice rules and return the alternatives the kernel is allowed to try, in
order.  Every predicate must be pure: same inputs, same outputs, and no
mutation of the certificate or of anything reachable from it.

Returning an empty list forbids the corresponding rule outright, which is
how a certificate format expresses budgets and gating.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Optional, Sequence, Union

from .syntax import InvariantAbs, Sym, Term

Certificate = Any


# -- store indexes


@dataclass(frozen=True)
class LemmaName:
    name: Sym

    def __repr__(self) -> str:
        return f"lemma:{self.name}"


@dataclass(frozen=True)
class Hyp:
    serial: int

    def __repr__(self) -> str:
        return f"hyp:{self.serial}"


Index = Union[LemmaName, Hyp]


# -- option values returned by experts


class _AnyFrozen:
    def __repr__(self) -> str:
        return "<any-frozen>"


ANY_FROZEN = _AnyFrozen()
IndexOption = Union[Index, _AnyFrozen]


class _Fresh:
    def __repr__(self) -> str:
        return "<fresh>"


FRESH = _Fresh()
TermOption = Union[Term, _Fresh]


class _Obvious:
    def __repr__(self) -> str:
        return "<obvious>"


OBVIOUS = _Obvious()
InvariantOption = Union[InvariantAbs, _Obvious]


class FpcDefinition:
    """Base class; the default behaviour forbids everything.

    Subclasses override the predicates they care about.  Alternatives are
    returned as sequences and tried by the kernel in the given order.
    """

    # -- asynchronous clerks

    def andl_clerk(self, cert: Certificate) -> Sequence[Certificate]:
        return ()

    def orl_clerk(self, cert: Certificate) -> Sequence[tuple[Certificate, Certificate]]:
        return ()

    def exl_clerk(self, cert: Certificate) -> Sequence[Certificate]:
        return ()

    def eql_clerk(self, cert: Certificate) -> Sequence[Certificate]:
        return ()

    def ttl_clerk(self, cert: Certificate) -> Sequence[Certificate]:
        return ()

    def ffl_clerk(self, cert: Certificate) -> Sequence[Certificate]:
        return ()

    def impr_clerk(self, cert: Certificate) -> Sequence[Certificate]:
        return ()

    def allr_clerk(self, cert: Certificate) -> Sequence[Certificate]:
        return ()

    def store_clerk(self, cert: Certificate) -> Sequence[tuple[Certificate, Index]]:
        """Consulted when a formula moves to the store; computes its index."""
        return ()

    # -- experts

    def decide_expert(self, cert: Certificate) -> Sequence[tuple[Certificate, Index]]:
        return ()

    def decide_right_expert(self, cert: Certificate) -> Sequence[Certificate]:
        return ()

    def initial_expert(self, cert: Certificate) -> Sequence[IndexOption]:
        return ()

    def or_expert(self, cert: Certificate) -> Sequence[tuple[Certificate, int]]:
        """Alternatives are (continuation, side) with side 1 or 2."""
        return ()

    def and_expert(self, cert: Certificate) -> Sequence[tuple[Certificate, Certificate]]:
        return ()

    def some_expert(self, cert: Certificate) -> Sequence[tuple[Certificate, TermOption]]:
        """Witness choices for right existentials and left universals."""
        return ()

    def true_expert(self, cert: Certificate) -> Sequence[Certificate]:
        return ()

    def unfold_left_expert(self, cert: Certificate) -> Sequence[Certificate]:
        return ()

    def unfold_right_expert(self, cert: Certificate) -> Sequence[Certificate]:
        return ()

    def ind_expert(
        self, cert: Certificate
    ) -> Sequence[tuple[Optional[Certificate], Certificate, InvariantOption]]:
        """Alternatives are (left-premise cert, invariance-premise cert, S).

        With OBVIOUS for S the kernel synthesises the invariant itself and
        discharges the left premise canonically; the first component is then
        ignored and may be None.
        """
        return ()
