"""outlinecheck: a proof-outline checker for inductive theorems.

Small certificates — decide and unfold budgets, lemma lists, lemma trees —
are elaborated into full focused-sequent-calculus proofs over least
fixed-point definitions, with every accepted proof backed by a replayable
trace.
"""

from .fpc import (
    ANY_FROZEN, FRESH, OBVIOUS, Certificate, FpcDefinition, Hyp, Index,
    LemmaName,
)
from .frontend import (
    ElabError, ParseError, TheoremFile, TheoremResult, elaborate, parse_file,
    print_file, run_session,
)
from .kernel import (
    Accepted, CheckResult, OutOfBudget, Rejected, ResourceLimits, check,
    synthesize_obvious_invariants,
)
from .oracle import UNKNOWN, eval_ground
from .outline import (
    Induction, LemmaTree, OutlineError, OutlineFpc, OutlineState, WithLemmas,
    OUTLINE_FPC, initial_state, parse_outline,
)
from .replay import ReplayError, explain_failure, verify_trace
from .syntax import (
    FF, SELF, TT, All, And, App, Bound, Definition, EVar, Eq, Ex, Ff,
    Formula, Imp, InvariantAbs, MVar, MuAtom, Or, Polarity, StructuralError,
    Term, Tt, con, formula_subst_bound, fresh_evar, fresh_mvar, open_binder,
    polarity_of, sym, unfold_mu,
)
from .trace import (
    TraceFormatError, TraceNode, count_rule, trace_from_lines, trace_to_lines,
)
from .unify import CLASH, OK, STUCK, BindingStore, StaleCheckpointError

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
