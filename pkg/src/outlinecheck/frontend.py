"""Theorem-file dialect: parsing, elaboration, and the session driver.

A `.thm` file is a sequence of declarations:

    Kind nat type.
    Type z nat.
    Type s nat -> nat.
    Define plus : nat -> nat -> nat -> prop by
      plus z N N ;
      plus (s M) N (s P) := plus M N P.
    Theorem plus0com : forall N, is_nat N -> plus N z N.
    ship "(induction 1 0 1)".

`%` starts a line comment.  Formulas are built from `forall`/`exists`
(with multiple binders before the comma), `->`, `\\/`, `/\\`, `=`, `true`,
`false`, and application; `->` binds loosest and associates right, then
`\\/`, then `/\\`.  Capitalised or not, a name in a theorem statement must
be bound by a quantifier or declared; in a definition clause, any name
that is not a declared constructor or predicate is a clause variable.

Elaboration compiles each Define into a least-fixed-point body by Clark
completion — one disjunct per clause, existentially closing the clause
variables over equations against the head patterns — and rejects
definitions whose recursive calls appear in a negative position.  Sorts
are first order and checked throughout.

A session checks the theorems in file order; each accepted theorem joins
the lemma table (under its name) for the ones after it.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Union

from . import kernel
from .kernel import Accepted, OutOfBudget, Rejected, ResourceLimits
from .fpc import Index, LemmaName
from .outline import OUTLINE_FPC, OutlineError, initial_state, parse_outline
from .syntax import (
    FF, SELF, TT, All, And, Bound, Definition, Eq, Ex, Formula, Imp,
    MuAtom, Or, Term, con, sym,
)
from .trace import TraceNode

# ---------------------------------------------------------------------------
# surface syntax trees (positions are deliberately not part of equality)


@dataclass(frozen=True)
class STerm:
    head: str
    args: tuple["STerm", ...] = ()


@dataclass(frozen=True)
class SAtom:
    pred: str
    args: tuple[STerm, ...] = ()


@dataclass(frozen=True)
class SEq:
    l: STerm
    r: STerm


@dataclass(frozen=True)
class SAnd:
    a: "SFormula"
    b: "SFormula"


@dataclass(frozen=True)
class SOr:
    a: "SFormula"
    b: "SFormula"


@dataclass(frozen=True)
class SImp:
    a: "SFormula"
    b: "SFormula"


@dataclass(frozen=True)
class SAll:
    names: tuple[str, ...]
    body: "SFormula"


@dataclass(frozen=True)
class SEx:
    names: tuple[str, ...]
    body: "SFormula"


@dataclass(frozen=True)
class STrue:
    pass


@dataclass(frozen=True)
class SFalse:
    pass


SFormula = Union[SAtom, SEq, SAnd, SOr, SImp, SAll, SEx, STrue, SFalse]


@dataclass(frozen=True)
class KindDecl:
    name: str


@dataclass(frozen=True)
class TypeDecl:
    names: tuple[str, ...]
    arg_sorts: tuple[str, ...]
    result: str


@dataclass(frozen=True)
class SClause:
    head_args: tuple[STerm, ...]
    body: Optional[SFormula]


@dataclass(frozen=True)
class DefineDecl:
    name: str
    arg_sorts: tuple[str, ...]
    clauses: tuple[SClause, ...]


@dataclass(frozen=True)
class TheoremDecl:
    name: str
    statement: SFormula
    ship: str


Decl = Union[KindDecl, TypeDecl, DefineDecl, TheoremDecl]


@dataclass(frozen=True)
class TheoremFile:
    decls: tuple[Decl, ...]


# ---------------------------------------------------------------------------
# lexer


class ParseError(Exception):
    def __init__(self, msg: str, line: int, col: int) -> None:
        super().__init__(f"{line}:{col}: {msg}")
        self.line = line
        self.col = col


_TOKEN = re.compile(
    r"""(?P<ws>\s+)
      | (?P<comment>%[^\n]*)
      | (?P<string>"[^"]*")
      | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
      | (?P<punct>:=|->|/\\|\\/|[.,:;()=])
    """,
    re.VERBOSE,
)

_KEYWORDS = {"Kind", "Type", "Define", "Theorem", "ship", "by",
             "type", "prop", "forall", "exists", "true", "false"}


@dataclass(frozen=True)
class _Tok:
    kind: str  # "ident" | "string" | "punct" | "eof"
    text: str
    line: int
    col: int


def _lex(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    line, col, pos = 1, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        lexeme = m.group(0)
        group = m.lastgroup
        if group == "ident":
            toks.append(_Tok("ident", lexeme, line, col))
        elif group == "string":
            toks.append(_Tok("string", lexeme[1:-1], line, col))
        elif group == "punct":
            toks.append(_Tok("punct", lexeme, line, col))
        nl = lexeme.count("\n")
        if nl:
            line += nl
            col = len(lexeme) - lexeme.rfind("\n")
        else:
            col += len(lexeme)
        pos = m.end()
    toks.append(_Tok("eof", "", line, col))
    return toks


# ---------------------------------------------------------------------------
# parser


class _Parser:
    def __init__(self, toks: list[_Tok]) -> None:
        self.toks = toks
        self.pos = 0

    def peek(self) -> _Tok:
        return self.toks[self.pos]

    def next(self) -> _Tok:
        t = self.toks[self.pos]
        if t.kind != "eof":
            self.pos += 1
        return t

    def fail(self, msg: str) -> ParseError:
        t = self.peek()
        return ParseError(msg, t.line, t.col)

    def expect(self, kind: str, text: Optional[str] = None) -> _Tok:
        t = self.peek()
        if t.kind != kind or (text is not None and t.text != text):
            want = text if text is not None else kind
            raise self.fail(f"expected {want!r}, found {t.text or t.kind!r}")
        return self.next()

    def at(self, kind: str, text: str) -> bool:
        t = self.peek()
        return t.kind == kind and t.text == text

    def eat(self, kind: str, text: str) -> bool:
        if self.at(kind, text):
            self.next()
            return True
        return False

    # -- declarations

    def file(self) -> TheoremFile:
        decls: list[Decl] = []
        while self.peek().kind != "eof":
            decls.append(self.decl())
        return TheoremFile(tuple(decls))

    def decl(self) -> Decl:
        t = self.peek()
        if t.kind == "ident" and t.text == "Kind":
            return self.kind_decl()
        if t.kind == "ident" and t.text == "Type":
            return self.type_decl()
        if t.kind == "ident" and t.text == "Define":
            return self.define_decl()
        if t.kind == "ident" and t.text == "Theorem":
            return self.theorem_decl()
        raise self.fail("expected a declaration (Kind, Type, Define, Theorem)")

    def name(self) -> str:
        t = self.peek()
        if t.kind != "ident" or t.text in _KEYWORDS:
            raise self.fail("expected a name")
        return self.next().text

    def kind_decl(self) -> KindDecl:
        self.expect("ident", "Kind")
        n = self.name()
        self.expect("ident", "type")
        self.expect("punct", ".")
        return KindDecl(n)

    def sort_arrow(self) -> tuple[tuple[str, ...], str]:
        sorts = [self.sort_name()]
        while self.eat("punct", "->"):
            sorts.append(self.sort_name())
        return tuple(sorts[:-1]), sorts[-1]

    def sort_name(self) -> str:
        t = self.peek()
        if t.kind == "ident" and (t.text == "prop" or t.text not in _KEYWORDS):
            return self.next().text
        raise self.fail("expected a sort name")

    def type_decl(self) -> TypeDecl:
        self.expect("ident", "Type")
        names = [self.name()]
        while self.eat("punct", ","):
            names.append(self.name())
        args, res = self.sort_arrow()
        self.expect("punct", ".")
        return TypeDecl(tuple(names), args, res)

    def define_decl(self) -> DefineDecl:
        self.expect("ident", "Define")
        n = self.name()
        self.expect("punct", ":")
        args, res = self.sort_arrow()
        if res != "prop":
            raise self.fail("a definition must end in prop")
        clauses: list[SClause] = []
        if not self.eat("punct", "."):
            self.expect("ident", "by")
            if not self.eat("punct", "."):
                clauses.append(self.clause(n))
                while self.eat("punct", ";"):
                    clauses.append(self.clause(n))
                self.expect("punct", ".")
        return DefineDecl(n, args, tuple(clauses))

    def clause(self, defname: str) -> SClause:
        t = self.peek()
        head = self.name()
        if head != defname:
            raise ParseError(f"clause head {head!r} does not match the "
                             f"definition {defname!r}", t.line, t.col)
        args: list[STerm] = []
        while self.peek().kind == "ident" and self.peek().text not in _KEYWORDS \
                or self.at("punct", "("):
            args.append(self.term_primary())
        body = self.formula() if self.eat("punct", ":=") else None
        return SClause(tuple(args), body)

    def theorem_decl(self) -> TheoremDecl:
        self.expect("ident", "Theorem")
        n = self.name()
        self.expect("punct", ":")
        stmt = self.formula()
        self.expect("punct", ".")
        self.expect("ident", "ship")
        s = self.expect("string")
        self.expect("punct", ".")
        return TheoremDecl(n, stmt, s.text)

    # -- formulas: imp (right) < or (left) < and (left) < unit

    def formula(self) -> SFormula:
        if self.at("ident", "forall") or self.at("ident", "exists"):
            quant = self.next().text
            names = [self.name()]
            while not self.eat("punct", ","):
                names.append(self.name())
            body = self.formula()
            cls = SAll if quant == "forall" else SEx
            return cls(tuple(names), body)
        a = self.f_or()
        if self.eat("punct", "->"):
            return SImp(a, self.formula())
        return a

    def f_or(self) -> SFormula:
        a = self.f_and()
        while self.eat("punct", "\\/"):
            a = SOr(a, self.f_and())
        return a

    def f_and(self) -> SFormula:
        a = self.f_unit()
        while self.eat("punct", "/\\"):
            a = SAnd(a, self.f_unit())
        return a

    def f_unit(self) -> SFormula:
        if self.eat("ident", "true"):
            return STrue()
        if self.eat("ident", "false"):
            return SFalse()
        if self.at("punct", "("):
            # a parenthesised formula, or a parenthesised term before '='
            save = self.pos
            self.next()
            inner = self.formula()
            self.expect("punct", ")")
            if self.at("punct", "="):
                self.pos = save
                l = self.term_primary()
                self.expect("punct", "=")
                return SEq(l, self.term())
            return inner
        l = self.term()
        if self.eat("punct", "="):
            return SEq(l, self.term())
        return SAtom(l.head, l.args)

    # -- terms: application by juxtaposition

    def term(self) -> STerm:
        head = self.term_primary()
        args: list[STerm] = []
        while (self.peek().kind == "ident" and self.peek().text not in _KEYWORDS) \
                or self.at("punct", "("):
            args.append(self.term_primary())
        if not args:
            return head
        if head.args:
            raise self.fail("a compound term cannot be applied further")
        return STerm(head.head, tuple(args))

    def term_primary(self) -> STerm:
        if self.eat("punct", "("):
            t = self.term()
            self.expect("punct", ")")
            return t
        t = self.peek()
        if t.kind == "ident" and t.text not in _KEYWORDS:
            return STerm(self.next().text)
        raise self.fail("expected a term")


def parse_file(text: str) -> TheoremFile:
    return _Parser(_lex(text)).file()


# ---------------------------------------------------------------------------
# pretty printing (inverse of the parser on well-formed files)


def _p_term(t: STerm, atomic: bool = False) -> str:
    if not t.args:
        return t.head
    s = t.head + " " + " ".join(_p_term(a, True) for a in t.args)
    return f"({s})" if atomic else s


def _p_formula(f: SFormula, prec: int = 0) -> str:
    # precedence: 0 body, 1 imp, 2 or, 3 and, 4 unit
    match f:
        case SAll(names=ns, body=b):
            s = f"forall {' '.join(ns)}, {_p_formula(b, 0)}"
            return f"({s})" if prec > 0 else s
        case SEx(names=ns, body=b):
            s = f"exists {' '.join(ns)}, {_p_formula(b, 0)}"
            return f"({s})" if prec > 0 else s
        case SImp(a=a, b=b):
            s = f"{_p_formula(a, 2)} -> {_p_formula(b, 1)}"
            return f"({s})" if prec > 1 else s
        case SOr(a=a, b=b):
            s = f"{_p_formula(a, 2)} \\/ {_p_formula(b, 3)}"
            return f"({s})" if prec > 2 else s
        case SAnd(a=a, b=b):
            s = f"{_p_formula(a, 3)} /\\ {_p_formula(b, 4)}"
            return f"({s})" if prec > 3 else s
        case SEq(l=l, r=r):
            return f"{_p_term(l, True)} = {_p_term(r, True)}"
        case SAtom(pred=p, args=ts):
            if not ts:
                return p
            s = p + " " + " ".join(_p_term(a, True) for a in ts)
            return f"({s})" if prec > 3 else s
        case STrue():
            return "true"
        case SFalse():
            return "false"
    raise TypeError(f"not a surface formula: {f!r}")


def print_file(file: TheoremFile) -> str:
    out: list[str] = []
    for d in file.decls:
        match d:
            case KindDecl(name=n):
                out.append(f"Kind {n} type.")
            case TypeDecl(names=ns, arg_sorts=args, result=res):
                arrow = " -> ".join(list(args) + [res])
                out.append(f"Type {', '.join(ns)} {arrow}.")
            case DefineDecl(name=n, arg_sorts=args, clauses=cs):
                arrow = " -> ".join(list(args) + ["prop"])
                if not cs:
                    out.append(f"Define {n} : {arrow}.")
                    continue
                lines = [f"Define {n} : {arrow} by"]
                for i, c in enumerate(cs):
                    head = " ".join([n] + [_p_term(a, True) for a in c.head_args])
                    body = "" if c.body is None else f" := {_p_formula(c.body, 1)}"
                    sep = ";" if i + 1 < len(cs) else "."
                    lines.append(f"  {head}{body} {sep}")
                out.append("\n".join(lines))
            case TheoremDecl(name=n, statement=st, ship=sh):
                out.append(f"Theorem {n} : {_p_formula(st)}.")
                out.append(f'ship "{sh}".')
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# elaboration


class ElabError(Exception):
    pass


@dataclass
class Elaborated:
    sorts: set[str]
    constructors: dict[str, tuple[tuple[str, ...], str]]
    definitions: dict[str, Definition]
    def_sorts: dict[str, tuple[str, ...]]
    theorems: list[TheoremDecl]
    goals: dict[str, Formula]


class _Elab:
    def __init__(self) -> None:
        self.sorts: set[str] = set()
        self.constructors: dict[str, tuple[tuple[str, ...], str]] = {}
        self.definitions: dict[str, Definition] = {}
        self.def_sorts: dict[str, tuple[str, ...]] = {}

    # -- terms; env maps a bound name to its binder depth

    def term(self, t: STerm, env: dict[str, int], depth: int,
             var_sorts: dict[str, Optional[str]],
             expected: Optional[str]) -> Term:
        if t.head in env and not t.args:
            seen = var_sorts.get(t.head)
            if seen is None:
                var_sorts[t.head] = expected
            elif expected is not None and seen != expected:
                raise ElabError(f"{t.head} used at sorts {seen} and {expected}")
            return Bound(depth - env[t.head] - 1)
        if t.head in env:
            raise ElabError(f"variable {t.head} cannot take arguments")
        ctor = self.constructors.get(t.head)
        if ctor is None:
            raise ElabError(f"undeclared symbol: {t.head}")
        arg_sorts, res = ctor
        if expected is not None and res != expected:
            raise ElabError(f"{t.head} has sort {res}, expected {expected}")
        if len(t.args) != len(arg_sorts):
            raise ElabError(f"{t.head} expects {len(arg_sorts)} arguments,"
                            f" got {len(t.args)}")
        return con(t.head, *(self.term(a, env, depth, var_sorts, s)
                             for a, s in zip(t.args, arg_sorts)))

    def term_sort(self, t: STerm, var_sorts: dict[str, Optional[str]]
                  ) -> Optional[str]:
        if t.head in self.constructors:
            return self.constructors[t.head][1]
        return var_sorts.get(t.head)

    # -- formulas

    def formula(self, f: SFormula, env: dict[str, int], depth: int,
                var_sorts: dict[str, Optional[str]],
                selfname: Optional[str]) -> Formula:
        match f:
            case STrue():
                return TT
            case SFalse():
                return FF
            case SEq(l=l, r=r):
                s = self.term_sort(l, var_sorts)
                if s is None:
                    s = self.term_sort(r, var_sorts)
                lt = self.term(l, env, depth, var_sorts, s)
                rt = self.term(r, env, depth, var_sorts, s)
                return Eq(lt, rt)
            case SAnd(a=a, b=b):
                return And(self.formula(a, env, depth, var_sorts, selfname),
                           self.formula(b, env, depth, var_sorts, selfname))
            case SOr(a=a, b=b):
                return Or(self.formula(a, env, depth, var_sorts, selfname),
                          self.formula(b, env, depth, var_sorts, selfname))
            case SImp(a=a, b=b):
                return Imp(self.formula(a, env, depth, var_sorts, selfname),
                           self.formula(b, env, depth, var_sorts, selfname))
            case SAll(names=ns, body=b) | SEx(names=ns, body=b):
                env2 = dict(env)
                for i, n in enumerate(ns):
                    env2[n] = depth + i
                inner = self.formula(b, env2, depth + len(ns), var_sorts, selfname)
                wrap = All if isinstance(f, SAll) else Ex
                for _ in ns:
                    inner = wrap(inner)
                return inner
            case SAtom(pred=p, args=ts):
                if p in env and not ts:
                    raise ElabError(f"{p} is a term variable, not a predicate")
                if p == selfname:
                    arg_sorts = self.def_sorts[p]
                    dref = SELF
                elif p in self.definitions:
                    arg_sorts = self.def_sorts[p]
                    dref = self.definitions[p]
                else:
                    raise ElabError(f"undeclared predicate: {p}")
                if len(ts) != len(arg_sorts):
                    raise ElabError(f"{p} expects {len(arg_sorts)} arguments,"
                                    f" got {len(ts)}")
                return MuAtom(dref, tuple(
                    self.term(a, env, depth, var_sorts, s)
                    for a, s in zip(ts, arg_sorts)))
        raise TypeError(f"not a surface formula: {f!r}")

    # -- declarations

    def kind(self, d: KindDecl) -> None:
        if d.name in self.sorts:
            raise ElabError(f"duplicate kind: {d.name}")
        self.sorts.add(d.name)

    def typedecl(self, d: TypeDecl) -> None:
        for s in list(d.arg_sorts) + [d.result]:
            if s not in self.sorts:
                raise ElabError(f"undeclared sort: {s}")
        for n in d.names:
            if n in self.constructors or n in self.definitions:
                raise ElabError(f"duplicate symbol: {n}")
            self.constructors[n] = (d.arg_sorts, d.result)

    def define(self, d: DefineDecl) -> None:
        if d.name in self.definitions or d.name in self.constructors:
            raise ElabError(f"duplicate symbol: {d.name}")
        for s in d.arg_sorts:
            if s not in self.sorts:
                raise ElabError(f"undeclared sort: {s}")
        arity = len(d.arg_sorts)
        self.def_sorts[d.name] = d.arg_sorts

        disjuncts: list[Formula] = []
        for c in d.clauses:
            if len(c.head_args) != arity:
                raise ElabError(f"clause of {d.name} has {len(c.head_args)}"
                                f" head arguments, expected {arity}")
            cvars: list[str] = []

            def collect(t: STerm) -> None:
                if t.head not in self.constructors and not t.args:
                    if t.head in self.definitions or t.head == d.name:
                        raise ElabError(f"predicate {t.head} used as a term")
                    if t.head not in cvars:
                        cvars.append(t.head)
                for a in t.args:
                    collect(a)

            for h in c.head_args:
                collect(h)
            if c.body is not None:
                for t in _formula_terms_surface(c.body):
                    collect(t)

            m = len(cvars)
            # inside m existentials: clause var j -> Bound(m-1-j),
            # definition parameter i -> Bound(m+i)
            env = {v: j for j, v in enumerate(cvars)}
            var_sorts: dict[str, Optional[str]] = {}
            params = [Bound(m + i) for i in range(arity)]
            eqs: list[Formula] = []
            for i, h in enumerate(c.head_args):
                ht = self.term(h, env, m, var_sorts, d.arg_sorts[i])
                eqs.append(Eq(params[i], ht))
            parts = list(eqs)
            if c.body is not None:
                parts.append(self.formula(c.body, env, m, var_sorts, d.name))
            if not parts:
                parts = [TT]
            body: Formula = parts[-1]
            for p in reversed(parts[:-1]):
                body = And(p, body)
            for _ in range(m):
                body = Ex(body)
            disjuncts.append(body)

        if not disjuncts:
            full: Formula = FF
        else:
            full = disjuncts[-1]
            for p in reversed(disjuncts[:-1]):
                full = Or(p, full)
        _check_positivity(full, positive=True, name=d.name)
        self.definitions[d.name] = Definition(sym(d.name), arity, full)

    def theorem(self, d: TheoremDecl, names: set[str]) -> Formula:
        if d.name in names:
            raise ElabError(f"duplicate theorem name: {d.name}")
        var_sorts: dict[str, Optional[str]] = {}
        return self.formula(d.statement, {}, 0, var_sorts, None)


def _formula_terms_surface(f: SFormula):
    match f:
        case SEq(l=l, r=r):
            yield l
            yield r
        case SAtom(args=ts):
            yield from ts
        case SAnd(a=a, b=b) | SOr(a=a, b=b) | SImp(a=a, b=b):
            yield from _formula_terms_surface(a)
            yield from _formula_terms_surface(b)
        case SAll(body=b) | SEx(body=b):
            yield from _formula_terms_surface(b)
        case _:
            return


def _check_positivity(f: Formula, positive: bool, name: str) -> None:
    match f:
        case MuAtom(defn=d):
            if d is SELF and not positive:
                raise ElabError(f"{name} recurses in a negative position")
        case And(a=a, b=b) | Or(a=a, b=b):
            _check_positivity(a, positive, name)
            _check_positivity(b, positive, name)
        case Imp(a=a, b=b):
            _check_positivity(a, not positive, name)
            _check_positivity(b, positive, name)
        case All(body=b) | Ex(body=b):
            _check_positivity(b, positive, name)
        case _:
            return


def elaborate(file: TheoremFile) -> Elaborated:
    el = _Elab()
    theorems: list[TheoremDecl] = []
    goals: dict[str, Formula] = {}
    for d in file.decls:
        match d:
            case KindDecl():
                el.kind(d)
            case TypeDecl():
                el.typedecl(d)
            case DefineDecl():
                el.define(d)
            case TheoremDecl():
                goals[d.name] = el.theorem(d, set(goals))
                theorems.append(d)
    return Elaborated(el.sorts, el.constructors, el.definitions,
                      el.def_sorts, theorems, goals)


# ---------------------------------------------------------------------------
# session driver


@dataclass(frozen=True)
class TheoremResult:
    name: str
    outcome: str  # "ok" | "fail" | "budget"
    detail: str
    steps: int
    goal: Formula
    trace: Optional[TraceNode] = None
    lemmas: tuple[tuple[Index, Formula], ...] = ()


def run_session(file: TheoremFile, limits: Optional[ResourceLimits] = None,
                stop_on_failure: bool = False) -> list[TheoremResult]:
    """Check every theorem in order, accumulating accepted ones as lemmas."""
    el = elaborate(file)
    lemmas: list[tuple[Index, Formula]] = []
    results: list[TheoremResult] = []
    for thm in el.theorems:
        goal = el.goals[thm.name]
        table = tuple(ix.name for ix, _ in lemmas)
        try:
            cert = initial_state(parse_outline(thm.ship), table)
        except OutlineError as e:
            results.append(TheoremResult(thm.name, "fail",
                                         f"bad certificate: {e}", 0, goal))
            if stop_on_failure:
                break
            continue
        outcome = kernel.check(lemmas, goal, cert, OUTLINE_FPC, limits)
        match outcome:
            case Accepted(trace=tr, steps=n):
                results.append(TheoremResult(thm.name, "ok", "", n, goal,
                                             tr, tuple(lemmas)))
                lemmas.append((LemmaName(sym(thm.name)), goal))
            case Rejected(steps=n):
                results.append(TheoremResult(
                    thm.name, "fail", "no proof within the certificate",
                    n, goal))
                if stop_on_failure:
                    break
            case OutOfBudget(steps=n):
                results.append(TheoremResult(thm.name, "budget",
                                             "step limit reached", n, goal))
                if stop_on_failure:
                    break
    return results
