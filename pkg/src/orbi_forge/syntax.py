"""Core abstract syntax shared by every stage of the toolchain.

Bound variables are nameless: a ``Var`` carries the number of binders between
its occurrence and the binder that introduced it.  Surface names survive only
as printing hints on the binders themselves, so alpha-equivalence and
capture-avoiding substitution are plain structural recursion.  Nothing in
this module consults a signature.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union


@dataclass(frozen=True)
class Loc:
    """1-based source position."""

    line: int
    col: int

    def __str__(self) -> str:
        return f"{self.line}:{self.col}"


NO_LOC = Loc(0, 0)

SECTIONS = ("Syntax", "Judgments", "Rules", "Schemas", "Definitions", "Directives", "Theorems")
SYSTEMS = ("hy", "ab", "bel", "tw")

# Name used when the `type` keyword leaks into a type position; the checker
# rejects any type mentioning this pseudo-family.
TYPE_ATOM = "type"


# ------------------------------------------------------------------ terms


class Term:
    __slots__ = ()


@dataclass(frozen=True)
class Var(Term):
    index: int


@dataclass(frozen=True)
class Const(Term):
    name: str


@dataclass(frozen=True)
class Lam(Term):
    hint: str
    body: Term


@dataclass(frozen=True)
class App(Term):
    fn: Term
    arg: Term


def spine(t: Term) -> tuple[Term, tuple[Term, ...]]:
    """Split left-nested applications into (head, args)."""
    args: list[Term] = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fn
    return t, tuple(reversed(args))


def apply_spine(head: Term, args) -> Term:
    t = head
    for a in args:
        t = App(t, a)
    return t


# ------------------------------------------------------------------ types


class Tp:
    __slots__ = ()


@dataclass(frozen=True)
class AtomApp(Tp):
    family: str
    args: tuple[Term, ...] = ()


@dataclass(frozen=True)
class Arrow(Tp):
    dom: Tp
    cod: Tp


@dataclass(frozen=True)
class Pi(Tp):
    hint: str
    dom: Tp
    cod: Tp  # scopes one binder


# ------------------------------------------------------------------ kinds


class Kind:
    __slots__ = ()


@dataclass(frozen=True)
class Type(Kind):
    pass


@dataclass(frozen=True)
class KArrow(Kind):
    dom: Tp
    cod: Kind


@dataclass(frozen=True)
class KPi(Kind):
    hint: str
    dom: Tp
    cod: Kind  # scopes one binder


# ----------------------------------------------------------- declarations


@dataclass(frozen=True)
class ConstDecl:
    name: str
    tp: Tp
    loc: Loc = field(default=NO_LOC, compare=False)


@dataclass(frozen=True)
class FamDecl:
    name: str
    kind: Kind
    loc: Loc = field(default=NO_LOC, compare=False)


Decl = Union[ConstDecl, FamDecl]


# ---------------------------------------------------------------- schemas


@dataclass(frozen=True)
class Block:
    """Ordered telescope of labelled assumptions.

    Entry types may reference earlier entries of the same block through Var
    indices (the previous entry is Var(0)).  Labels are printing hints and
    matching material for the linter only.
    """

    entries: tuple[tuple[str, Tp], ...]


@dataclass(frozen=True)
class Schema:
    name: str
    alternatives: tuple[Block, ...]
    loc: Loc = field(default=NO_LOC, compare=False)


# -------------------------------------------------------- context patterns


class CtxPattern:
    __slots__ = ()


@dataclass(frozen=True)
class EmptyCtx(CtxPattern):
    pass


@dataclass(frozen=True)
class CtxVar(CtxPattern):
    name: str


@dataclass(frozen=True)
class Snoc(CtxPattern):
    prefix: CtxPattern
    label: str
    block: Block


def ctx_head_var(c: CtxPattern):
    """The context variable at the head of a pattern, or None."""
    while isinstance(c, Snoc):
        c = c.prefix
    return c.name if isinstance(c, CtxVar) else None


def ctx_blocks(c: CtxPattern) -> tuple[tuple[str, Block], ...]:
    out = []
    while isinstance(c, Snoc):
        out.append((c.label, c.block))
        c = c.prefix
    return tuple(reversed(out))


# ------------------------------------------------------------ propositions


class Prp:
    __slots__ = ()


@dataclass(frozen=True)
class RelApp(Prp):
    name: str
    ctxs: tuple[CtxPattern, ...] = ()


@dataclass(frozen=True)
class Judgment(Prp):
    ctx: CtxPattern
    family: str
    args: tuple[Term, ...] = ()


@dataclass(frozen=True)
class TermEq(Prp):
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class TrueP(Prp):
    pass


@dataclass(frozen=True)
class FalseP(Prp):
    pass


@dataclass(frozen=True)
class And(Prp):
    lhs: Prp
    rhs: Prp


@dataclass(frozen=True)
class Or(Prp):
    lhs: Prp
    rhs: Prp


@dataclass(frozen=True)
class Imp(Prp):
    lhs: Prp
    rhs: Prp


@dataclass(frozen=True)
class ForallCtx(Prp):
    var: str
    schema: str
    body: Prp


@dataclass(frozen=True)
class ForallTm(Prp):
    var: str
    tp: Tp
    body: Prp


@dataclass(frozen=True)
class ExistsTm(Prp):
    var: str
    tp: Tp
    body: Prp


# ------------------------------------------------- definitions / theorems


@dataclass(frozen=True)
class InductiveDef:
    name: str
    params: tuple[tuple[str, str], ...]  # (context var, schema name)
    clauses: tuple[tuple[str, Prp], ...]
    loc: Loc = field(default=NO_LOC, compare=False)


@dataclass(frozen=True)
class Theorem:
    name: str
    statement: Prp
    loc: Loc = field(default=NO_LOC, compare=False)


@dataclass(frozen=True)
class Directive:
    what: str  # wf | explicit | implicit
    systems: tuple[str, ...]
    dest: str
    dest_is_ctx: bool = False
    loc: Loc = field(default=NO_LOC, compare=False)


@dataclass(frozen=True)
class Separator:
    name: str
    loc: Loc = field(default=NO_LOC, compare=False)


# -------------------------------------------------------------- documents


@dataclass(frozen=True)
class OrbiSpec:
    """A parsed .orbi document.

    ``items`` keeps every declaration in source order together with the
    section it was written under; the per-section views below are derived.
    The raw source and section spans are retained so that passthrough
    targets can reproduce input sections byte for byte.
    """

    items: tuple[tuple[str, object], ...] = ()
    source: str = field(default="", compare=False, repr=False)
    section_spans: tuple[tuple[str, int, int], ...] = field(default=(), compare=False, repr=False)

    def _nodes(self, section, kinds):
        return tuple(n for s, n in self.items if s == section and isinstance(n, kinds))

    @property
    def syntax_decls(self):
        return self._nodes("Syntax", (ConstDecl, FamDecl))

    @property
    def judgment_decls(self):
        return self._nodes("Judgments", (ConstDecl, FamDecl))

    @property
    def rules(self):
        return self._nodes("Rules", (ConstDecl, FamDecl))

    @property
    def schemas(self):
        return tuple(n for _, n in self.items if isinstance(n, Schema))

    @property
    def definitions(self):
        return tuple(n for _, n in self.items if isinstance(n, InductiveDef))

    @property
    def directives(self):
        return tuple(n for _, n in self.items if isinstance(n, Directive))

    @property
    def theorems(self):
        return tuple(n for _, n in self.items if isinstance(n, Theorem))

    def decls_in_order(self):
        return tuple((s, n) for s, n in self.items if isinstance(n, (ConstDecl, FamDecl)))

    def section_text(self, section: str) -> str:
        """Raw source of a section (separator lines excluded)."""
        parts = []
        for name, start, end in self.section_spans:
            if name == section:
                chunk = self.source[start:end].strip("\n")
                if chunk.strip():
                    parts.append(chunk)
        return "\n".join(parts)


# ------------------------------------------------- shifting & substitution


def shift_term(t: Term, by: int, cutoff: int = 0) -> Term:
    if isinstance(t, Var):
        return Var(t.index + by) if t.index >= cutoff else t
    if isinstance(t, Const):
        return t
    if isinstance(t, Lam):
        return Lam(t.hint, shift_term(t.body, by, cutoff + 1))
    return App(shift_term(t.fn, by, cutoff), shift_term(t.arg, by, cutoff))


def shift_tp(tp: Tp, by: int, cutoff: int = 0) -> Tp:
    if isinstance(tp, AtomApp):
        return AtomApp(tp.family, tuple(shift_term(a, by, cutoff) for a in tp.args))
    if isinstance(tp, Arrow):
        return Arrow(shift_tp(tp.dom, by, cutoff), shift_tp(tp.cod, by, cutoff))
    return Pi(tp.hint, shift_tp(tp.dom, by, cutoff), shift_tp(tp.cod, by, cutoff + 1))


def shift_kind(k: Kind, by: int, cutoff: int = 0) -> Kind:
    if isinstance(k, Type):
        return k
    if isinstance(k, KArrow):
        return KArrow(shift_tp(k.dom, by, cutoff), shift_kind(k.cod, by, cutoff))
    return KPi(k.hint, shift_tp(k.dom, by, cutoff), shift_kind(k.cod, by, cutoff + 1))


def subst_term(t: Term, repl: Term, depth: int = 0) -> Term:
    """Replace Var(depth) by ``repl`` and rebalance the indices above it."""
    if isinstance(t, Var):
        if t.index == depth:
            return shift_term(repl, depth)
        return Var(t.index - 1) if t.index > depth else t
    if isinstance(t, Const):
        return t
    if isinstance(t, Lam):
        return Lam(t.hint, subst_term(t.body, repl, depth + 1))
    return App(subst_term(t.fn, repl, depth), subst_term(t.arg, repl, depth))


def subst_tp(tp: Tp, repl: Term, depth: int = 0) -> Tp:
    if isinstance(tp, AtomApp):
        return AtomApp(tp.family, tuple(subst_term(a, repl, depth) for a in tp.args))
    if isinstance(tp, Arrow):
        return Arrow(subst_tp(tp.dom, repl, depth), subst_tp(tp.cod, repl, depth))
    return Pi(tp.hint, subst_tp(tp.dom, repl, depth), subst_tp(tp.cod, repl, depth + 1))


def subst_kind(k: Kind, repl: Term, depth: int = 0) -> Kind:
    if isinstance(k, Type):
        return k
    if isinstance(k, KArrow):
        return KArrow(subst_tp(k.dom, repl, depth), subst_kind(k.cod, repl, depth))
    return KPi(k.hint, subst_tp(k.dom, repl, depth), subst_kind(k.cod, repl, depth + 1))


def subst(body: Term, replacement: Term) -> Term:
    """Eliminate the single binder scoping ``body``, capture-avoidingly."""
    return subst_term(body, replacement, 0)


# --------------------------------------------------------- alpha equality


def alpha_equal(a: Term, b: Term) -> bool:
    """Identity up to the choice of bound names (hints are ignored)."""
    if isinstance(a, Var) and isinstance(b, Var):
        return a.index == b.index
    if isinstance(a, Const) and isinstance(b, Const):
        return a.name == b.name
    if isinstance(a, Lam) and isinstance(b, Lam):
        return alpha_equal(a.body, b.body)
    if isinstance(a, App) and isinstance(b, App):
        return alpha_equal(a.fn, b.fn) and alpha_equal(a.arg, b.arg)
    return False


def tp_alpha_equal(a: Tp, b: Tp) -> bool:
    if isinstance(a, AtomApp) and isinstance(b, AtomApp):
        return (
            a.family == b.family
            and len(a.args) == len(b.args)
            and all(alpha_equal(x, y) for x, y in zip(a.args, b.args))
        )
    if isinstance(a, Arrow) and isinstance(b, Arrow):
        return tp_alpha_equal(a.dom, b.dom) and tp_alpha_equal(a.cod, b.cod)
    if isinstance(a, Pi) and isinstance(b, Pi):
        return tp_alpha_equal(a.dom, b.dom) and tp_alpha_equal(a.cod, b.cod)
    return False


def kind_alpha_equal(a: Kind, b: Kind) -> bool:
    if isinstance(a, Type) and isinstance(b, Type):
        return True
    if isinstance(a, KArrow) and isinstance(b, KArrow):
        return tp_alpha_equal(a.dom, b.dom) and kind_alpha_equal(a.cod, b.cod)
    if isinstance(a, KPi) and isinstance(b, KPi):
        return tp_alpha_equal(a.dom, b.dom) and kind_alpha_equal(a.cod, b.cod)
    return False


def block_alpha_equal(a: Block, b: Block) -> bool:
    """Positional match of entry types; labels are renaming-invariant."""
    return len(a.entries) == len(b.entries) and all(
        tp_alpha_equal(x, y) for (_, x), (_, y) in zip(a.entries, b.entries)
    )


def ctx_alpha_equal(a: CtxPattern, b: CtxPattern) -> bool:
    if isinstance(a, EmptyCtx) and isinstance(b, EmptyCtx):
        return True
    if isinstance(a, CtxVar) and isinstance(b, CtxVar):
        return a.name == b.name
    if isinstance(a, Snoc) and isinstance(b, Snoc):
        return (
            ctx_alpha_equal(a.prefix, b.prefix)
            and a.label == b.label
            and block_alpha_equal(a.block, b.block)
        )
    return False


def prp_alpha_equal(a: Prp, b: Prp) -> bool:
    """Structural equality; terms compared up to alpha, prp binders by name."""
    if type(a) is not type(b):
        return False
    if isinstance(a, RelApp):
        return (
            a.name == b.name
            and len(a.ctxs) == len(b.ctxs)
            and all(ctx_alpha_equal(x, y) for x, y in zip(a.ctxs, b.ctxs))
        )
    if isinstance(a, Judgment):
        return (
            ctx_alpha_equal(a.ctx, b.ctx)
            and a.family == b.family
            and len(a.args) == len(b.args)
            and all(alpha_equal(x, y) for x, y in zip(a.args, b.args))
        )
    if isinstance(a, TermEq):
        return alpha_equal(a.lhs, b.lhs) and alpha_equal(a.rhs, b.rhs)
    if isinstance(a, (TrueP, FalseP)):
        return True
    if isinstance(a, (And, Or, Imp)):
        return prp_alpha_equal(a.lhs, b.lhs) and prp_alpha_equal(a.rhs, b.rhs)
    if isinstance(a, ForallCtx):
        return a.var == b.var and a.schema == b.schema and prp_alpha_equal(a.body, b.body)
    if isinstance(a, (ForallTm, ExistsTm)):
        return a.var == b.var and tp_alpha_equal(a.tp, b.tp) and prp_alpha_equal(a.body, b.body)
    return False


def _node_alpha_equal(a, b) -> bool:
    if type(a) is not type(b):
        return False
    if isinstance(a, ConstDecl):
        return a.name == b.name and tp_alpha_equal(a.tp, b.tp)
    if isinstance(a, FamDecl):
        return a.name == b.name and kind_alpha_equal(a.kind, b.kind)
    if isinstance(a, Schema):
        return (
            a.name == b.name
            and len(a.alternatives) == len(b.alternatives)
            and all(block_alpha_equal(x, y) for x, y in zip(a.alternatives, b.alternatives))
        )
    if isinstance(a, InductiveDef):
        return (
            a.name == b.name
            and a.params == b.params
            and len(a.clauses) == len(b.clauses)
            and all(
                n1 == n2 and prp_alpha_equal(p1, p2)
                for (n1, p1), (n2, p2) in zip(a.clauses, b.clauses)
            )
        )
    if isinstance(a, Directive):
        return a == b
    if isinstance(a, Theorem):
        return a.name == b.name and prp_alpha_equal(a.statement, b.statement)
    return False


def spec_alpha_equal(a: OrbiSpec, b: OrbiSpec) -> bool:
    """Section-wise comparison up to alpha, ignoring locations and layout."""
    for attr in (
        "syntax_decls",
        "judgment_decls",
        "rules",
        "schemas",
        "definitions",
        "directives",
        "theorems",
    ):
        xs, ys = getattr(a, attr), getattr(b, attr)
        if len(xs) != len(ys) or not all(_node_alpha_equal(x, y) for x, y in zip(xs, ys)):
            return False
    return True


# -------------------------------------------------------- name inspection


def const_names(node, out: set | None = None) -> set[str]:
    """Every Const name occurring in a Term/Tp/Kind/Block."""
    if out is None:
        out = set()
    if isinstance(node, Var):
        pass
    elif isinstance(node, Const):
        out.add(node.name)
    elif isinstance(node, Lam):
        const_names(node.body, out)
    elif isinstance(node, App):
        const_names(node.fn, out)
        const_names(node.arg, out)
    elif isinstance(node, AtomApp):
        out.add(node.family)
        for a in node.args:
            const_names(a, out)
    elif isinstance(node, (Arrow, KArrow)):
        const_names(node.dom, out)
        const_names(node.cod, out)
    elif isinstance(node, (Pi, KPi)):
        const_names(node.dom, out)
        const_names(node.cod, out)
    elif isinstance(node, Type):
        pass
    elif isinstance(node, Block):
        for _, tp in node.entries:
            const_names(tp, out)
    return out


def term_closed(t: Term, depth: int = 0) -> bool:
    if isinstance(t, Var):
        return t.index < depth
    if isinstance(t, Const):
        return True
    if isinstance(t, Lam):
        return term_closed(t.body, depth + 1)
    return term_closed(t.fn, depth) and term_closed(t.arg, depth)


def tp_closed(tp: Tp, depth: int = 0) -> bool:
    if isinstance(tp, AtomApp):
        return all(term_closed(a, depth) for a in tp.args)
    if isinstance(tp, Arrow):
        return tp_closed(tp.dom, depth) and tp_closed(tp.cod, depth)
    return tp_closed(tp.dom, depth) and tp_closed(tp.cod, depth + 1)
