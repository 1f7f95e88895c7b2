"""Style guideline checks (L1-L4), all warning-severity.

Translation never depends on these; they exist to keep specifications
portable across the target systems.
"""

from __future__ import annotations

from orbi_forge.contexts import CheckedSpec
from orbi_forge.errors import Diagnostic
from orbi_forge.lf import families_in_tp
from orbi_forge.pretty import tp_str
from orbi_forge.syntax import (
    And,
    App,
    Arrow,
    AtomApp,
    Const,
    ConstDecl,
    CtxPattern,
    ExistsTm,
    ForallCtx,
    ForallTm,
    Imp,
    Judgment,
    KArrow,
    KPi,
    Lam,
    Or,
    RelApp,
    TermEq,
    Type,
    Var,
    ctx_blocks,
    ctx_head_var,
)


def _term_uses(t, depth: int) -> bool:
    if isinstance(t, Var):
        return t.index == depth
    if isinstance(t, Const):
        return False
    if isinstance(t, Lam):
        return _term_uses(t.body, depth + 1)
    return _term_uses(t.fn, depth) or _term_uses(t.arg, depth)


def _tp_uses(tp, depth: int) -> bool:
    if isinstance(tp, AtomApp):
        return any(_term_uses(a, depth) for a in tp.args)
    if isinstance(tp, Arrow):
        return _tp_uses(tp.dom, depth) or _tp_uses(tp.cod, depth)
    return _tp_uses(tp.dom, depth) or _tp_uses(tp.cod, depth + 1)


def _kind_uses(k, depth: int) -> bool:
    if isinstance(k, Type):
        return False
    if isinstance(k, KArrow):
        return _tp_uses(k.dom, depth) or _kind_uses(k.cod, depth)
    return _tp_uses(k.dom, depth) or _kind_uses(k.cod, depth + 1)


def lint(checked: CheckedSpec) -> list[Diagnostic]:
    spec = checked.spec
    sig = checked.sig
    diags: list[Diagnostic] = []

    def warn(code, message, loc, hint=""):
        diags.append(Diagnostic(code, message, loc, "warning", hint))

    def walk_terms(t, loc):
        if isinstance(t, Lam):
            if t.hint and t.hint[0].isupper():
                warn(
                    "L1",
                    f"eigenvariable {t.hint!r} should be lowercase",
                    loc,
                    f"rename {t.hint!r} to {t.hint[0].lower() + t.hint[1:]!r}",
                )
            walk_terms(t.body, loc)
        elif isinstance(t, App):
            walk_terms(t.fn, loc)
            walk_terms(t.arg, loc)

    def walk_tp(tp, loc, in_rule: bool):
        if isinstance(tp, AtomApp):
            for a in tp.args:
                walk_terms(a, loc)
            return
        if isinstance(tp, Arrow):
            walk_tp(tp.dom, loc, in_rule)
            walk_tp(tp.cod, loc, in_rule)
            return
        # Pi binder
        if in_rule and tp.hint and tp.hint[0].isupper():
            warn(
                "L1",
                f"eigenvariable {tp.hint!r} should be lowercase",
                loc,
                f"rename {tp.hint!r} to {tp.hint[0].lower() + tp.hint[1:]!r}",
            )
        if in_rule and not all(sig.level(f) == 0 for f in families_in_tp(tp.dom)):
            warn(
                "L2",
                f"quantification over the non-level-0 type '{tp_str(tp.dom, [])}'",
                loc,
                "quantify only over syntax-level (level-0) types",
            )
        if not _tp_uses(tp.cod, 0):
            warn(
                "L3",
                f"Pi-bound variable {tp.hint!r} does not occur in the body",
                loc,
                "write the non-dependent product as 'A -> B'",
            )
        walk_tp(tp.dom, loc, in_rule)
        walk_tp(tp.cod, loc, in_rule)

    def walk_kind(k, loc):
        if isinstance(k, Type):
            return
        if isinstance(k, KPi) and not _kind_uses(k.cod, 0):
            warn(
                "L3",
                f"Pi-bound variable {k.hint!r} does not occur in the kind body",
                loc,
                "write the non-dependent product as 'A -> K'",
            )
        walk_tp(k.dom, loc, False)
        walk_kind(k.cod, loc)

    def check_ctx_labels(c: CtxPattern, loc):
        seen: dict[str, str] = {}
        for blabel, block in ctx_blocks(c):
            for label, _ in block.entries:
                if label in seen:
                    warn(
                        "L4",
                        f"variable name {label!r} reused across blocks of one context",
                        loc,
                        "use distinct names across the blocks of one context",
                    )
                else:
                    seen[label] = blabel

    def check_ctx_var(name, loc):
        if name and name[0].isupper():
            warn(
                "L1",
                f"context variable {name!r} should be lowercase",
                loc,
                f"rename {name!r} to {name[0].lower() + name[1:]!r}",
            )

    # declarations
    for section, decl in spec.decls_in_order():
        if isinstance(decl, ConstDecl):
            walk_tp(decl.tp, decl.loc, in_rule=(section == "Rules"))
        else:
            walk_kind(decl.kind, decl.loc)
    for entry in sig.rules():
        for name in entry.implicit:
            if name[0].islower():
                warn(
                    "L1",
                    f"schematic variable {name!r} should be uppercase",
                    entry.decl.loc,
                    f"rename {name!r} to {name[0].upper() + name[1:]!r}",
                )

    # schemas
    for s in spec.schemas:
        for block in s.alternatives:
            for _, tp in block.entries:
                walk_tp(tp, s.loc, False)

    # definitions
    for d in spec.definitions:
        for v, _ in d.params:
            check_ctx_var(v, d.loc)
        for _, prp in d.clauses:
            stack = [prp]
            while stack:
                node = stack.pop()
                if isinstance(node, Imp):
                    stack += [node.lhs, node.rhs]
                elif isinstance(node, RelApp):
                    for c in node.ctxs:
                        head = ctx_head_var(c)
                        if head is not None:
                            check_ctx_var(head, d.loc)
                        check_ctx_labels(c, d.loc)

    # theorems
    for t in checked.theorems:
        stack = [t.statement]
        while stack:
            node = stack.pop()
            if isinstance(node, ForallCtx):
                check_ctx_var(node.var, t.loc)
                stack.append(node.body)
            elif isinstance(node, (ForallTm, ExistsTm)):
                walk_tp(node.tp, t.loc, False)
                stack.append(node.body)
            elif isinstance(node, (And, Or, Imp)):
                stack += [node.lhs, node.rhs]
            elif isinstance(node, Judgment):
                check_ctx_labels(node.ctx, t.loc)
                for a in node.args:
                    walk_terms(a, t.loc)
            elif isinstance(node, RelApp):
                for c in node.ctxs:
                    check_ctx_labels(c, t.loc)
            elif isinstance(node, TermEq):
                walk_terms(node.lhs, t.loc)
                walk_terms(node.rhs, t.loc)

    diags.sort(key=lambda d: (d.loc.line, d.loc.col, d.code))
    return diags
