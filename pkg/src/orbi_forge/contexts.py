"""Checking of schemas, context patterns, context relations, and theorems.

Theorem statements get scope and arity checking only; no meaning is assigned
to a judgment-in-context, so its terms are never typed against the context.
"""

from __future__ import annotations

from dataclasses import dataclass

from orbi_forge.errors import (
    ArityError,
    Diagnostic,
    DuplicateNameError,
    OrbiError,
    SchemaMismatchError,
    TheoremScopeError,
    UnknownCtxVarError,
    UnknownRelationError,
    UnknownSchemaError,
    UnsupportedShapeError,
)
from orbi_forge.lf import (
    Signature,
    check_signature,
    check_tp,
    families_in_tp,
    kind_domains,
    normalize_tp,
)
from orbi_forge.syntax import (
    And,
    Block,
    Const,
    CtxPattern,
    CtxVar,
    EmptyCtx,
    ExistsTm,
    FalseP,
    ForallCtx,
    ForallTm,
    Imp,
    InductiveDef,
    Judgment,
    Lam,
    App,
    Or,
    OrbiSpec,
    Prp,
    RelApp,
    SYSTEMS,
    Schema,
    TermEq,
    Theorem,
    TrueP,
    Var,
    ctx_blocks,
    ctx_head_var,
    tp_alpha_equal,
)

SchemaTable = dict
RelationTable = dict


# ----------------------------------------------------------------- schemas


def check_schema(sig: Signature, s: Schema) -> Schema:
    for block in s.alternatives:
        labels = set()
        telescope = []
        for label, tp in block.entries:
            if label in labels:
                raise DuplicateNameError(
                    f"duplicate label {label!r} in a block of schema {s.name!r}", s.loc
                )
            labels.add(label)
            check_tp(sig, telescope, tp)
            telescope.append(tp)
    return s


def _block_matches(pattern: Block, alt: Block) -> bool:
    """Positional instance check: labels rename freely, types must agree
    up to alpha-beta equality."""
    if len(pattern.entries) != len(alt.entries):
        return False
    return all(
        tp_alpha_equal(normalize_tp(a), normalize_tp(b))
        for (_, a), (_, b) in zip(pattern.entries, alt.entries)
    )


def check_ctx_pattern(
    sig: Signature,
    schemas: SchemaTable,
    expected_schema: str,
    c: CtxPattern,
    ctx_vars: dict[str, str] | None = None,
) -> CtxPattern:
    ctx_vars = ctx_vars or {}
    schema = schemas.get(expected_schema)
    if schema is None:
        raise UnknownSchemaError(f"unknown schema {expected_schema!r}")
    if isinstance(c, EmptyCtx):
        return c
    if isinstance(c, CtxVar):
        declared = ctx_vars.get(c.name)
        if declared is None:
            raise UnknownCtxVarError(f"context variable {c.name!r} is not declared")
        if declared != expected_schema:
            raise SchemaMismatchError(
                f"context variable {c.name!r} has schema {declared!r} "
                f"but {expected_schema!r} is expected"
            )
        return c
    check_ctx_pattern(sig, schemas, expected_schema, c.prefix, ctx_vars)
    telescope = []
    for _, tp in c.block.entries:
        check_tp(sig, telescope, tp)
        telescope.append(tp)
    if not any(_block_matches(c.block, alt) for alt in schema.alternatives):
        raise SchemaMismatchError(
            f"block {c.label!r} matches no alternative of schema {expected_schema!r}"
        )
    return c


# --------------------------------------------------------------- relations


def _clause_parts(prp: Prp):
    premises = []
    while isinstance(prp, Imp):
        premises.append(prp.lhs)
        prp = prp.rhs
    return premises, prp


def check_inductive_def(
    sig: Signature,
    schemas: SchemaTable,
    relations: RelationTable,
    d: InductiveDef,
) -> InductiveDef:
    seen = set()
    for var, schema in d.params:
        if var in seen:
            raise DuplicateNameError(f"duplicate context parameter {var!r}", d.loc)
        seen.add(var)
        if schema not in schemas:
            raise UnknownSchemaError(f"unknown schema {schema!r}", d.loc)

    def arity_of(name: str) -> int:
        if name == d.name:
            return len(d.params)
        rel = relations.get(name)
        if rel is None:
            raise UnknownRelationError(f"unknown relation {name!r}", d.loc)
        return len(rel.params)

    def param_schema(name: str, i: int) -> str:
        if name == d.name:
            return d.params[i][1]
        return relations[name].params[i][1]

    for cname, prp in d.clauses:
        premises, head = _clause_parts(prp)
        if not isinstance(head, RelApp) or head.name != d.name:
            raise UnsupportedShapeError(
                f"clause {cname!r} must conclude with the relation being defined", d.loc
            )
        ctx_vars: dict[str, str] = {}
        for prem in premises:
            if not isinstance(prem, RelApp):
                raise UnsupportedShapeError(
                    f"premise of clause {cname!r} must be a relation application", d.loc
                )
            if len(prem.ctxs) != arity_of(prem.name):
                raise ArityError(
                    f"relation {prem.name!r} expects {arity_of(prem.name)} context "
                    f"arguments, got {len(prem.ctxs)}",
                    d.loc,
                )
            for i, arg in enumerate(prem.ctxs):
                if not isinstance(arg, CtxVar):
                    raise UnsupportedShapeError(
                        f"premise context arguments of clause {cname!r} must be bare "
                        "context variables",
                        d.loc,
                    )
                expected = param_schema(prem.name, i)
                declared = ctx_vars.setdefault(arg.name, expected)
                if declared != expected:
                    raise SchemaMismatchError(
                        f"context variable {arg.name!r} used at schemas "
                        f"{declared!r} and {expected!r}",
                        d.loc,
                    )
        if len(head.ctxs) != len(d.params):
            raise ArityError(
                f"relation {d.name!r} expects {len(d.params)} context arguments, "
                f"got {len(head.ctxs)}",
                d.loc,
            )
        for (_, schema_name), arg in zip(d.params, head.ctxs):
            try:
                check_ctx_pattern(sig, schemas, schema_name, arg, ctx_vars)
            except OrbiError as e:
                if e.loc.line == 0:
                    e.loc = d.loc
                raise
    return d


# ---------------------------------------------------------------- theorems


def scope_check_theorem(
    sig: Signature,
    schemas: SchemaTable,
    relations: RelationTable,
    t: Theorem,
) -> Theorem:
    diags: list[Diagnostic] = []
    seen: set[tuple[str, str]] = set()

    def report(code: str, message: str) -> None:
        key = (code, message)
        if key not in seen:
            seen.add(key)
            diags.append(Diagnostic(code, message, t.loc))

    def scope_term(term, depth: int, term_env: dict) -> None:
        if isinstance(term, Var):
            if term.index >= depth:
                report("E-UNBOUND", f"unbound variable index {term.index}")
        elif isinstance(term, Const):
            if term.name not in term_env and term.name not in sig:
                report("E-UNBOUND", f"unbound term variable {term.name!r}")
        elif isinstance(term, Lam):
            scope_term(term.body, depth + 1, term_env)
        elif isinstance(term, App):
            scope_term(term.fn, depth, term_env)
            scope_term(term.arg, depth, term_env)

    def scope_ctx(c: CtxPattern, ctx_env: dict) -> None:
        head = ctx_head_var(c)
        if head is not None and head not in ctx_env:
            report("E-UNBOUND", f"context variable {head!r} is not bound by a quantifier")
        for _, block in ctx_blocks(c):
            telescope = []
            for _, tp in block.entries:
                try:
                    check_tp(sig, telescope, tp)
                except OrbiError as e:
                    report(e.code, e.message)
                telescope.append(tp)

    def walk(p: Prp, ctx_env: dict, term_env: dict) -> None:
        if isinstance(p, ForallCtx):
            if p.schema not in schemas:
                report("E-NO-SCHEMA", f"unknown schema {p.schema!r}")
            walk(p.body, {**ctx_env, p.var: p.schema}, term_env)
        elif isinstance(p, (ForallTm, ExistsTm)):
            bad_level = False
            for fam in families_in_tp(p.tp):
                lvl = sig.level(fam)
                if lvl is None:
                    report("E-UNBOUND", f"unknown type family {fam!r}")
                    bad_level = True
                elif lvl != 0:
                    report(
                        "E-LEVEL",
                        f"theorem quantifier {p.var!r} must range over a level-0 "
                        f"type, not {fam!r}",
                    )
                    bad_level = True
            if not bad_level:
                try:
                    check_tp(sig, [], p.tp)
                except OrbiError as e:
                    report(e.code, e.message)
            walk(p.body, ctx_env, {**term_env, p.var: p.tp})
        elif isinstance(p, Judgment):
            scope_ctx(p.ctx, ctx_env)
            if p.family not in sig or not sig.is_family(p.family):
                report("E-UNBOUND", f"unknown judgment {p.family!r}")
            else:
                if sig.level(p.family) != 1:
                    report("E-LEVEL", f"judgment head {p.family!r} is not a level-1 family")
                want = len(kind_domains(sig.family_kind(p.family)))
                if len(p.args) != want:
                    report(
                        "E-ARITY",
                        f"judgment {p.family!r} expects {want} arguments, got {len(p.args)}",
                    )
            for a in p.args:
                scope_term(a, 0, term_env)
        elif isinstance(p, RelApp):
            rel = relations.get(p.name)
            if rel is None:
                report("E-NO-RELATION", f"unknown relation {p.name!r}")
            elif len(p.ctxs) != len(rel.params):
                report(
                    "E-ARITY",
                    f"relation {p.name!r} expects {len(rel.params)} context "
                    f"arguments, got {len(p.ctxs)}",
                )
            for c in p.ctxs:
                scope_ctx(c, ctx_env)
        elif isinstance(p, TermEq):
            scope_term(p.lhs, 0, term_env)
            scope_term(p.rhs, 0, term_env)
        elif isinstance(p, (And, Or, Imp)):
            walk(p.lhs, ctx_env, term_env)
            walk(p.rhs, ctx_env, term_env)
        elif isinstance(p, (TrueP, FalseP)):
            pass

    walk(t.statement, {}, {})
    if diags:
        raise TheoremScopeError(diags)
    return t


# ------------------------------------------------------------ the pipeline


@dataclass(frozen=True)
class CheckedSpec:
    spec: OrbiSpec
    sig: Signature
    schemas: SchemaTable
    relations: RelationTable
    theorems: tuple[Theorem, ...]


def check_spec(spec: OrbiSpec, validate_directives: bool = True) -> CheckedSpec:
    """Run the full checking pipeline over a parsed document."""
    sig = check_signature(spec)
    schemas: SchemaTable = {}
    for s in spec.schemas:
        try:
            if s.name in schemas or s.name in sig:
                raise DuplicateNameError(f"duplicate declaration of {s.name!r}")
            schemas[s.name] = check_schema(sig, s)
        except OrbiError as e:
            if e.loc.line == 0:
                e.loc = s.loc
            raise
    relations: RelationTable = {}
    for d in spec.definitions:
        try:
            if d.name in relations or d.name in sig or d.name in schemas:
                raise DuplicateNameError(f"duplicate declaration of {d.name!r}")
            relations[d.name] = check_inductive_def(sig, schemas, relations, d)
        except OrbiError as e:
            if e.loc.line == 0:
                e.loc = d.loc
            raise
    names = set()
    theorems = []
    for t in spec.theorems:
        if t.name in names:
            raise DuplicateNameError(f"duplicate theorem {t.name!r}", t.loc)
        names.add(t.name)
        theorems.append(scope_check_theorem(sig, schemas, relations, t))
    checked = CheckedSpec(spec, sig, schemas, relations, tuple(theorems))
    if validate_directives:
        from orbi_forge.directives import resolve

        for target in SYSTEMS:
            resolve(checked, target)
    return checked
