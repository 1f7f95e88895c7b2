"""Resolution of annotation directives into per-target tables.

A directive's destination is looked up across the document's namespaces
(family, rule, schema, relation parameter, theorem variable); a bare name
that resolves in more than one of them is an error rather than a silent
priority pick.  The defaults with no directives at all: no well-formedness
predicates, everything implicit.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from orbi_forge.errors import (
    AmbiguousDestError,
    ConflictingDirectivesError,
    UnknownDestError,
)
from orbi_forge.syntax import ExistsTm, ForallCtx, ForallTm, FamDecl


@dataclass(frozen=True)
class AnnotationTable:
    target: str
    wf_families: frozenset = frozenset()
    explicit_rules: frozenset = frozenset()
    explicit_schemas: frozenset = frozenset()
    explicit_relation_params: dict = field(default_factory=dict)
    explicit_theorem_vars: dict = field(default_factory=dict)


def _theorem_term_vars(thm):
    out = []
    p = thm.statement
    stack = [p]
    while stack:
        node = stack.pop()
        if isinstance(node, (ForallTm, ExistsTm)):
            out.append(node.var)
            stack.append(node.body)
        elif isinstance(node, ForallCtx):
            stack.append(node.body)
        elif hasattr(node, "lhs"):
            stack.append(node.lhs)
            stack.append(node.rhs)
    return out


def resolve(checked, target: str) -> AnnotationTable:
    """Annotation table for one target system; order-independent."""
    spec = checked.spec
    sig = checked.sig
    rule_names = {e.decl.name for e in sig.rules()}
    family_names = {n for n in sig.entries if isinstance(sig.entries[n].decl, FamDecl)}
    schema_names = set(checked.schemas)
    rel_params = {
        name: {v for v, _ in rel.params} for name, rel in checked.relations.items()
    }
    thm_vars = {t.name: set(_theorem_term_vars(t)) for t in checked.theorems}

    wf: set[str] = set()
    marks: dict[str, dict] = {
        "explicit": {"rule": set(), "schema": set(), "rel": set(), "thm": set()},
        "implicit": {"rule": set(), "schema": set(), "rel": set(), "thm": set()},
    }

    for d in spec.directives:
        if target not in d.systems:
            continue
        if d.what == "wf":
            if d.dest_is_ctx or d.dest not in family_names:
                raise UnknownDestError(
                    f"wf destination {d.dest!r} is not a declared type family", d.loc
                )
            wf.add(d.dest)
            continue
        mark = marks[d.what]
        if d.dest_is_ctx:
            hits = [(r, d.dest) for r, vs in rel_params.items() if d.dest in vs]
            if not hits:
                raise UnknownDestError(
                    f"no relation has a context parameter named {d.dest!r}", d.loc
                )
            mark["rel"].update(hits)
            continue
        namespaces = []
        if d.dest in rule_names:
            namespaces.append("rule")
        if d.dest in schema_names:
            namespaces.append("schema")
        rel_hits = [(r, d.dest) for r, vs in rel_params.items() if d.dest in vs]
        if rel_hits:
            namespaces.append("rel")
        thm_hits = [(t, d.dest) for t, vs in thm_vars.items() if d.dest in vs]
        if thm_hits:
            namespaces.append("thm")
        if not namespaces:
            raise UnknownDestError(f"unknown directive destination {d.dest!r}", d.loc)
        if len(namespaces) > 1:
            raise AmbiguousDestError(
                f"directive destination {d.dest!r} is ambiguous "
                f"({' and '.join(namespaces)})",
                d.loc,
            )
        ns = namespaces[0]
        if ns == "rule":
            mark["rule"].add(d.dest)
        elif ns == "schema":
            mark["schema"].add(d.dest)
        elif ns == "rel":
            mark["rel"].update(rel_hits)
        else:
            mark["thm"].update(thm_hits)

    for kind, label in (
        ("rule", "rule"),
        ("schema", "schema"),
        ("rel", "relation parameter"),
        ("thm", "theorem variable"),
    ):
        clash = marks["explicit"][kind] & marks["implicit"][kind]
        if clash:
            shown = sorted(str(x) for x in clash)[0]
            raise ConflictingDirectivesError(
                f"{label} {shown} is marked both explicit and implicit for {target!r}"
            )

    rel_table: dict[str, frozenset] = {}
    for rel, var in marks["explicit"]["rel"]:
        rel_table.setdefault(rel, set())
        rel_table[rel].add(var)
    thm_table: dict[str, frozenset] = {}
    for thm, var in marks["explicit"]["thm"]:
        thm_table.setdefault(thm, set())
        thm_table[thm].add(var)
    return AnnotationTable(
        target,
        frozenset(wf),
        frozenset(marks["explicit"]["rule"]),
        frozenset(marks["explicit"]["schema"]),
        {k: frozenset(v) for k, v in rel_table.items()},
        {k: frozenset(v) for k, v in thm_table.items()},
    )
