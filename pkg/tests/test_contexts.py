import pytest

from helpers import check_all, make_spec
from orbi_forge import parse_spec
from orbi_forge.contexts import (
    check_ctx_pattern,
    check_inductive_def,
    check_schema,
    scope_check_theorem,
)
from orbi_forge.errors import (
    DuplicateNameError,
    SchemaMismatchError,
    TheoremScopeError,
    UnboundVariableError,
    UnknownCtxVarError,
)
from orbi_forge.syntax import AtomApp, Block, CtxVar, EmptyCtx, Snoc, Var


def test_check_schema_dependent_block(checked):
    # u's type uses the earlier x entry
    assert "xaG" in checked.schemas
    block = checked.schemas["xaG"].alternatives[0]
    assert block.entries[1][1] == AtomApp("aeq", (Var(0), Var(0)))


def test_check_schema_alternatives():
    src = make_spec(
        syntax="tm: type.\ntp: type.",
        judgments="aeq: tm -> tm -> type.\natp: tp -> tp -> type.",
        schemas=(
            "schema xG = block (x:tm) + block (a:tp);\n"
            "schema xaG = block (x:tm, u:aeq x x) + block (a:tp, v:atp a a);"
        ),
    )
    checked = check_all(src)
    assert len(checked.schemas["xG"].alternatives) == 2
    assert len(checked.schemas["xaG"].alternatives) == 2


def test_check_schema_unbound_variable():
    src = make_spec(
        syntax="tm: type.",
        judgments="aeq: tm -> tm -> type.",
        schemas="schema bad = block (u:aeq x x);",
    )
    with pytest.raises(UnboundVariableError):
        check_all(src)


def test_check_schema_duplicate_label(checked):
    from orbi_forge.syntax import Schema

    bad = Schema("zz", (Block((("x", AtomApp("tm")), ("x", AtomApp("tm")))),))
    with pytest.raises(DuplicateNameError):
        check_schema(checked.sig, bad)


# ------------------------------------------------------------- ctx patterns


def test_ctx_pattern_block_instance(checked):
    pat = Snoc(CtxVar("h"), "b", checked.schemas["xaG"].alternatives[0])
    out = check_ctx_pattern(checked.sig, checked.schemas, "xaG", pat, {"h": "xaG"})
    assert out is pat


def test_empty_ctx_inhabits_every_schema(checked):
    for name in checked.schemas:
        check_ctx_pattern(checked.sig, checked.schemas, name, EmptyCtx())


def test_ctx_pattern_schema_mismatch(checked):
    deq_block = checked.schemas["xdG"].alternatives[0]
    pat = Snoc(CtxVar("g"), "b", deq_block)
    with pytest.raises(SchemaMismatchError):
        check_ctx_pattern(checked.sig, checked.schemas, "xaG", pat, {"g": "xaG"})


def test_ctx_pattern_unknown_var(checked):
    with pytest.raises(UnknownCtxVarError):
        check_ctx_pattern(checked.sig, checked.schemas, "xaG", CtxVar("nope"), {})


def test_ctx_var_wrong_schema(checked):
    with pytest.raises(SchemaMismatchError):
        check_ctx_pattern(checked.sig, checked.schemas, "xaG", CtxVar("g"), {"g": "xG"})


def test_block_matching_invariant_under_label_renaming(checked):
    xa = checked.schemas["xaG"].alternatives[0]
    renamed = Block((("y", xa.entries[0][1]), ("w", xa.entries[1][1])))
    pat = Snoc(CtxVar("h"), "b", renamed)
    check_ctx_pattern(checked.sig, checked.schemas, "xaG", pat, {"h": "xaG"})


# ---------------------------------------------------------------- relations


def test_corpus_relations_check(checked):
    assert set(checked.relations) == {"Rxa", "Rda"}


def test_relation_swapped_blocks_rejected(checked):
    src = make_spec(
        syntax="tm: type.",
        judgments="aeq: tm -> tm -> type.",
        schemas="schema xG = block (x:tm);\nschema xaG = block (x:tm, u:aeq x x);",
        definitions=(
            "inductive Rxa : {g:xG} {h:xaG} prop =\n"
            "| Rxa_nl: Rxa [] []\n"
            "| Rxa_cs: Rxa [g] [h] -> "
            "Rxa [g, b:block (x:tm, u:aeq x x)] [h, b:block (x:tm)];"
        ),
    )
    with pytest.raises(SchemaMismatchError):
        check_all(src)


def test_relation_premise_must_be_bare_vars(checked):
    from orbi_forge.errors import UnsupportedShapeError
    from orbi_forge.syntax import Imp, InductiveDef, RelApp

    pat = Snoc(EmptyCtx(), "b", checked.schemas["xG"].alternatives[0])
    bad = InductiveDef(
        "R2",
        (("g", "xG"),),
        (("R2_c", Imp(RelApp("R2", (pat,)), RelApp("R2", (CtxVar("g"),)))),),
    )
    with pytest.raises(UnsupportedShapeError):
        check_inductive_def(checked.sig, checked.schemas, {}, bad)


# ---------------------------------------------------------------- theorems


def test_scope_check_corpus_theorems(checked):
    assert [t.name for t in checked.theorems] == ["reflG", "ceqG", "reflR", "ceqR"]


def test_scope_check_trivial_truth(checked):
    spec = parse_spec(make_spec(theorems="theorem t: true;"))
    scope_check_theorem(checked.sig, checked.schemas, checked.relations, spec.theorems[0])


def test_scope_check_reports_all_diagnostics(checked):
    spec = parse_spec(make_spec(theorems="theorem bad: {g:noSuch} [g |- aeq M M];"))
    with pytest.raises(TheoremScopeError) as exc:
        scope_check_theorem(checked.sig, checked.schemas, checked.relations, spec.theorems[0])
    codes = {d.code for d in exc.value.diagnostics()}
    assert codes == {"E-NO-SCHEMA", "E-UNBOUND"}


def test_scope_check_stable_under_renaming(checked):
    spec = parse_spec(make_spec(theorems="theorem r2: {k:xaG}{P:tm} [k |- aeq P P];"))
    scope_check_theorem(checked.sig, checked.schemas, checked.relations, spec.theorems[0])


def test_theorem_quantifier_level_enforced(checked):
    spec = parse_spec(make_spec(theorems="theorem t: {M:aeq} true;"))
    with pytest.raises(TheoremScopeError) as exc:
        scope_check_theorem(checked.sig, checked.schemas, checked.relations, spec.theorems[0])
    assert exc.value.code == "E-LEVEL"


def test_schema_may_not_shadow_signature():
    src = make_spec(syntax="tm: type.", schemas="schema tm = block (x:tm);")
    with pytest.raises(DuplicateNameError):
        check_all(src)
