import random

import pytest

import lamoracle
from helpers import make_spec
from orbi_forge import check_signature, infer_type, normalize, parse_spec, reconstruct_implicits
from orbi_forge.errors import (
    LevelError,
    LfTypeError,
    ReconstructionError,
    UnboundVariableError,
)
from orbi_forge.lf import TypingCtx, normalize_tp
from orbi_forge.parser import parse_term_str, parse_tpkind_str
from orbi_forge.pretty import tp_str
from orbi_forge.syntax import (
    AtomApp,
    Arrow,
    Pi,
    alpha_equal,
    tp_alpha_equal,
    tp_closed,
)
from specgen import gen_tm_term


def _oracle_normalize(t):
    return lamoracle.nnormalize(lamoracle.from_core(t))


def _agrees_with_oracle(t):
    return lamoracle.nalpha(lamoracle.from_core(normalize(t)), _oracle_normalize(t))


def test_normalize_beta_contraction():
    assert alpha_equal(
        normalize(parse_term_str(r"(\x. app x x) c")), parse_term_str("app c c")
    )


def test_normalize_already_normal():
    t = parse_term_str(r"lam (\x. app x x)")
    assert normalize(t) == t


def test_normalize_two_step_redex_vs_oracle():
    t = parse_term_str(r"(\x. \y. app x y) a b")
    assert alpha_equal(normalize(t), parse_term_str("app a b"))
    assert _agrees_with_oracle(t)


def test_normalize_under_binder_vs_oracle():
    t = parse_term_str(r"lam (\z. (\x. app x x) z)")
    assert alpha_equal(normalize(t), parse_term_str(r"lam (\z. app z z)"))
    assert _agrees_with_oracle(t)


def test_check_signature_corpus_levels(corpus_spec):
    sig = check_signature(corpus_spec)
    assert sig.level("tm") == 0
    assert sig.level("aeq") == 1
    assert sig.level("deq") == 1
    assert len(sig.rules()) == 8
    assert all(e.level == 1 for e in sig.rules())


def test_judgment_indexed_by_family_rejected():
    src = make_spec(syntax="tm: type.", judgments="bad: (tm -> type) -> type.")
    with pytest.raises(LevelError):
        check_signature(parse_spec(src))


def test_empty_spec_checks_to_empty_signature():
    sig = check_signature(parse_spec(""))
    assert len(sig) == 0


def test_signature_order_sensitive():
    src = make_spec(syntax="app: tm -> tm -> tm.\ntm: type.")
    with pytest.raises(UnboundVariableError):
        check_signature(parse_spec(src))


def test_infer_lambda_under_constructor(checked):
    t = parse_term_str(r"lam (\x. app x x)")
    assert infer_type(checked.sig, None, t) == AtomApp("tm")


def test_infer_constant_lookup(checked):
    tp = infer_type(checked.sig, None, parse_term_str("app"))
    assert tp == Arrow(AtomApp("tm"), Arrow(AtomApp("tm"), AtomApp("tm")))


def test_infer_type_mismatch_reports_both_types(checked):
    with pytest.raises(LfTypeError) as exc:
        infer_type(checked.sig, None, parse_term_str("app lam"))
    assert "expected tm" in exc.value.message
    assert "(tm -> tm) -> tm" in exc.value.message


def test_infer_with_typing_ctx(checked):
    ctx = TypingCtx((("x", AtomApp("tm")),))
    from orbi_forge.syntax import App, Const, Var

    assert infer_type(checked.sig, ctx, App(App(Const("app"), Var(0)), Var(0))) == AtomApp("tm")


def test_bare_lambda_cannot_be_inferred(checked):
    with pytest.raises(LfTypeError):
        infer_type(checked.sig, None, parse_term_str(r"\x. x"))


# ------------------------------------------------------------ reconstruction


def test_reconstruct_ae_a(checked):
    entry = checked.sig.get("ae_a")
    assert entry.implicit == ("M1", "N1", "M2", "N2")
    tp = entry.decl.tp
    for name in ("M1", "N1", "M2", "N2"):
        assert isinstance(tp, Pi) and tp.hint == name
        assert tp.dom == AtomApp("tm")
        tp = tp.cod
    assert tp_closed(entry.decl.tp)


def test_reconstruct_ae_l(checked):
    entry = checked.sig.get("ae_l")
    assert entry.implicit == ("M", "N")
    tp = entry.decl.tp
    for name in ("M", "N"):
        assert isinstance(tp, Pi) and tp.hint == name
        assert tp.dom == Arrow(AtomApp("tm"), AtomApp("tm"))
        tp = tp.cod


def test_reconstruct_rejects_non_pattern():
    src = make_spec(
        syntax="tm: type.",
        judgments="aeq: tm -> tm -> type.",
        rules="bad: aeq M (M M).",
    )
    with pytest.raises(ReconstructionError):
        check_signature(parse_spec(src))


def test_reconstruct_public_op(checked, corpus_spec):
    rule = corpus_spec.rules[0]
    rec = reconstruct_implicits(checked.sig, rule)
    assert tp_closed(rec.tp)
    assert tp_str(rec.tp, []).startswith("{M1:tm} {N1:tm} {M2:tm} {N2:tm}")


def test_all_corpus_rules_closed_after_reconstruction(checked):
    for entry in checked.sig.rules():
        assert tp_closed(entry.decl.tp), entry.decl.name


def test_rule_must_target_judgment():
    src = make_spec(syntax="tm: type.\nc: tm.", judgments="j: tm -> type.", rules="r: tm.")
    with pytest.raises(LevelError):
        check_signature(parse_spec(src))


# ---------------------------------------------------------------- invariants


def test_normalize_idempotent_and_subject_reduction_sample(checked):
    rng = random.Random(7)
    for _ in range(60):
        t = gen_tm_term(rng, 4)
        n = normalize(t)
        assert alpha_equal(normalize(n), n)
        before = infer_type(checked.sig, None, t)
        after = infer_type(checked.sig, None, n)
        assert tp_alpha_equal(normalize_tp(before), after)
        assert _agrees_with_oracle(t)


def test_dependent_application_substitutes():
    src = make_spec(
        syntax="tm: type.\nc: tm.",
        judgments="eq: tm -> tm -> type.",
        rules="refl: {M:tm} eq M M.",
    )
    sig = check_signature(parse_spec(src))
    from orbi_forge.syntax import App, Const

    tp = infer_type(sig, None, App(Const("refl"), Const("c")))
    assert tp == parse_tpkind_str("eq c c")
