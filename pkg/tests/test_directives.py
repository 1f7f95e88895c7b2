import pytest

from helpers import check_all, make_spec
from orbi_forge.directives import resolve
from orbi_forge.errors import (
    AmbiguousDestError,
    ConflictingDirectivesError,
    UnknownDestError,
)


def test_resolve_corpus_ab(checked):
    ann = resolve(checked, "ab")
    assert ann.wf_families == frozenset({"tm"})
    assert ann.explicit_rules == frozenset({"de_l", "de_r"})
    assert ann.explicit_schemas == frozenset({"xG"})
    assert ann.explicit_relation_params == {
        "Rxa": frozenset({"g"}),
        "Rda": frozenset({"g"}),
    }
    assert set(ann.explicit_theorem_vars) == {"reflG", "ceqG", "reflR", "ceqR"}
    assert all(v == frozenset({"M"}) for v in ann.explicit_theorem_vars.values())


def test_resolve_corpus_hy(checked):
    ann = resolve(checked, "hy")
    assert ann.explicit_schemas == frozenset({"xG", "daG"})
    assert ann.explicit_rules == frozenset({"de_l", "de_r"})


def test_resolve_corpus_tw_is_empty(checked):
    ann = resolve(checked, "tw")
    assert ann.wf_families == frozenset()
    assert ann.explicit_rules == frozenset()
    assert ann.explicit_schemas == frozenset()
    assert ann.explicit_relation_params == {}
    assert ann.explicit_theorem_vars == {}


def test_resolve_bel_only_theorem_vars(checked):
    ann = resolve(checked, "bel")
    assert ann.wf_families == frozenset()
    assert set(ann.explicit_theorem_vars) == {"reflG", "ceqG", "reflR", "ceqR"}


def test_targets_resolve_independently(corpus_text):
    # adding a directive for hy must not change the ab table
    extended = corpus_text.replace(
        "%% explicit [hy] in daG", "%% explicit [hy] in daG\n%% explicit [hy] in xdG"
    )
    base = resolve(check_all(corpus_text), "ab")
    more = resolve(check_all(extended), "ab")
    assert base == more


def test_resolution_order_independent(corpus_text):
    lines = corpus_text.splitlines()
    start = lines.index("%% Directives") + 1
    block = [l for l in lines[start:] if l.startswith("%% ") and " in " in l]
    permuted = corpus_text
    for a, b in zip(block, reversed(block)):
        permuted = permuted.replace(a, "\x00" + b, 1)
    permuted = permuted.replace("\x00", "")
    assert resolve(check_all(permuted), "ab") == resolve(check_all(corpus_text), "ab")


def test_conflicting_directives_rejected(corpus_text):
    bad = corpus_text.replace("%% explicit [hy] in daG", "%% implicit [hy] in de_l")
    with pytest.raises(ConflictingDirectivesError):
        check_all(bad)


def test_unknown_dest(corpus_text):
    bad = corpus_text.replace("%% wf [hy,ab] in tm", "%% wf [hy,ab] in tmm")
    with pytest.raises(UnknownDestError):
        check_all(bad)


def test_wf_dest_must_be_family(corpus_text):
    bad = corpus_text.replace("%% wf [hy,ab] in tm", "%% wf [hy,ab] in de_l")
    with pytest.raises(UnknownDestError):
        check_all(bad)


def test_ambiguous_dest():
    src = make_spec(
        syntax="tm: type.\nc: tm.",
        judgments="j: tm -> type.",
        rules="M: j c.",
        directives="%% explicit [ab] in M",
        theorems="theorem t: {M:tm} [ |- j M];",
    )
    with pytest.raises(AmbiguousDestError):
        check_all(src)
