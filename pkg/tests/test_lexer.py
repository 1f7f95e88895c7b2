import pytest

from orbi_forge.errors import LexError
from orbi_forge.lexer import tokenize


def _kinds_lexemes(source):
    return [(t.kind, t.lexeme) for t in tokenize(source) if t.kind != "eof"]


def test_tokenize_judgment_decl():
    assert _kinds_lexemes("aeq: tm -> tm -> type.") == [
        ("id", "aeq"),
        ("punct", ":"),
        ("id", "tm"),
        ("punct", "->"),
        ("id", "tm"),
        ("punct", "->"),
        ("kw", "type"),
        ("punct", "."),
    ]


def test_tokenize_empty():
    assert _kinds_lexemes("") == []


def test_tokenize_schema_line():
    toks = _kinds_lexemes("schema xG =  block (x:tm);")
    assert toks[0] == ("kw", "schema")
    assert ("kw", "block") in toks


def test_uppercase_identifiers_get_their_own_kind():
    assert _kinds_lexemes("M1 n") == [("uid", "M1"), ("id", "n")]


def test_primed_identifiers():
    assert _kinds_lexemes("de_l'") == [("id", "de_l'")]


def test_directive_line_lexed_whole():
    toks = tokenize("tm: type.\n%% wf [hy,ab] in tm\napp: tm.\n")
    directives = [t for t in toks if t.kind == "directive"]
    assert [t.lexeme for t in directives] == ["%% wf [hy,ab] in tm"]


def test_plain_comments_discarded():
    assert _kinds_lexemes("% a comment\ntm: type.") == [
        ("id", "tm"),
        ("punct", ":"),
        ("kw", "type"),
        ("punct", "."),
    ]


def test_mid_line_percent_is_comment():
    assert _kinds_lexemes("tm: type. % trailing %% not a directive") == [
        ("id", "tm"),
        ("punct", ":"),
        ("kw", "type"),
        ("punct", "."),
    ]


def test_bar_family_disambiguation():
    assert _kinds_lexemes("|| |- |") == [
        ("punct", "||"),
        ("punct", "|-"),
        ("punct", "|"),
    ]


def test_arrows_and_angles():
    assert _kinds_lexemes("<- < > ->") == [
        ("punct", "<-"),
        ("punct", "<"),
        ("punct", ">"),
        ("punct", "->"),
    ]


def test_illegal_character_reports_location():
    with pytest.raises(LexError) as exc:
        tokenize("tm: ?")
    assert exc.value.loc.line == 1
    assert exc.value.loc.col == 5
