import json

import pytest

from conftest import golden
from orbi_forge import corpus_source
from orbi_forge.cli import run


@pytest.fixture()
def corpus_file(tmp_path):
    p = tmp_path / "eq.orbi"
    p.write_text(corpus_source(), encoding="utf-8")
    return str(p)


def test_check_corpus_exits_zero(corpus_file, capsys):
    assert run(["check", corpus_file]) == 0
    assert capsys.readouterr().err == ""


def test_translate_writes_output(corpus_file, tmp_path, capsys):
    out_dir = tmp_path / "out"
    out_dir.mkdir()
    code = run(["translate", "--target", "ab", "--out-dir", str(out_dir), corpus_file])
    assert code == 0
    out = (out_dir / "eq.ab.out").read_text(encoding="utf-8")
    assert golden("ae_l.ab.golden").strip() in out
    assert golden("reflG.ab.golden").strip() in out


def test_translate_all_targets(corpus_file, tmp_path):
    for target in ("ab", "hy", "bel", "tw"):
        assert run(["translate", "--target", target, "--out-dir", str(tmp_path), corpus_file]) == 0
        assert (tmp_path / f"eq.{target}.out").exists()


def test_missing_input_is_usage_error(capsys):
    assert run(["check", "/nonexistent.orbi"]) == 2
    assert "no such input" in capsys.readouterr().err


def test_no_arguments_is_usage_error(capsys):
    assert run([]) == 2


def test_unknown_target_is_usage_error(corpus_file, capsys):
    assert run(["translate", "--target", "coq", corpus_file]) == 2


def test_bad_spec_reports_diagnostic_line(tmp_path, capsys):
    p = tmp_path / "bad.orbi"
    p.write_text("%% Syntax\nlam: tm ->.\n", encoding="utf-8")
    assert run(["check", str(p)]) == 1
    err = capsys.readouterr().err
    assert f"{p}:2:" in err
    assert "[E-PARSE]" in err


def test_structured_diagnostics(tmp_path, capsys):
    p = tmp_path / "bad.orbi"
    p.write_text("%% Syntax\nlam: tm ->.\n", encoding="utf-8")
    assert run(["check", "--structured", str(p)]) == 1
    records = [json.loads(line) for line in capsys.readouterr().err.splitlines()]
    assert records[0]["code"] == "E-PARSE"
    assert records[0]["line"] == 2


def test_lint_warnings_and_werror(tmp_path, capsys):
    p = tmp_path / "warn.orbi"
    p.write_text("%% Syntax\ntm: type.\nk: {x:tm} tm.\n", encoding="utf-8")
    assert run(["lint", str(p)]) == 0
    assert "[L3]" in capsys.readouterr().err
    assert run(["lint", "--werror", str(p)]) == 1


def test_fmt_is_a_fixpoint(corpus_file, tmp_path, capsys):
    assert run(["fmt", corpus_file]) == 0
    once = capsys.readouterr().out
    p = tmp_path / "fmt.orbi"
    p.write_text(once, encoding="utf-8")
    assert run(["fmt", str(p)]) == 0
    assert capsys.readouterr().out == once


def test_exit_codes_deterministic(corpus_file):
    assert run(["check", corpus_file]) == run(["check", corpus_file])


def test_color_env_respected(tmp_path, capsys, monkeypatch):
    p = tmp_path / "bad.orbi"
    p.write_text("%% Syntax\nlam: tm ->.\n", encoding="utf-8")
    monkeypatch.setenv("ORBI_COLOR", "always")
    run(["check", str(p)])
    assert "\x1b[31m" in capsys.readouterr().err
    monkeypatch.setenv("ORBI_COLOR", "never")
    run(["check", str(p)])
    assert "\x1b[31m" not in capsys.readouterr().err


def test_multiple_inputs_processed(tmp_path, capsys):
    good = tmp_path / "good.orbi"
    good.write_text(corpus_source(), encoding="utf-8")
    bad = tmp_path / "bad.orbi"
    bad.write_text("%% Syntax\nlam: tm ->.\n", encoding="utf-8")
    assert run(["check", str(good), str(bad)]) == 1
    err = capsys.readouterr().err
    assert "bad.orbi" in err and "good.orbi" not in err
