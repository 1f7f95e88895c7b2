"""Batch command-line front end.

Exit codes: 0 success, 1 diagnostics at error level (or warnings under
--werror), 2 usage errors.  Diagnostics go to stderr as
``path:line:col: [CODE] message`` or as JSON records under --structured.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from orbi_forge.contexts import check_spec
from orbi_forge.errors import OrbiError
from orbi_forge.lint import lint as run_lint
from orbi_forge.parser import parse_spec
from orbi_forge.pretty import spec_str
from orbi_forge.syntax import SYSTEMS
from orbi_forge.translate import translate_spec

_RED = "\x1b[31m"
_YELLOW = "\x1b[33m"
_RESET = "\x1b[0m"


def _use_color() -> bool:
    mode = os.environ.get("ORBI_COLOR", "auto")
    if mode == "always":
        return True
    if mode == "never":
        return False
    return sys.stderr.isatty()


def _emit(diags, path: str, structured: bool) -> None:
    color = _use_color()
    for d in diags:
        if structured:
            print(json.dumps(d.to_json(path)), file=sys.stderr)
            continue
        line = d.render(path)
        if color:
            tint = _YELLOW if d.severity == "warning" else _RED
            line = line.replace(f"[{d.code}]", f"{tint}[{d.code}]{_RESET}", 1)
        print(line, file=sys.stderr)


def _build_argparser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="orbi", description="ORBI specification toolchain")
    sub = p.add_subparsers(dest="cmd", required=True)

    def common(sp):
        sp.add_argument("inputs", nargs="+", metavar="FILE", help=".orbi input files")
        sp.add_argument("--werror", action="store_true", help="treat lint warnings as errors")
        sp.add_argument(
            "--structured", action="store_true", help="machine-readable JSON diagnostics"
        )

    common(sub.add_parser("check", help="parse, type-check and validate"))
    common(sub.add_parser("lint", help="report style-guideline warnings"))
    tr = sub.add_parser("translate", help="emit a target dialect")
    tr.add_argument("--target", required=True, choices=SYSTEMS)
    tr.add_argument("--out-dir", default=".", help="directory for <name>.<target>.out files")
    common(tr)
    common(sub.add_parser("fmt", help="pretty-print canonically to stdout"))
    return p


def _out_name(path: str, target: str) -> str:
    base = os.path.basename(path)
    if base.endswith(".orbi"):
        base = base[: -len(".orbi")]
    return f"{base}.{target}.out"


def _write_atomic(path: str, text: str) -> None:
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8") as f:
        f.write(text)
    os.replace(tmp, path)


def run(argv) -> int:
    parser = _build_argparser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code else 0
    for path in args.inputs:
        if not os.path.isfile(path):
            print(f"orbi: no such input file: {path}", file=sys.stderr)
            return 2
    worst = 0
    for path in args.inputs:
        with open(path, encoding="utf-8") as f:
            text = f.read()
        if args.cmd == "fmt":
            try:
                sys.stdout.write(spec_str(parse_spec(text)))
            except OrbiError as e:
                _emit(e.diagnostics(), path, args.structured)
                worst = max(worst, 1)
            continue
        try:
            spec = parse_spec(text)
            checked = check_spec(spec)
        except OrbiError as e:
            _emit(e.diagnostics(), path, args.structured)
            worst = max(worst, 1)
            continue
        warnings = run_lint(checked)
        if warnings:
            _emit(warnings, path, args.structured)
            if args.werror:
                worst = max(worst, 1)
        if args.cmd == "translate":
            try:
                doc = translate_spec(checked, args.target)
            except OrbiError as e:
                _emit(e.diagnostics(), path, args.structured)
                worst = max(worst, 1)
                continue
            if doc.warnings:
                _emit(doc.warnings, path, args.structured)
            _write_atomic(os.path.join(args.out_dir, _out_name(path, args.target)), doc.render())
    return worst


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
