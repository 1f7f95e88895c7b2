"""Tokenizer for .orbi sources.

Lines whose first non-blank characters are ``%%`` are directives and are
lexed whole; any other ``%`` starts a comment that runs to the end of the
line and is discarded.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from orbi_forge.errors import LexError
from orbi_forge.syntax import Loc

KEYWORDS = frozenset({"type", "schema", "block", "inductive", "prop", "theorem", "true", "false"})

# longest match first
_PUNCT = ("->", "<-", "||", "|-", ":", ".", "{", "}", "(", ")", "\\", ",", ";", "=", "+", "[", "]", "|", "&", "<", ">")

_ID_RE = re.compile(r"[A-Za-z][A-Za-z0-9_']*")


@dataclass(frozen=True)
class Token:
    kind: str  # id | uid | kw | punct | directive | eof
    lexeme: str
    loc: Loc
    start: int = 0
    end: int = 0


def tokenize(source: str) -> list[Token]:
    toks: list[Token] = []
    i = 0
    line = 1
    line_start = 0
    n = len(source)

    def loc(pos: int) -> Loc:
        return Loc(line, pos - line_start + 1)

    while i < n:
        c = source[i]
        if c == "\n":
            i += 1
            line += 1
            line_start = i
            continue
        if c in " \t\r":
            i += 1
            continue
        if c == "%":
            eol = source.find("\n", i)
            if eol == -1:
                eol = n
            is_directive = source.startswith("%%", i) and not source[line_start:i].strip()
            if is_directive:
                text = source[i:eol].rstrip()
                toks.append(Token("directive", text, loc(i), i, eol))
            i = eol
            continue
        m = _ID_RE.match(source, i)
        if m:
            word = m.group(0)
            if word in KEYWORDS:
                kind = "kw"
            elif word[0].isupper():
                kind = "uid"
            else:
                kind = "id"
            toks.append(Token(kind, word, loc(i), i, m.end()))
            i = m.end()
            continue
        for p in _PUNCT:
            if source.startswith(p, i):
                toks.append(Token("punct", p, loc(i), i, i + len(p)))
                i += len(p)
                break
        else:
            raise LexError(f"illegal character {c!r}", loc(i))
    toks.append(Token("eof", "", loc(i), n, n))
    return toks
