"""Small shared helpers for building inline specifications in tests."""

from orbi_forge import check_spec, parse_spec
from orbi_forge.errors import OrbiError

_SECTION_ORDER = (
    ("syntax", "Syntax"),
    ("judgments", "Judgments"),
    ("rules", "Rules"),
    ("schemas", "Schemas"),
    ("definitions", "Definitions"),
    ("directives", "Directives"),
    ("theorems", "Theorems"),
)


def make_spec(**sections) -> str:
    parts = []
    for key, name in _SECTION_ORDER:
        body = sections.get(key)
        if body:
            parts.append(f"%% {name}\n{body.strip()}")
    return "\n\n".join(parts) + "\n"


def check_all(source: str):
    return check_spec(parse_spec(source))


def first_error_code(source: str):
    """Code of the first diagnostic the pipeline rejects ``source`` with."""
    try:
        check_all(source)
    except OrbiError as e:
        return e.diagnostics()[0].code
    return None
