import os

import pytest

from orbi_forge import check_spec, corpus_source, parse_spec
from orbi_forge.translate import translate_spec

GOLDEN_DIR = os.path.join(os.path.dirname(__file__), "golden")


def golden(name: str) -> str:
    with open(os.path.join(GOLDEN_DIR, name), encoding="utf-8") as f:
        return f.read()


@pytest.fixture(scope="session")
def corpus_text():
    return corpus_source()


@pytest.fixture(scope="session")
def corpus_spec(corpus_text):
    return parse_spec(corpus_text)


@pytest.fixture(scope="session")
def checked(corpus_spec):
    return check_spec(corpus_spec)


@pytest.fixture(scope="session")
def ab_doc(checked):
    return translate_spec(checked, "ab")


@pytest.fixture(scope="session")
def hy_doc(checked):
    return translate_spec(checked, "hy")


@pytest.fixture(scope="session")
def bel_doc(checked):
    return translate_spec(checked, "bel")


@pytest.fixture(scope="session")
def tw_doc(checked):
    return translate_spec(checked, "tw")
