import pytest

from simprune.graphstore import GraphDatabase, load_ntriples, parse_ntriples
from support import BORN_IN_ORDER, FIXTURES


@pytest.fixture
def movies_db():
    return load_ntriples(FIXTURES / "movies.nt")


@pytest.fixture
def born_in_db():
    return GraphDatabase.from_triples(parse_ntriples(FIXTURES / "born_in.nt"), nodes=BORN_IN_ORDER)


@pytest.fixture
def directors_db():
    return load_ntriples(FIXTURES / "directors.nt")


@pytest.fixture
def cycles_db():
    return load_ntriples(FIXTURES / "cycles.nt")


@pytest.fixture
def optional_join_db():
    return load_ntriples(FIXTURES / "optional_join.nt")


def pytest_terminal_summary(terminalreporter):
    from support import ACCEPTANCE

    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
