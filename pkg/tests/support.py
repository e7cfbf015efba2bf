"""Fixture paths and small helpers shared by the test modules."""

from pathlib import Path

from simprune.sparql import parse_query

FIXTURES = Path(__file__).parent / "fixtures"
EX = "http://example.org/"

# node order used by the printed born_in matrices
BORN_IN_ORDER = [f"<{EX}{n}>" for n in ("place", "director1", "director2", "coworker", "movie")]


def ex(name: str) -> str:
    return f"<{EX}{name}>"


def query(name: str):
    return parse_query((FIXTURES / name).read_text(encoding="utf-8"))


def named(db, vec) -> set[str]:
    """Local names of the nodes set in ``vec``."""
    return {db.term(i)[len(EX) + 1 : -1] for i in vec.indices()}


# criterion number -> (passed, detail); filled by test_acceptance, printed at session end
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def record(number: int, ok: bool, detail: str = "") -> bool:
    ACCEPTANCE[number] = (bool(ok), detail)
    print(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
    return bool(ok)
