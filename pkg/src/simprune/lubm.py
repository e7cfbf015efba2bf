"""Deterministic generator for LUBM-style university data.

The vocabulary follows the univ-bench ontology (``ub:worksFor``,
``ub:advisor``, ``ub:takesCourse`` ...) and IRIs follow the usual
``http://www.Department3.University0.edu/FullProfessor2`` layout, so the
benchmark queries run against it unchanged.  Output is emitted department
by department and cut off at exactly ``n_triples`` triples.

Run ``python -m simprune.lubm --triples 1000000 -o lubm.nt`` to write a file.
"""

from __future__ import annotations

import argparse
import random
import sys
from typing import Iterator

UB = "http://www.lehigh.edu/~zhp2/2004/0401/univ-bench.owl#"
RDF_TYPE = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type"

Triple = tuple[str, str, str]

_FACULTY = (
    ("FullProfessor", 7, 10),
    ("AssociateProfessor", 10, 14),
    ("AssistantProfessor", 8, 11),
    ("Lecturer", 5, 7),
)


def _iri(s: str) -> str:
    return f"<{s}>"


def _lit(s: str) -> str:
    return f'"{s}"'


class _Emitter:
    def __init__(self) -> None:
        self.buf: list[Triple] = []

    def add(self, s: str, p: str, o: str) -> None:
        self.buf.append((s, UB + p if p != "type" else RDF_TYPE, o))

    def typed(self, s: str, cls: str) -> None:
        self.add(s, "type", _iri(UB + cls))


def _department(rng: random.Random, u: int, d: int, n_universities: int) -> list[Triple]:
    out = _Emitter()
    univ = _iri(f"http://www.University{u}.edu")
    base = f"http://www.Department{d}.University{u}.edu"
    dept = _iri(base)
    out.typed(dept, "Department")
    out.add(dept, "name", _lit(f"Department{d}"))
    out.add(dept, "subOrganizationOf", univ)

    def some_univ() -> str:
        return _iri(f"http://www.University{rng.randrange(n_universities)}.edu")

    courses: list[str] = []
    grad_courses: list[str] = []
    faculty: list[str] = []
    professors: list[str] = []
    teaches: dict[str, list[str]] = {}

    for kind, lo, hi in _FACULTY:
        for i in range(rng.randint(lo, hi)):
            name = f"{kind}{i}"
            f = _iri(f"{base}/{name}")
            faculty.append(f)
            if kind != "Lecturer":
                professors.append(f)
            out.typed(f, kind)
            out.add(f, "worksFor", dept)
            out.add(f, "name", _lit(name))
            out.add(f, "emailAddress", _lit(f"{name}@Department{d}.University{u}.edu"))
            out.add(f, "telephone", _lit(f"xxx-xxx-{rng.randrange(10000):04d}"))
            out.add(f, "undergraduateDegreeFrom", some_univ())
            out.add(f, "mastersDegreeFrom", some_univ())
            out.add(f, "doctoralDegreeFrom", some_univ())
            if kind != "Lecturer":
                out.add(f, "researchInterest", _lit(f"Research{rng.randrange(30)}"))
            mine = []
            for _ in range(rng.randint(1, 2)):
                c = _iri(f"{base}/Course{len(courses)}")
                courses.append(c)
                out.typed(c, "Course")
                out.add(c, "name", _lit(f"Course{len(courses) - 1}"))
                out.add(f, "teacherOf", c)
                mine.append(c)
            if kind != "Lecturer":
                for _ in range(rng.randint(1, 2)):
                    c = _iri(f"{base}/GraduateCourse{len(grad_courses)}")
                    grad_courses.append(c)
                    out.typed(c, "GraduateCourse")
                    out.add(c, "name", _lit(f"GraduateCourse{len(grad_courses) - 1}"))
                    out.add(f, "teacherOf", c)
                    mine.append(c)
            teaches[f] = mine
            n_pub = {"FullProfessor": (15, 20), "AssociateProfessor": (10, 18),
                     "AssistantProfessor": (5, 10), "Lecturer": (0, 5)}[kind]
            for k in range(rng.randint(*n_pub)):
                pub = _iri(f"{base}/{name}/Publication{k}")
                out.typed(pub, "Publication")
                out.add(pub, "name", _lit(f"Publication{k}"))
                out.add(pub, "publicationAuthor", f)

    head = _iri(f"{base}/FullProfessor0")
    out.add(head, "headOf", dept)

    for g in range(rng.randint(3, 4) * len(faculty)):
        name = f"GraduateStudent{g}"
        st = _iri(f"{base}/{name}")
        out.typed(st, "GraduateStudent")
        out.add(st, "memberOf", dept)
        out.add(st, "name", _lit(name))
        out.add(st, "emailAddress", _lit(f"{name}@Department{d}.University{u}.edu"))
        out.add(st, "telephone", _lit(f"xxx-xxx-{rng.randrange(10000):04d}"))
        out.add(st, "undergraduateDegreeFrom", some_univ())
        adv = rng.choice(professors)
        out.add(st, "advisor", adv)
        picks = set(rng.sample(grad_courses, min(len(grad_courses), rng.randint(1, 3))))
        if rng.random() < 0.3:
            picks.add(rng.choice(teaches[adv]))
        for c in sorted(picks):
            out.add(st, "takesCourse", c)
        if rng.random() < 0.25:
            out.add(st, "teachingAssistantOf", rng.choice(courses))
        if rng.random() < 0.2:
            out.add(_iri(f"{adv[1:-1]}/Publication0"), "publicationAuthor", st)

    for s in range(rng.randint(8, 14) * len(faculty)):
        name = f"UndergraduateStudent{s}"
        st = _iri(f"{base}/{name}")
        out.typed(st, "UndergraduateStudent")
        out.add(st, "memberOf", dept)
        out.add(st, "name", _lit(name))
        out.add(st, "emailAddress", _lit(f"{name}@Department{d}.University{u}.edu"))
        out.add(st, "telephone", _lit(f"xxx-xxx-{rng.randrange(10000):04d}"))
        for c in sorted(set(rng.sample(courses, min(len(courses), rng.randint(2, 4))))):
            out.add(st, "takesCourse", c)
        if rng.random() < 0.2:
            out.add(st, "advisor", rng.choice(professors))
    return out.buf


def generate(n_triples: int = 1_000_000, seed: int = 0, n_universities: int = 1000) -> Iterator[Triple]:
    """Yield exactly ``n_triples`` ``(subject, predicate, object)`` triples.

    Subjects/objects are N-Triples terms, predicates bare IRIs.  The same
    ``(n_triples, seed)`` always yields the same sequence, and a shorter run
    is a prefix of a longer one.
    """
    rng = random.Random(seed)
    emitted = 0
    u = 0
    while emitted < n_triples:
        univ = _iri(f"http://www.University{u}.edu")
        head = [(univ, RDF_TYPE, _iri(UB + "University")), (univ, UB + "name", _lit(f"University{u}"))]
        for d in range(rng.randint(15, 25)):
            batch = (head if d == 0 else []) + _department(rng, u, d, n_universities)
            for t in batch:
                if emitted == n_triples:
                    return
                yield t
                emitted += 1
        u += 1


def main(argv: list[str] | None = None) -> int:
    p = argparse.ArgumentParser(prog="simprune-lubm", description="Write LUBM-style N-Triples.")
    p.add_argument("--triples", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", help="output file (default: stdout)")
    args = p.parse_args(argv)
    out = open(args.output, "w", encoding="utf-8", newline="\n") if args.output else sys.stdout
    try:
        for s, pred, o in generate(args.triples, args.seed):
            out.write(f"{s} <{pred}> {o} .\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


if __name__ == "__main__":
    sys.exit(main())
