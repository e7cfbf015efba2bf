from simprune.graphstore import load_ntriples
from simprune.lubm import RDF_TYPE, UB, generate, main


def test_exact_count_and_determinism():
    a = list(generate(5000, seed=3))
    assert len(a) == 5000
    assert a == list(generate(5000, seed=3))
    assert a != list(generate(5000, seed=4))


def test_prefix_property():
    long = list(generate(12000, seed=1))
    assert list(generate(7000, seed=1)) == long[:7000]


def test_vocabulary():
    triples = list(generate(20000))
    preds = {p for _, p, _ in triples}
    for name in ("worksFor", "advisor", "teacherOf", "takesCourse", "publicationAuthor",
                 "subOrganizationOf", "researchInterest", "teachingAssistantOf", "headOf"):
        assert UB + name in preds
    assert RDF_TYPE in preds
    assert ("<http://www.Department0.University0.edu>", UB + "subOrganizationOf",
            "<http://www.University0.edu>") in triples


def test_no_duplicates():
    triples = list(generate(30000))
    assert len(set(triples)) == len(triples)


def test_cli_writes_loadable_file(tmp_path):
    out = tmp_path / "g.nt"
    assert main(["--triples", "800", "--seed", "2", "-o", str(out)]) == 0
    assert load_ntriples(out).triple_count == 800
