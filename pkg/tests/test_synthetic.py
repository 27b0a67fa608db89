from collections import Counter

from citefuse.ingest import write_scopus, write_wos
from citefuse.synthetic import generate_corpus, write_corpus

from .conftest import DATA


def test_bundled_data_regenerates_byte_for_byte(tmp_path):
    for path in write_corpus(tmp_path, n_records=200, refs_per_record=30, seed=0):
        assert path.read_bytes() == (DATA / path.name).read_bytes(), path.name


def test_truth_covers_every_raw_reference(bundled):
    wos, scopus, truth = bundled
    raws = {ref.raw for r in wos + scopus for ref in r.cited_refs}
    assert raws <= set(truth["variants"])
    assert len(truth["planted"]) == 40


def test_planted_groups_have_variants(bundled):
    wos, scopus, truth = bundled
    raws = {ref.raw for r in wos + scopus for ref in r.cited_refs}
    sizes = Counter(truth["variants"][raw] for raw in raws)
    assert all(sizes[w] >= 2 for w in truth["planted"])


def test_seed_changes_corpus():
    a, b = generate_corpus(30, 10, seed=1), generate_corpus(30, 10, seed=2)
    assert [r.title for r in a.wos] != [r.title for r in b.wos]
    again = generate_corpus(30, 10, seed=1)
    assert write_wos(a.wos) == write_wos(again.wos)
    assert write_scopus(a.scopus) == write_scopus(again.scopus)
