import json
from pathlib import Path

import pytest

import citefuse
from citefuse.ingest import Author, CitedRef, Record, Source, parse_scopus, parse_wos

DATA = Path(citefuse.__file__).parent / "data"

HIRSCH_WOS = [
    "Hirsch JE, 2005, P NATL ACAD SCI USA, V102, P16569, DOI 10.1073/pnas.0507655102",
    "Hirsch JE, 2005, P NATL ACAD SCI USA, V102, P16569, DOI [10.1073/pnas.0507655102, DOI 10.1073/PNAS.0507655102]",
    "Hirsch J., 2005, P NATL ACAD SCI USA, V102, P165",
    "Hirsch J. E., 2005, P NATL ACAD SCI USA, V102, P4",
    "Hirsch J. E., 2005, P NAT AC SCI US",
    "Hirsch J. E., 2005, P NATL ACAD SCI US",
]

HIRSCH_SCOPUS = [
    "Hirsch, J.E., An index to quantify an individual’s scientific research output (2005) Proceedings of the "
    "National Academy of Sciences of the United States of America, 102 (46), pp. 16569-16572",
    "Hirsch, J.E., An index to quantify an individual’s scientific research output (2005) Proceedings of the "
    "National Academy of Sciences of the United States of America, 102, pp. 16569-16572",
    "Hirsch, J.E., An Index to Quantify an Individual's Scientific Research Output (2005) Proceedings of the "
    "National Academy of Sciences, 102 (46), pp. 16569-16572",
    "Hirsch, J.E., (2005) Proc. Natl. Acad. Sci. USA, 102, pp. 16569-16572",
    "Hirsch, J.E., An index to quantify an individual's scientific research output (2005) Proc. Nation. Acad. "
    "Sci. USA, 102 (46), pp. 16569-16572",
    "Hirsch, J., An index to quantify an individual's scientific research output, Proceedings of the National "
    "Academy of Sciences USA, 102, pp. 16569-16572",
]


def make_record(rid, year=2010, refs=(), source=Source.WOS, **kw):
    """Record citing ``refs``; plain strings become refs carrying a distinct author/year."""
    cited = []
    for r in refs:
        if isinstance(r, CitedRef):
            cited.append(r)
        else:
            cited.append(CitedRef(raw=r, author_surname=r, author_initials="A", year=1990, source_name="J"))
    kw.setdefault("authors", [Author("Doe", "J")])
    return Record(id=rid, source=source, year=year, cited_refs=cited, **kw)


@pytest.fixture(scope="session")
def bundled():
    wos = parse_wos((DATA / "synthetic_wos.txt").read_bytes())
    scopus = parse_scopus((DATA / "synthetic_scopus.csv").read_bytes())
    truth = json.loads((DATA / "synthetic_truth.json").read_text(encoding="utf-8"))
    return wos, scopus, truth


def pytest_terminal_summary(terminalreporter):
    from .test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
