import string

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from citefuse.ingest import (
    Author, CitedRef, ParseError, Record, Source, dump_records, format_cr, format_reference, load_records,
    normalize_page, normalize_record, normalize_volume, parse_cr, parse_files, parse_reference, parse_scopus,
    parse_wos, split_author, write_scopus, write_wos,
)

from .conftest import DATA, HIRSCH_WOS

WOS_TWO = """FN Clarivate Analytics Web of Science
VR 1.0
PT J
AU Garfield, E
TI Citation indexes for science
SO SCIENCE
PY 1955
VL 122
BP 108
CR Bush V, 1945, ATLANTIC MONTHLY, V176, P101
   Bradford SC, 1934, ENGINEERING-LONDON, V137, P85
TC 800
ZZ some vendor field
UT WOS:000000000000001
ER

PT J
AU Hirsch, JE
TI An index to quantify an individual's scientific research output
SO P NATL ACAD SCI USA
PY 2005
CR Garfield E, 1955, SCIENCE, V122, P108
UT WOS:000000000000002
ER

EF
"""

SCOPUS_HEADER = "Authors,Title,Year,Source title,Volume,Page start,Cited by,References,EID\n"


def test_two_blocks_give_two_records():
    records = parse_wos(WOS_TWO)
    assert len(records) == 2
    first = records[0]
    assert first.id == "WOS:000000000000001"
    assert first.source is Source.WOS
    assert first.authors == [Author("Garfield", "E")]
    assert first.year == 1955
    assert first.times_cited == {"WOS": 800}
    assert [r.raw for r in first.cited_refs] == ["Bush V, 1945, ATLANTIC MONTHLY, V176, P101",
                                                 "Bradford SC, 1934, ENGINEERING-LONDON, V137, P85"]


def test_unknown_tags_kept_in_extra():
    assert parse_wos(WOS_TWO)[0].extra == {"ZZ": "some vendor field"}


def test_missing_er_reports_byte_offset():
    text = WOS_TWO.replace("UT WOS:000000000000002\nER\n", "UT WOS:000000000000002\n")
    start = text.encode().index(b"PT J\nAU Hirsch")
    with pytest.raises(ParseError, match=f"byte offset {start}"):
        parse_wos(text)


def test_cr_line_full():
    ref = parse_cr(HIRSCH_WOS[0])
    assert (ref.author_surname, ref.author_initials, ref.year) == ("Hirsch", "JE", 2005)
    assert ref.source_name == "P NATL ACAD SCI USA"
    assert (ref.volume, ref.first_page, ref.doi) == ("102", "16569", "10.1073/pnas.0507655102")


def test_cr_line_without_volume_or_page():
    ref = parse_cr("Hirsch J. E., 2005, P NAT AC SCI US")
    assert ref.volume is None and ref.first_page is None
    assert ref.source_name == "P NAT AC SCI US"
    assert ref.author_initials == "JE"


def test_cr_single_word_source_starting_with_p_or_v():
    ref = parse_cr("Smith J, 2015, PLOS, V5, P619")
    assert (ref.source_name, ref.volume, ref.first_page) == ("PLOS", "5", "619")
    ref = parse_cr("Smith J, 2015, VACCINE, V33, PE12")
    assert (ref.source_name, ref.volume, ref.first_page) == ("VACCINE", "33", "E12")


def test_cr_anonymous_author():
    ref = parse_cr("[Anonymous], 2001, NATURE, V410, P1")
    assert ref.author_surname is None
    assert ref.year == 2001


def test_tab_delimited_variant():
    text = "PT\tAU\tTI\tSO\tPY\tCR\tUT\n" \
           "J\tGarfield, E\tCitation indexes\tSCIENCE\t1955\tBush V, 1945, ATLANTIC MONTHLY, V176, P101; " \
           "Bradford SC, 1934, ENGINEERING-LONDON, V137, P85\tWOS:1\n"
    [r] = parse_wos(text)
    assert r.id == "WOS:1" and r.year == 1955
    assert len(r.cited_refs) == 2


def test_latin1_fallback():
    text = WOS_TWO.replace("TI Citation indexes for science", "TI Citation indexes for sciénce")
    data = text.encode("utf-8").replace("sciénce".encode("utf-8"), "sciénce".encode("latin-1"))
    assert parse_wos(data)[0].title == "Citation indexes for sciénce"


def test_scopus_reference_full():
    raw = ("Hirsch, J.E., An index to quantify an individual's scientific research output (2005) Proceedings of "
           "the National Academy of Sciences of the United States of America, 102 (46), pp. 16569-16572")
    ref = parse_reference(raw)
    assert ref.title == "An index to quantify an individual's scientific research output"
    assert (ref.volume, ref.first_page, ref.year) == ("102", "16569", 2005)
    assert ref.source_name.startswith("Proceedings of the National Academy")
    assert (ref.author_surname, ref.author_initials) == ("Hirsch", "JE")


def test_scopus_reference_without_year():
    ref = parse_reference("Hirsch, J., An index to quantify an individual's scientific research output, "
                          "Proceedings of the National Academy of Sciences USA, 102, pp. 16569-16572")
    assert ref.year is None
    assert ref.source_name == "Proceedings of the National Academy of Sciences USA"
    assert (ref.volume, ref.first_page) == ("102", "16569")


def test_unparseable_reference_is_raw_only():
    ref = parse_reference("Unpublished manuscript")
    assert ref.raw == "Unpublished manuscript"
    assert ref.author_surname is None and ref.year is None


def test_scopus_rows_and_empty_references():
    text = SCOPUS_HEADER + \
        'Garfield E.,A,1955,Science,122,108,3,"Bush, V., As we may think (1945) Atlantic Monthly, 176, pp. 101-108",2-s2.0-1\n' \
        'Small H.,B,1973,JASIS,24,265,5,,2-s2.0-2\n' \
        'Price D.,C,1965,Science,149,510,9,,2-s2.0-3\n'
    records = parse_scopus(text)
    assert len(records) == 3
    assert records[1].cited_refs == []
    assert records[0].times_cited == {"SCOPUS": 3}
    assert records[0].cited_refs[0].first_page == "101"


def test_scopus_missing_columns_listed():
    with pytest.raises(ParseError, match="References"):
        parse_scopus("Authors,Title,Year,Source title\nA,B,2000,C\n")


def test_normalizers():
    assert normalize_page("pp. 16569-16572") == "16569"
    assert normalize_page("P16569") == "16569"
    assert normalize_volume("V102") == "102"
    assert normalize_volume("102") == "102"


@pytest.mark.parametrize("text,expected", [
    ("Garfield, E", Author("Garfield", "E")),
    ("Hirsch J. E.", Author("Hirsch", "JE")),
    ("Hirsch, J.E.", Author("Hirsch", "JE")),
    ("van Raan AFJ", Author("van Raan", "AFJ")),
])
def test_split_author(text, expected):
    assert split_author(text) == expected


def test_normalize_record_idempotent(bundled):
    wos, scopus, _ = bundled
    for r in wos[:20] + scopus[:20]:
        once = normalize_record(r)
        assert normalize_record(once) == once
        assert once == r  # parsers already normalize


def test_parse_deterministic():
    data = (DATA / "synthetic_wos.txt").read_bytes()
    assert parse_wos(data) == parse_wos(data)
    data = (DATA / "synthetic_scopus.csv").read_bytes()
    assert parse_scopus(data) == parse_scopus(data)


def test_wos_roundtrip(bundled):
    wos, _, _ = bundled
    assert parse_wos(write_wos(wos)) == wos


def test_scopus_roundtrip(bundled):
    _, scopus, _ = bundled
    assert parse_scopus(write_scopus(scopus)) == scopus


def test_jsonl_store_roundtrip(bundled, tmp_path):
    wos, scopus, _ = bundled
    path = tmp_path / "records.jsonl"
    dump_records(wos + scopus, path)
    assert load_records(path) == wos + scopus


def test_parse_files_orders_by_path(tmp_path):
    (tmp_path / "b.txt").write_text(WOS_TWO)
    (tmp_path / "a.csv").write_text(SCOPUS_HEADER + "Price D.,C,1965,Science,149,510,9,,2-s2.0-3\n")
    ids = [r.id for r in parse_files([tmp_path / "b.txt", tmp_path / "a.csv"], threads=2)]
    assert ids == ["2-s2.0-3", "WOS:000000000000001", "WOS:000000000000002"]


words = st.text(alphabet=string.ascii_uppercase + " ", min_size=1, max_size=15).map(str.strip).filter(
    lambda s: s and not s.startswith(("V", "P")) and not any(t[:1] in "VP" for t in s.split()))


@given(
    surname=st.text(alphabet=string.ascii_letters, min_size=2, max_size=12).map(str.capitalize),
    initials=st.text(alphabet="ABCDEFGHJK", min_size=1, max_size=3),
    year=st.integers(1900, 2020),
    source=words,
    volume=st.integers(1, 999).map(str),
    page=st.integers(1, 99999).map(str),
)
@settings(max_examples=200)
def test_cr_format_parse_substring_property(surname, initials, year, source, volume, page):
    """Every parsed field value occurs in the raw line, and formatting inverts parsing."""
    ref = CitedRef(raw="", author_surname=surname, author_initials=initials, year=year,
                   source_name=" ".join(source.split()), volume=volume, first_page=page)
    raw = format_cr(ref)
    parsed = parse_cr(raw)
    for value in (parsed.author_surname, parsed.source_name, parsed.volume, parsed.first_page, str(parsed.year)):
        assert value in raw
    assert (parsed.author_surname, parsed.author_initials, parsed.year, parsed.source_name, parsed.volume,
            parsed.first_page) == (surname, initials, year, ref.source_name, volume, page)


@given(
    surname=st.text(alphabet=string.ascii_letters, min_size=2, max_size=12).map(str.capitalize),
    initials=st.text(alphabet="ABCDEFGHJK", min_size=1, max_size=3),
    year=st.integers(1900, 2020),
    title=st.text(alphabet=string.ascii_lowercase + " ", min_size=3, max_size=30).map(lambda s: " ".join(s.split()))
    .filter(bool),
    source=st.text(alphabet=string.ascii_letters + " ", min_size=3, max_size=30).map(lambda s: " ".join(s.split()))
    .filter(lambda s: s and not s[0].isdigit()),
    volume=st.integers(1, 999).map(str),
    page=st.integers(1, 99999).map(str),
)
@settings(max_examples=200)
def test_scopus_reference_roundtrip_property(surname, initials, year, title, source, volume, page):
    ref = CitedRef(raw="", author_surname=surname, author_initials=initials, year=year, title=title,
                   source_name=source, volume=volume, first_page=page)
    parsed = parse_reference(format_reference(ref))
    assert (parsed.author_surname, parsed.author_initials, parsed.year, parsed.title, parsed.source_name,
            parsed.volume, parsed.first_page) == (surname, initials, year, title, source, volume, page)


def test_unlinkable_records_retained():
    r = Record(id="x", source=Source.WOS, title="Editorial")
    assert not r.linkable
    text = "PT J\nTI Editorial note\nUT WOS:9\nER\n"
    [parsed] = parse_wos(text)
    assert not parsed.linkable
